#include "eulerline/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eulerline {

namespace {

long long dot(const Mode& a, const Mode& b) {
  return static_cast<long long>(a.k1) * b.k1 + static_cast<long long>(a.k2) * b.k2;
}

long long det(const Mode& a, const Mode& b) {
  return static_cast<long long>(a.k1) * b.k2 - static_cast<long long>(a.k2) * b.k1;
}

// rho_n as exact integer arithmetic; valid for any n, zero only at the
// excluded origin index.
long long rho_exact(const Mode& khat, const Mode& p, long long n) {
  return khat.norm2() + 2 * n * dot(khat, p) + n * n * p.norm2();
}

}  // namespace

Mode::Mode(int k1_, int k2_) : k1(k1_), k2(k2_) {
  if (k1 == 0 && k2 == 0) throw std::invalid_argument("mode must be nonzero");
}

double coeff_A(const Mode& p, const Mode& q) {
  const double inv_q = 1.0 / static_cast<double>(q.norm2());
  const double inv_p = 1.0 / static_cast<double>(p.norm2());
  return 0.5 * (inv_q - inv_p) * static_cast<double>(det(p, q));
}

std::optional<long long> zero_mode_index(const Mode& khat, const Mode& p) {
  // khat + n p = 0 has a solution iff khat is an integer multiple of -p.
  long long n;
  if (p.k1 != 0) {
    if (khat.k1 % p.k1 != 0) return std::nullopt;
    n = -static_cast<long long>(khat.k1) / p.k1;
  } else {
    if (khat.k2 % p.k2 != 0) return std::nullopt;
    n = -static_cast<long long>(khat.k2) / p.k2;
  }
  if (khat.k1 + n * p.k1 == 0 && khat.k2 + n * p.k2 == 0) return n;
  return std::nullopt;
}

Mode ClassChain::mode_at(long long n) const {
  const long long m1 = khat.k1 + n * p.k1;
  const long long m2 = khat.k2 + n * p.k2;
  return Mode(static_cast<int>(m1), static_cast<int>(m2));
}

long long ClassChain::rho_at(long long n) const {
  const long long r = rho_exact(khat, p, n);
  if (r == 0)
    throw std::invalid_argument("chain mode at n=" + std::to_string(n) + " is the origin");
  return r;
}

double ClassChain::coeff_at(long long n) const {
  return 0.5 * (1.0 / static_cast<double>(rho_at(n)) -
                1.0 / static_cast<double>(p.norm2())) *
         static_cast<double>(D);
}

double ClassChain::pair_at(long long n) const {
  return coeff_A(mode_at(n), mode_at(n + 1));
}

ClassChain build_chain(const Mode& khat, const Mode& p, int n_min, int n_max) {
  if (n_min >= n_max)
    throw std::invalid_argument("chain range must satisfy n_min < n_max");
  if (auto z = zero_mode_index(khat, p); z && *z >= n_min && *z <= n_max)
    throw std::invalid_argument("chain mode at n=" + std::to_string(*z) + " is the origin");

  ClassChain c{khat, p, n_min, n_max, det(p, khat), {}, {}, {}};
  const std::size_t len = static_cast<std::size_t>(n_max - n_min + 1);
  c.rho.reserve(len);
  c.A.reserve(len);
  c.A_pair.reserve(len - 1);
  for (int n = n_min; n <= n_max; ++n) {
    c.rho.push_back(rho_exact(khat, p, n));
    c.A.push_back(c.coeff_at(n));
    if (n < n_max) c.A_pair.push_back(c.pair_at(n));
  }
  return c;
}

std::vector<long long> disk_intersection(const Mode& khat, const Mode& p) {
  // rho_n <= |p|^2 is a n^2 + b n + c <= 0 with a > 0; bracket the real roots
  // and verify candidates in exact integers (the widening absorbs sqrt rounding).
  const long long a = p.norm2();
  const long long b = 2 * dot(khat, p);
  const long long c = khat.norm2() - p.norm2();
  const double disc = static_cast<double>(b) * b - 4.0 * static_cast<double>(a) * c;
  if (disc < 0) return {};
  const double root = std::sqrt(disc);
  const long long lo = static_cast<long long>(std::floor((-b - root) / (2.0 * a))) - 1;
  const long long hi = static_cast<long long>(std::ceil((-b + root) / (2.0 * a))) + 1;
  std::vector<long long> out;
  for (long long n = lo; n <= hi; ++n)
    if (rho_exact(khat, p, n) <= p.norm2()) out.push_back(n);
  return out;
}

std::vector<long long> boundary_indices(const Mode& khat, const Mode& p) {
  std::vector<long long> out;
  for (long long n : disk_intersection(khat, p))
    if (rho_exact(khat, p, n) == p.norm2()) out.push_back(n);
  return out;
}

Representative canonical_representative(const Mode& khat, const Mode& p) {
  if (zero_mode_index(khat, p))
    throw std::invalid_argument("class contains the origin");
  // rho_n is a strictly convex quadratic in n, so its integer minimum sits at
  // floor or ceil of the real vertex. Lexicographic tie-break on the mode.
  const double vertex = -static_cast<double>(dot(khat, p)) / static_cast<double>(p.norm2());
  const long long lo = static_cast<long long>(std::floor(vertex));
  const long long hi = lo + 1;
  long long best = lo;
  const long long rho_lo = rho_exact(khat, p, lo);
  const long long rho_hi = rho_exact(khat, p, hi);
  if (rho_hi < rho_lo) {
    best = hi;
  } else if (rho_hi == rho_lo) {
    const Mode mlo{static_cast<int>(khat.k1 + lo * p.k1), static_cast<int>(khat.k2 + lo * p.k2)};
    const Mode mhi{static_cast<int>(khat.k1 + hi * p.k1), static_cast<int>(khat.k2 + hi * p.k2)};
    if (mhi.k1 < mlo.k1 || (mhi.k1 == mlo.k1 && mhi.k2 < mlo.k2)) best = hi;
  }
  const Mode m{static_cast<int>(khat.k1 + best * p.k1), static_cast<int>(khat.k2 + best * p.k2)};
  return {best, m};
}

}  // namespace eulerline
