#include "eulerline/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "eulerline/errors.hpp"

namespace eulerline {

namespace {

using cplx = std::complex<double>;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Maximal decoupling-free index windows of the chain. A_m = 0 makes column m
// of the operator vanish, so the dynamics splits into the sub-chains strictly
// left and right of m (plus a structural zero eigenvalue carried by e_m).
struct Segment {
  std::optional<long long> lo, hi;  // nullopt = unbounded
};

std::vector<Segment> chain_segments(const ClassChain& chain) {
  const auto splits = boundary_indices(chain.khat, chain.p);
  if (splits.empty()) return {Segment{}};
  std::vector<Segment> segs;
  segs.push_back(Segment{std::nullopt, splits.front() - 1});
  for (std::size_t i = 0; i + 1 < splits.size(); ++i)
    if (splits[i] + 1 <= splits[i + 1] - 1)
      segs.push_back(Segment{splits[i] + 1, splits[i + 1] - 1});
  segs.push_back(Segment{splits.back() + 1, std::nullopt});
  return segs;
}

// Index of smallest rho within the segment: vertex of the rho quadratic,
// clamped, with the smaller index winning ties.
long long matching_index(const ClassChain& chain, const Segment& seg) {
  const double kp = 0.5 * (static_cast<double>(chain.rho_at(1)) -
                           static_cast<double>(chain.rho_at(-1))) /
                    2.0;  // khat . p recovered from rho differences
  const double vertex = -kp / static_cast<double>(chain.p.norm2());
  long long lo = static_cast<long long>(std::floor(vertex));
  long long hi = lo + 1;
  if (seg.lo) lo = std::max(lo, *seg.lo), hi = std::max(hi, *seg.lo);
  if (seg.hi) lo = std::min(lo, *seg.hi), hi = std::min(hi, *seg.hi);
  return chain.rho_at(hi) < chain.rho_at(lo) ? hi : lo;
}

// Root of a r^2 + lambda r - a = 0 with |r| < 1 (the roots multiply to -1).
// Computed from the larger root to dodge cancellation.
cplx decaying_tail_root(cplx lambda, double a) {
  const cplx s = std::sqrt(lambda * lambda + 4.0 * a * a);
  const cplx num = (std::norm(lambda + s) >= std::norm(lambda - s)) ? -(lambda + s)
                                                                    : -(lambda - s);
  const cplx big = num / (2.0 * a);
  return -1.0 / big;
}

double segment_distance(cplx lambda, double half) {
  const double re = std::abs(lambda.real());
  const double im = std::abs(lambda.imag());
  return im <= half ? re : std::hypot(re, im - half);
}

// Dispersion function of one chain segment.
struct CfFunction {
  const ClassChain* chain;
  double gamma;
  Segment seg;
  long long n0;
  long long M;

  double a(long long n) const { return gamma * chain->coeff_at(n); }

  cplx operator()(cplx lambda) const {
    const double a_inf =
        -gamma * static_cast<double>(chain->D) / (2.0 * static_cast<double>(chain->p.norm2()));
    if (a_inf == 0.0) return lambda;  // zero operator
    const double half = 2.0 * std::abs(a_inf);
    if (segment_distance(lambda, half) < 1e-9)
      throw numerical_error("dispersion undefined on the continuum segment");

    cplx r_tail{};
    if (!seg.hi || !seg.lo) {
      r_tail = decaying_tail_root(lambda, a_inf);
      if (std::abs(r_tail) > 1.0 - 1e-12)
        throw numerical_error("no decaying tail ratio: lambda effectively on the segment");
    }

    // Both recursions run in projective form r = u/v with per-step
    // normalization: an intermediate ratio passing through a pole (v ~ 0) is
    // a harmless Moebius step (inf -> 0), not a failure. Only a pole of F
    // itself, i.e. a vanishing denominator at the matching index, surfaces.
    cplx ur = seg.hi ? cplx(0.0) : r_tail, vr(1.0);
    const long long r_start = seg.hi ? *seg.hi : n0 + M;
    for (long long n = r_start; n >= n0 + 1; --n) {
      const cplx u2 = a(n - 1) * vr;
      const cplx v2 = lambda * vr + a(n + 1) * ur;
      const double scale = std::max(std::abs(u2), std::abs(v2));
      if (!(scale > 0.0) || !std::isfinite(scale))
        throw numerical_error("dispersion recursion degenerated at n=" + std::to_string(n - 1));
      ur = u2 / scale;
      vr = v2 / scale;
    }

    cplx us = seg.lo ? cplx(0.0) : -r_tail, vs(1.0);
    const long long s_start = seg.lo ? *seg.lo : n0 - M;
    for (long long n = s_start; n <= n0 - 1; ++n) {
      const cplx u2 = a(n + 1) * vs;
      const cplx v2 = a(n - 1) * us - lambda * vs;
      const double scale = std::max(std::abs(u2), std::abs(v2));
      if (!(scale > 0.0) || !std::isfinite(scale))
        throw numerical_error("dispersion recursion degenerated at n=" + std::to_string(n + 1));
      us = u2 / scale;
      vs = v2 / scale;
    }

    const cplx value = lambda - a(n0 - 1) * (us / vs) + a(n0 + 1) * (ur / vr);
    if (!finite(value))
      throw numerical_error("dispersion has a pole at the evaluation point");
    return value;
  }
};

// Internal control-flow signals for the contour machinery.
struct contour_near_zero {};
struct ambiguous_winding {};
struct negative_winding {};

// Accumulated phase change of F along the straight segment z1 -> z2, refined
// until each sub-step turns by less than 1 radian.
double phase_walk(const CfFunction& f, cplx z1, cplx f1, cplx z2, cplx f2, int depth) {
  const double step = std::arg(f2 / f1);
  if (std::abs(step) <= 1.0) return step;
  if (depth > 48) throw ambiguous_winding{};
  const cplx mid = 0.5 * (z1 + z2);
  const cplx fm = f(mid);
  if (std::abs(fm) < 1e-10) throw contour_near_zero{};
  return phase_walk(f, z1, f1, mid, fm, depth + 1) + phase_walk(f, mid, fm, z2, f2, depth + 1);
}

long long winding_number(const CfFunction& f, const Box& b, int samples_per_edge) {
  const cplx corner[4] = {{b.re_lo, b.im_lo}, {b.re_hi, b.im_lo}, {b.re_hi, b.im_hi},
                          {b.re_lo, b.im_hi}};
  std::vector<cplx> zs, fs;
  for (int e = 0; e < 4; ++e) {
    const cplx from = corner[e], to = corner[(e + 1) % 4];
    for (int i = 0; i < samples_per_edge; ++i) {
      const cplx z = from + (to - from) * (static_cast<double>(i) / samples_per_edge);
      zs.push_back(z);
    }
  }
  zs.push_back(corner[0]);
  fs.reserve(zs.size());
  for (cplx z : zs) {
    const cplx fz = f(z);
    if (std::abs(fz) < 1e-10) throw contour_near_zero{};
    fs.push_back(fz);
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < zs.size(); ++i)
    total += phase_walk(f, zs[i], fs[i], zs[i + 1], fs[i + 1], 0);
  const double w = total / (2.0 * std::acos(-1.0));
  const long long rounded = std::llround(w);
  if (std::abs(w - static_cast<double>(rounded)) > 0.25) throw ambiguous_winding{};
  return rounded;
}

// Winding with retries: on a contour grazing a zero or an ambiguous phase
// walk, grow the box outward (sides near an axis stay put so the contour
// cannot drift onto the segment) and sample more densely.
long long robust_winding(const CfFunction& f, const Box& b) {
  for (int attempt = 0; attempt < 5; ++attempt) {
    Box g = b;
    const double dre = 0.013 * attempt * (b.re_hi - b.re_lo);
    const double dim = 0.013 * attempt * (b.im_hi - b.im_lo);
    if (std::abs(g.re_lo) >= 0.1) g.re_lo -= dre;
    if (std::abs(g.re_hi) >= 0.1) g.re_hi += dre;
    if (std::abs(g.im_lo) >= 0.1) g.im_lo -= dim;
    if (std::abs(g.im_hi) >= 0.1) g.im_hi += dim;
    try {
      return winding_number(f, g, 8 << attempt);
    } catch (const contour_near_zero&) {
    } catch (const ambiguous_winding&) {
    } catch (const numerical_error&) {
      // evaluation hit a pole or grazed the segment: same cure, move the box
    }
  }
  throw numerical_error("argument-principle contour failed to stabilize");
}

cplx newton_polish(const CfFunction& f, cplx z0) {
  cplx z = z0;
  for (int it = 0; it < 80; ++it) {
    const cplx fz = f(z);
    if (std::abs(fz) < 1e-14) return z;
    const double h = 1e-7 * std::max(1.0, std::abs(z));
    const cplx df = (f(z + h) - f(z - h)) / (2.0 * h);
    if (df == cplx(0.0) || !finite(df)) break;
    z -= fz / df;
    if (!finite(z) || std::abs(z) > 1e3) break;
  }
  throw numerical_error("Newton polish did not converge");
}

void isolate_zeros(const CfFunction& f, const Box& b, long long count, int depth,
                   std::vector<cplx>& out) {
  if (count == 0) return;
  if (count < 0) throw negative_winding{};  // pole excess: caller shifts n0
  const double w = b.re_hi - b.re_lo, h = b.im_hi - b.im_lo;
  if (count == 1 && std::hypot(w, h) < 0.3) {
    out.push_back(newton_polish(f, cplx(0.5 * (b.re_lo + b.re_hi), 0.5 * (b.im_lo + b.im_hi))));
    return;
  }
  if (depth > 60) throw numerical_error("zero isolation exceeded subdivision depth");
  for (double frac : {0.5, 0.53, 0.45, 0.57}) {
    Box b1 = b, b2 = b;
    if (w >= h) {
      const double cut = b.re_lo + frac * w;
      b1.re_hi = cut;
      b2.re_lo = cut;
    } else {
      const double cut = b.im_lo + frac * h;
      b1.im_hi = cut;
      b2.im_lo = cut;
    }
    long long c1, c2;
    try {
      c1 = winding_number(f, b1, 8);
      c2 = winding_number(f, b2, 8);
    } catch (const contour_near_zero&) {
      continue;
    } catch (const ambiguous_winding&) {
      continue;
    } catch (const numerical_error&) {
      continue;  // cut contour hit a pole; the next fraction moves it
    }
    if (c1 + c2 != count) continue;  // a zero sat on the cut; move it
    isolate_zeros(f, b1, c1, depth + 1, out);
    isolate_zeros(f, b2, c2, depth + 1, out);
    return;
  }
  throw numerical_error("could not isolate dispersion zeros by subdivision");
}

// Search one region with the given segment, shifting the matching index when
// a pole of F lands inside a contour.
void search_region(const ClassChain& chain, double gamma, const Segment& seg, long long M,
                   const Box& region, std::vector<cplx>& out) {
  const long long base = matching_index(chain, seg);
  for (long long shift : {0LL, 1LL, -1LL, 2LL}) {
    long long n0 = base + shift;
    if (seg.lo && n0 < *seg.lo) continue;
    if (seg.hi && n0 > *seg.hi) continue;
    const CfFunction f{&chain, gamma, seg, n0, M};
    try {
      std::vector<cplx> zeros;
      isolate_zeros(f, region, robust_winding(f, region), 0, zeros);
      out.insert(out.end(), zeros.begin(), zeros.end());
      return;
    } catch (const negative_winding&) {
      continue;
    }
  }
  throw numerical_error("argument-principle count stayed negative for all matching indices");
}

bool near(cplx a, cplx b, double tol) {
  return std::abs(a.real() - b.real()) <= tol && std::abs(a.imag() - b.imag()) <= tol;
}

// Fold polished zeros into the closed first quadrant, dedupe, classify, and
// emit the full symmetry orbit of each representative (exact sign flips).
void emit_entries(const std::vector<cplx>& raw, double segment_halfwidth,
                  std::vector<EigEntry>& entries) {
  std::vector<cplx> reps;
  for (cplx z : raw) {
    const double tol = 1e-9 * std::max(1.0, std::abs(z));
    double re = std::abs(z.real()), im = std::abs(z.imag());
    if (re < tol) re = 0.0;
    if (im < tol) im = 0.0;
    const cplx folded(re, im);
    bool dup = false;
    for (cplx r : reps)
      if (near(r, folded, 1e-9 * std::max(1.0, std::abs(folded)))) dup = true;
    if (!dup) reps.push_back(folded);
  }
  for (cplx r : reps) {
    if (r.real() == 0.0 && r.imag() == 0.0) {
      entries.push_back({r, EigType::zero});
    } else if (r.imag() == 0.0) {
      entries.push_back({r, EigType::real_pair});
      entries.push_back({-r, EigType::real_pair});
    } else if (r.real() == 0.0) {
      if (r.imag() <= segment_halfwidth + 1e-9) continue;  // continuum graze, not point
      entries.push_back({r, EigType::imaginary_pair});
      entries.push_back({-r, EigType::imaginary_pair});
    } else {
      entries.push_back({r, EigType::quadruple});
      entries.push_back({std::conj(r), EigType::quadruple});
      entries.push_back({-r, EigType::quadruple});
      entries.push_back({-std::conj(r), EigType::quadruple});
    }
  }
}

void sort_entries(std::vector<EigEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const EigEntry& a, const EigEntry& b) {
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() > b.lambda.real();
    return a.lambda.imag() > b.lambda.imag();
  });
}

}  // namespace

LinearSubsystem::LinearSubsystem(ClassChain chain_, double gamma_)
    : chain(std::move(chain_)), gamma(gamma_) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("gamma must be a finite nonnegative real");
  if (zero_mode_index(chain.khat, chain.p))
    throw std::invalid_argument("class passes through the origin: no valid subsystem");
}

std::string to_string(EigType t) {
  switch (t) {
    case EigType::real_pair: return "real_pair";
    case EigType::imaginary_pair: return "imaginary_pair";
    case EigType::quadruple: return "quadruple";
    case EigType::zero: return "zero";
  }
  return "?";
}

double continuous_bound(const ClassChain& chain, double gamma) {
  return -0.5 * std::abs(gamma) * static_cast<double>(chain.D) /
         static_cast<double>(chain.p.norm2());
}

Eigen::MatrixXd assemble_range(const LinearSubsystem& sys, int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("window must satisfy lo <= hi");
  if (sys.chain.n_min > lo - 1 || sys.chain.n_max < hi + 1)
    throw std::invalid_argument("chain range must cover [lo-1, hi+1]");
  const int dim = hi - lo + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const long long n = lo + i;
    if (i > 0) m(i, i - 1) = sys.gamma * sys.chain.coeff_at(n - 1);
    if (i + 1 < dim) m(i, i + 1) = -sys.gamma * sys.chain.coeff_at(n + 1);
  }
  return m;
}

Eigen::MatrixXd assemble_truncated(const LinearSubsystem& sys, int N) {
  if (N < 1) throw std::invalid_argument("truncation requires N >= 1");
  return assemble_range(sys, -N, N);
}

SpectrumReport truncated_point_spectrum(const LinearSubsystem& sys, int N, double re_threshold) {
  if (N < 10) throw std::invalid_argument("truncated spectrum requires N >= 10");
  if (re_threshold < 0) throw std::invalid_argument("re_threshold must be >= 0");
  const Eigen::MatrixXd m = assemble_truncated(sys, N);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw numerical_error("dense eigenvalue solver failed");

  std::vector<cplx> survivors;
  const auto& evs = solver.eigenvalues();
  for (Eigen::Index i = 0; i < evs.size(); ++i)
    if (std::abs(evs[i].real()) > re_threshold) survivors.push_back(evs[i]);

  SpectrumReport rep;
  rep.b = continuous_bound(sys.chain, sys.gamma);
  rep.segment_halfwidth = 2.0 * std::abs(rep.b);
  rep.method = "matrix";
  rep.n_or_m = N;
  emit_entries(survivors, rep.segment_halfwidth, rep.point_eigenvalues);
  sort_entries(rep.point_eigenvalues);
  return rep;
}

long long default_matching_index(const LinearSubsystem& sys) {
  return matching_index(sys.chain, Segment{});
}

std::complex<double> dispersion(const LinearSubsystem& sys, std::complex<double> lambda,
                                long long M, long long n0) {
  if (M < 10) throw std::invalid_argument("tail start M must be >= 10");
  const CfFunction f{&sys.chain, sys.gamma, Segment{}, n0, M};
  return f(lambda);
}

std::complex<double> dispersion(const LinearSubsystem& sys, std::complex<double> lambda,
                                long long M) {
  return dispersion(sys, lambda, M, default_matching_index(sys));
}

long long count_zeros(const LinearSubsystem& sys, const Box& box, long long M) {
  if (sys.gamma == 0.0 || sys.chain.D == 0) return 0;
  long long total = 0;
  for (const Segment& seg : chain_segments(sys.chain)) {
    const long long base = matching_index(sys.chain, seg);
    long long counted = 0;
    bool ok = false;
    for (long long shift : {0LL, 1LL, -1LL, 2LL}) {
      const long long n0 = base + shift;
      if (seg.lo && n0 < *seg.lo) continue;
      if (seg.hi && n0 > *seg.hi) continue;
      const CfFunction f{&sys.chain, sys.gamma, seg, n0, M};
      counted = robust_winding(f, box);
      if (counted >= 0) {
        ok = true;
        break;
      }
    }
    if (!ok) throw numerical_error("argument-principle count stayed negative (pole inside contour)");
    total += counted;
  }
  return total;
}

std::vector<Box> quadrant_boxes(const Box& box, double margin) {
  return {Box{margin, box.re_hi, margin, box.im_hi}, Box{margin, box.re_hi, box.im_lo, -margin},
          Box{box.re_lo, -margin, margin, box.im_hi}, Box{box.re_lo, -margin, box.im_lo, -margin}};
}

SpectrumReport find_point_spectrum_cf(const LinearSubsystem& sys, const Box& box, long long M) {
  SpectrumReport rep;
  rep.b = continuous_bound(sys.chain, sys.gamma);
  rep.segment_halfwidth = 2.0 * std::abs(rep.b);
  rep.method = "cf";
  rep.n_or_m = M;

  const auto splits = boundary_indices(sys.chain.khat, sys.chain.p);
  if (!splits.empty())
    rep.point_eigenvalues.push_back({cplx(0.0, 0.0), EigType::zero});
  if (sys.gamma == 0.0 || sys.chain.D == 0) return rep;  // zero operator: no point spectrum off {0}

  constexpr double margin = 0.02;
  std::vector<cplx> raw;
  for (const Segment& seg : chain_segments(sys.chain)) {
    // Right half-box: covers quadruples and real pairs; the left half and the
    // lower strip follow by the exact symmetry of the point set.
    Box right{std::max(box.re_lo, margin), box.re_hi, box.im_lo, box.im_hi};
    if (right.re_lo < right.re_hi)
      search_region(sys.chain, sys.gamma, seg, M, right, raw);
    Box strip{std::max(box.re_lo, -margin), std::min(box.re_hi, margin),
              std::max(box.im_lo, rep.segment_halfwidth + margin), box.im_hi};
    if (strip.re_lo < strip.re_hi && strip.im_lo < strip.im_hi)
      search_region(sys.chain, sys.gamma, seg, M, strip, raw);
  }

  emit_entries(raw, rep.segment_halfwidth, rep.point_eigenvalues);
  sort_entries(rep.point_eigenvalues);
  return rep;
}

}  // namespace eulerline
