#pragma once

#include <optional>
#include <vector>

namespace eulerline {

// Nonzero integer wavenumber k = (k1, k2) in Z^2 \ {0}.
struct Mode {
  int k1 = 0;
  int k2 = 0;

  Mode(int k1_, int k2_);

  long long norm2() const {
    return static_cast<long long>(k1) * k1 + static_cast<long long>(k2) * k2;
  }
  bool operator==(const Mode&) const = default;
};

// Quadratic interaction coefficient A(p, q) = (1/2)(|q|^-2 - |p|^-2)(p1 q2 - p2 q1).
// Symmetric in (p, q); vanishes when |p| = |q| or q is parallel to p.
double coeff_A(const Mode& p, const Mode& q);

// The n with khat + n p = 0, if any.
std::optional<long long> zero_mode_index(const Mode& khat, const Mode& p);

// One lattice class {khat + n p}: tabulated chain quantities over [n_min, n_max]
// plus closed-form access at arbitrary n.
//
// With D = p1*khat2 - p2*khat1 (constant along the chain),
//   rho_n    = |khat + n p|^2
//   A_n      = A(p, khat + n p) = (1/2)(1/rho_n - 1/|p|^2) D
//   A_pair_n = A(khat + n p, khat + (n+1) p) and equals A_n - A_{n+1} (telescoping).
struct ClassChain {
  Mode khat;
  Mode p;
  int n_min = 0;
  int n_max = 0;
  long long D = 0;

  std::vector<long long> rho;    // rho_n, n in [n_min, n_max]
  std::vector<double> A;         // A_n, same range
  std::vector<double> A_pair;    // A_pair_n, n in [n_min, n_max-1]

  Mode mode_at(long long n) const;       // khat + n p; throws if it is the origin
  long long rho_at(long long n) const;   // any n, closed form
  double coeff_at(long long n) const;    // A_n, closed form
  double pair_at(long long n) const;     // A_pair_n via coeff_A, not via subtraction
};

// Tabulates the chain over [n_min, n_max]. Fails if the range contains the
// index with khat + n p = 0 or if n_min >= n_max.
ClassChain build_chain(const Mode& khat, const Mode& p, int n_min, int n_max);

// All integers n with |khat + n p|^2 <= |p|^2, by real-root bracketing of the
// quadratic in n (finite set, possibly empty).
std::vector<long long> disk_intersection(const Mode& khat, const Mode& p);

// Integers n with rho_n exactly |p|^2, i.e. A_n = 0: the chain decouples there.
std::vector<long long> boundary_indices(const Mode& khat, const Mode& p);

// Chain member with smallest |k|^2, ties broken lexicographically by (k1, k2).
struct Representative {
  long long n;
  Mode mode;
};
Representative canonical_representative(const Mode& khat, const Mode& p);

}  // namespace eulerline
