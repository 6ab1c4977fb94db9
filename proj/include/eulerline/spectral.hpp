#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "eulerline/lattice.hpp"

namespace eulerline {

// One invariant subsystem of the linearization at the steady state
// omega*_p = Gamma:
//
//   omega_dot_n = Gamma A_{n-1} omega_{n-1} - Gamma A_{n+1} omega_{n+1}
//
// over the chain modes khat + n p. The class must never pass through the
// origin; the spectrum depends on Gamma only through |Gamma|.
struct LinearSubsystem {
  ClassChain chain;
  double gamma;

  LinearSubsystem(ClassChain chain_, double gamma_);
};

// Axis-aligned search rectangle in the complex plane.
struct Box {
  double re_lo, re_hi, im_lo, im_hi;
};

enum class EigType { real_pair, imaginary_pair, quadruple, zero };
std::string to_string(EigType t);

struct EigEntry {
  std::complex<double> lambda;
  EigType type;
};

// Point spectrum plus the continuum segment [-2i|b|, 2i|b|]. The eigenvalue
// list is closed under lambda -> -lambda and lambda -> conj(lambda) exactly
// (members are emitted by sign flips of one representative) and is sorted by
// descending (Re, Im). A structural zero eigenvalue (decoupled chain column,
// tagged "zero") is the one entry allowed to sit on the closed segment.
struct SpectrumReport {
  double b = 0;
  double segment_halfwidth = 0;  // 2|b|
  std::vector<EigEntry> point_eigenvalues;
  std::string method;  // "cf" | "matrix"
  long long n_or_m = 0;
};

// b = -(1/2) |Gamma| D / |p|^2; the continuum is [-2i|b|, 2i|b|].
double continuous_bound(const ClassChain& chain, double gamma);

// Truncation of the subsystem to chain indices [lo, hi]: zero diagonal,
// M[n][n-1] = Gamma A_{n-1}, M[n][n+1] = -Gamma A_{n+1}. The chain must be
// tabulated over [lo-1, hi+1].
Eigen::MatrixXd assemble_range(const LinearSubsystem& sys, int lo, int hi);

// Symmetric window [-N, N] (size 2N+1).
Eigen::MatrixXd assemble_truncated(const LinearSubsystem& sys, int N);

// Dense eigenvalues of the [-N, N] truncation with the imaginary-axis cluster
// (the discretized continuum) removed: only eigenvalues with
// |Re lambda| > re_threshold are kept, so this method never reports
// imaginary pairs or zeros; the cf method is authoritative for those.
SpectrumReport truncated_point_spectrum(const LinearSubsystem& sys, int N, double re_threshold);

// Default matching index for the dispersion function: chain index of smallest
// rho_n (largest |A_n|), smaller n on ties.
long long default_matching_index(const LinearSubsystem& sys);

// Dispersion function F(lambda) whose zeros off the closed segment are the
// point eigenvalues. Decaying tail ratios are built by backward recursion
//   r_{n-1} = Gamma A_{n-1} / (lambda + Gamma A_{n+1} r_n)
// from the asymptotic root of (Gamma A_inf) r^2 + lambda r - Gamma A_inf = 0
// with |r| < 1 (A_inf = -D/(2|p|^2)) started at n0 + M, and symmetrically
//   s_{n+1} = Gamma A_{n+1} / (Gamma A_{n-1} s_n - lambda)
// from s = -r_inf at n0 - M. Then
//   F(lambda) = lambda - Gamma A_{n0-1} s_{n0} + Gamma A_{n0+1} r_{n0}.
// If the chain decouples (some A_m = 0), the recursion walls itself off at m
// and F describes the sub-chain containing n0.
std::complex<double> dispersion(const LinearSubsystem& sys, std::complex<double> lambda,
                                long long M, long long n0);
std::complex<double> dispersion(const LinearSubsystem& sys, std::complex<double> lambda,
                                long long M);

// Argument-principle zero count of F over the box contour (box must avoid the
// segment). On decoupled chains this sums the counts of all sub-chains.
long long count_zeros(const LinearSubsystem& sys, const Box& box, long long M);

// The four off-axis quadrant sub-boxes of `box`, shrunk away from both axes
// by `margin`. Order: (+,+), (+,-), (-,+), (-,-).
std::vector<Box> quadrant_boxes(const Box& box, double margin);

// Zero search: counts zeros per region (right half-box plus the beyond-segment
// imaginary strip), subdivides contours until each zero is isolated, polishes
// by Newton to |F| < 1e-13, completes by symmetry and classifies.
SpectrumReport find_point_spectrum_cf(const LinearSubsystem& sys, const Box& box, long long M);

}  // namespace eulerline
