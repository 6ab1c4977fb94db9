#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "eulerline/lattice.hpp"

namespace eulerline {

// Amplitudes of the retained modes, flat layout
// [omega_p, omega_{n_min}, ..., omega_{n_max}].
struct LineState {
  int n_min = 0;
  std::vector<double> flat;

  LineState() = default;
  LineState(int n_min_, int n_max_);  // zero state

  int n_max() const { return n_min + static_cast<int>(flat.size()) - 2; }
  std::size_t dim() const { return flat.size(); }
  double omega_p() const { return flat[0]; }
  double& omega_p() { return flat[0]; }
  double omega(int n) const { return flat[static_cast<std::size_t>(1 + (n - n_min))]; }
  double& omega(int n) { return flat[static_cast<std::size_t>(1 + (n - n_min))]; }
};

// Model data for one chain window. The chain is tabulated one index past each
// end of the state range so every boundary row keeps its true coefficient.
struct ModelParams {
  ClassChain chain;
  double gamma;  // fixed-point amplitude, used by deviation coordinates

  int state_n_min() const { return chain.n_min + 1; }
  int state_n_max() const { return chain.n_max - 1; }
  double A_at(long long n) const { return chain.A[static_cast<std::size_t>(n - chain.n_min)]; }
  double pair_coeff(long long n) const {
    return chain.A_pair[static_cast<std::size_t>(n - chain.n_min)];
  }
  long long rho(long long n) const {
    return chain.rho[static_cast<std::size_t>(n - chain.n_min)];
  }
};

// Builds params whose state range is [n_min, n_max].
ModelParams make_params(const Mode& khat, const Mode& p, double gamma, int n_min, int n_max);

// omega_p = gamma, all chain amplitudes zero.
LineState fixed_point(const ModelParams& params);

// Single-harmonic forcing f(t) = a cos(nu t) + b sin(nu t) per mode, applied
// with viscosity epsilon = 1/Re. Coefficient vectors may be empty (zero
// forcing), size 1 (broadcast), or one entry per chain index.
struct ForcingSpec {
  double epsilon = 0.0;
  double nu = 1.0;
  double a_p = 0.0, b_p = 0.0;
  std::vector<double> a, b;
};

// omega_dot_n = A_{n-1} omega_p omega_{n-1} - A_{n+1} omega_p omega_{n+1},
// omega_dot_p = -sum over interior adjacent pairs of A_pair_m omega_m omega_{m+1}.
// The pair-sum truncation makes E and Z conserved exactly, not approximately.
LineState line_field(const LineState& state, const ModelParams& params);

// L u + Q(u) in deviation coordinates u_p = omega_p - Gamma; identical to
// line_field(omega* + u).
LineState deviation_field(const LineState& u, const ModelParams& params);

// line_field plus epsilon (-kappa^2 omega + f(t)) per row, kappa_n^2 = rho_n,
// kappa_p^2 = |p|^2. With epsilon = 0 the viscous block is skipped entirely,
// so results are bit-identical to line_field.
LineState ns_field(const LineState& state, const ModelParams& params, const ForcingSpec& forcing,
                   double t);

using Field = std::function<LineState(double t, const LineState& state)>;

struct Trajectory {
  std::vector<double> times;
  std::vector<LineState> states;
  // Set when a non-finite or overflowing state aborted the run at this step;
  // samples recorded before the abort are kept.
  std::optional<long long> blowup_step;
};

// Classical fixed-step RK4, non-autonomous aware. Records the initial state,
// every stride-th step and the final step.
Trajectory integrate(const Field& field, const LineState& state0, double dt, long long steps,
                     long long stride, double t0 = 0.0);

// (E, Z): energy E = omega_p^2/|p|^2 + sum omega_n^2/rho_n and enstrophy
// Z = omega_p^2 + sum omega_n^2. Both are exact invariants of line_field.
std::pair<double, double> invariants(const LineState& state, const ModelParams& params);

// (sum_k (1+|k|^2)^s omega_k^2)^(1/2) over all stored modes, p included.
double sobolev_norm(const LineState& state, const ModelParams& params, int s);

// Central-difference Jacobian of the field at `state`, flat-layout ordering.
Eigen::MatrixXd jacobian_fd(const Field& field, const LineState& state, double h, double t = 0.0);

}  // namespace eulerline
