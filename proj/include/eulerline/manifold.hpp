#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "eulerline/dynamics.hpp"
#include "eulerline/spectral.hpp"

namespace eulerline {

enum class ManifoldDirection { unstable, stable };

// Hyperbolic tangent data at the fixed point, computed from the [lo, hi]
// truncation of the linearization. The p-row of the linearization vanishes,
// so the hyperbolic planes carry no omega_p component and basis vectors live
// on the chain coordinates alone. Each plane's basis is orthonormal; the
// center block is the orthonormal complement of the four hyperbolic
// directions (the truncation's imaginary-axis cluster, reported but never
// integrated).
struct TangentSplit {
  int lo = 0, hi = 0;
  std::complex<double> lambda_u;  // Re > 0, Im > 0
  std::vector<Eigen::VectorXd> unstable_basis;  // 2 vectors
  std::vector<Eigen::VectorXd> stable_basis;    // 2 vectors
  std::vector<Eigen::VectorXd> center_basis;    // dim - 4 vectors
};

// Eigen-decomposes the truncated operator; Re/Im parts of the eigenvector of
// lambda_u (Re > 0, Im > 0) span the unstable plane, the eigenvector of
// -conj(lambda_u) the stable one. Fails with "no hyperbolic directions" when
// nothing lies beyond re_threshold (empty-disk classes).
TangentSplit tangent_split_range(const LinearSubsystem& sys, int lo, int hi, double re_threshold);

// Symmetric window [-N, N].
TangentSplit tangent_split(const LinearSubsystem& sys, int N, double re_threshold);

struct ManifoldFamily {
  ManifoldDirection direction;
  double delta;
  std::vector<double> thetas;
  // Deviation-coordinate trajectories, one per seed angle. Stable-direction
  // runs integrate the time-reversed field; their time column is the backward
  // time.
  std::vector<Trajectory> trajectories;
};

// Shoots from u(0) = delta (cos theta_j e1 + sin theta_j e2) on the selected
// plane for equally spaced theta_j, integrating deviation_field forward
// (unstable) or time-reversed (stable). Params must match the split window.
ManifoldFamily grow_manifold(const TangentSplit& split, const ModelParams& params, double delta,
                             int samples, double T, double dt, ManifoldDirection direction);

struct RateEstimate {
  double rate;
  double frequency;
};

// Least-squares slope of log ||u(t)|| over the window where the trajectory
// stays inside the linear regime (||u|| <= norm_cap), plus the dominant
// oscillation frequency pi / (mean zero-crossing spacing) of the largest
// chain coordinate. Flags windows that are too short or start outside the
// linear regime.
RateEstimate growth_rate(const Trajectory& traj, double norm_cap);

}  // namespace eulerline
