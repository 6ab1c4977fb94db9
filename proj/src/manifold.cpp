#include "eulerline/manifold.hpp"

#include <cmath>
#include <stdexcept>

#include "eulerline/errors.hpp"

namespace eulerline {

namespace {

// Orthonormal plane basis from the real and imaginary parts of a complex
// eigenvector (Gram-Schmidt).
std::vector<Eigen::VectorXd> plane_basis(const Eigen::VectorXcd& v) {
  Eigen::VectorXd x = v.real(), y = v.imag();
  const double xn = x.norm();
  if (xn == 0.0) throw numerical_error("hyperbolic eigenvector degenerate");
  x /= xn;
  y -= y.dot(x) * x;
  const double yn = y.norm();
  if (yn < 1e-12) throw numerical_error("hyperbolic eigenvector degenerate");
  y /= yn;
  return {x, y};
}

}  // namespace

TangentSplit tangent_split_range(const LinearSubsystem& sys, int lo, int hi, double re_threshold) {
  if (re_threshold < 0) throw std::invalid_argument("re_threshold must be >= 0");
  const Eigen::MatrixXd m = assemble_range(sys, lo, hi);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) throw numerical_error("dense eigenvalue solver failed");
  const auto& evs = solver.eigenvalues();

  Eigen::Index iu = -1;
  for (Eigen::Index i = 0; i < evs.size(); ++i) {
    if (evs[i].real() > re_threshold && evs[i].imag() > 0) {
      if (iu >= 0 && std::abs(evs[i] - evs[iu]) > 1e-6)
        throw numerical_error("more than one hyperbolic plane above the threshold");
      if (iu < 0 || evs[i].real() > evs[iu].real()) iu = i;
    }
  }
  if (iu < 0) throw numerical_error("no hyperbolic directions");

  const std::complex<double> lambda_u = evs[iu];
  const std::complex<double> target = -std::conj(lambda_u);  // Re < 0, Im > 0 partner
  Eigen::Index is = -1;
  for (Eigen::Index i = 0; i < evs.size(); ++i) {
    if (evs[i].real() < -re_threshold && evs[i].imag() > 0 &&
        (is < 0 || std::abs(evs[i] - target) < std::abs(evs[is] - target)))
      is = i;
  }
  if (is < 0) throw numerical_error("stable partner of the quadruple not found");

  TangentSplit split;
  split.lo = lo;
  split.hi = hi;
  split.lambda_u = lambda_u;
  split.unstable_basis = plane_basis(solver.eigenvectors().col(iu));
  split.stable_basis = plane_basis(solver.eigenvectors().col(is));

  const Eigen::Index dim = m.rows();
  Eigen::MatrixXd hyper(dim, 4);
  hyper.col(0) = split.unstable_basis[0];
  hyper.col(1) = split.unstable_basis[1];
  hyper.col(2) = split.stable_basis[0];
  hyper.col(3) = split.stable_basis[1];
  const Eigen::MatrixXd q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(hyper).householderQ() *
      Eigen::MatrixXd::Identity(dim, dim);
  for (Eigen::Index j = 4; j < dim; ++j) split.center_basis.push_back(q.col(j));
  return split;
}

TangentSplit tangent_split(const LinearSubsystem& sys, int N, double re_threshold) {
  if (N < 1) throw std::invalid_argument("truncation requires N >= 1");
  return tangent_split_range(sys, -N, N, re_threshold);
}

ManifoldFamily grow_manifold(const TangentSplit& split, const ModelParams& params, double delta,
                             int samples, double T, double dt, ManifoldDirection direction) {
  if (params.state_n_min() != split.lo || params.state_n_max() != split.hi)
    throw std::invalid_argument("model range does not match the tangent window");
  if (delta < 0 || !std::isfinite(delta)) throw std::invalid_argument("delta must be >= 0");
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (!(T > 0) || !(dt > 0)) throw std::invalid_argument("T and dt must be > 0");

  const long long steps = std::max<long long>(1, std::llround(T / dt));
  const long long stride = std::max<long long>(1, std::llround(0.05 / dt));
  const double tau = direction == ManifoldDirection::stable ? -1.0 : 1.0;
  const Field field = [&params, tau](double, const LineState& u) {
    LineState d = deviation_field(u, params);
    if (tau < 0)
      for (double& x : d.flat) x = -x;
    return d;
  };

  ManifoldFamily family;
  family.direction = direction;
  family.delta = delta;
  const double two_pi = 2.0 * std::acos(-1.0);
  const auto& e1 = split.unstable_basis[0], e2 = split.unstable_basis[1];
  const auto& f1 = split.stable_basis[0], f2 = split.stable_basis[1];
  for (int j = 0; j < samples; ++j) {
    const double theta = two_pi * j / samples;
    LineState u0(split.lo, split.hi);
    const auto& b1 = direction == ManifoldDirection::unstable ? e1 : f1;
    const auto& b2 = direction == ManifoldDirection::unstable ? e2 : f2;
    for (Eigen::Index i = 0; i < b1.size(); ++i)
      u0.flat[static_cast<std::size_t>(i + 1)] =
          delta * (std::cos(theta) * b1[i] + std::sin(theta) * b2[i]);
    family.thetas.push_back(theta);
    family.trajectories.push_back(integrate(field, u0, dt, steps, stride));
  }
  return family;
}

RateEstimate growth_rate(const Trajectory& traj, double norm_cap) {
  if (!(norm_cap > 0)) throw std::invalid_argument("norm_cap must be > 0");
  const std::size_t total = traj.states.size();
  if (total < 2) throw numerical_error("window too short for growth fit");

  std::vector<double> norms(total);
  for (std::size_t k = 0; k < total; ++k) {
    double acc = 0;
    for (double x : traj.states[k].flat) acc += x * x;
    norms[k] = std::sqrt(acc);
  }
  if (norms[0] > norm_cap)
    throw numerical_error("trajectory starts outside the linear regime");
  std::size_t last = 0;
  while (last + 1 < total && norms[last + 1] <= norm_cap) ++last;
  if (last < 9 || traj.times[last] - traj.times[0] < 1.0)
    throw numerical_error("window too short for growth fit");
  for (std::size_t k = 0; k <= last; ++k)
    if (norms[k] == 0.0) throw numerical_error("trajectory vanishes inside the fit window");

  double tbar = 0, ybar = 0;
  for (std::size_t k = 0; k <= last; ++k) {
    tbar += traj.times[k];
    ybar += std::log(norms[k]);
  }
  tbar /= static_cast<double>(last + 1);
  ybar /= static_cast<double>(last + 1);
  double cov = 0, var = 0;
  for (std::size_t k = 0; k <= last; ++k) {
    const double dt = traj.times[k] - tbar;
    cov += dt * (std::log(norms[k]) - ybar);
    var += dt * dt;
  }
  const double rate = cov / var;

  // Dominant coordinate at the window end; omega_p (slot 0) stays second
  // order in delta and is skipped.
  std::size_t pick = 1;
  for (std::size_t i = 1; i < traj.states[last].flat.size(); ++i)
    if (std::abs(traj.states[last].flat[i]) > std::abs(traj.states[last].flat[pick])) pick = i;

  std::vector<double> crossings;
  for (std::size_t k = 0; k < last; ++k) {
    const double x0 = traj.states[k].flat[pick], x1 = traj.states[k + 1].flat[pick];
    if (x0 == 0.0)
      crossings.push_back(traj.times[k]);
    else if (x0 * x1 < 0.0)
      crossings.push_back(traj.times[k] +
                          (traj.times[k + 1] - traj.times[k]) * x0 / (x0 - x1));
  }
  if (crossings.size() < 2)
    throw numerical_error("too few zero crossings for a frequency estimate");
  const double spacing = (crossings.back() - crossings.front()) /
                         static_cast<double>(crossings.size() - 1);
  return {rate, std::acos(-1.0) / spacing};
}

}  // namespace eulerline
