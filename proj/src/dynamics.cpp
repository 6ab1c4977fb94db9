#include "eulerline/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eulerline {

namespace {

void check_range(const LineState& s, const ModelParams& par) {
  if (s.n_min != par.state_n_min() || s.n_max() != par.state_n_max())
    throw std::invalid_argument("state range does not match the model range");
}

// Forcing coefficient for chain slot i (empty = 0, single entry = broadcast).
double coeff_of(const std::vector<double>& v, std::size_t i, std::size_t len) {
  if (v.empty()) return 0.0;
  if (v.size() == 1) return v[0];
  if (v.size() != len)
    throw std::invalid_argument("forcing coefficient list must have 0, 1 or range-length entries");
  return v[i];
}

LineState axpy(const LineState& a, double c, const LineState& b) {
  LineState out = a;
  for (std::size_t i = 0; i < out.flat.size(); ++i) out.flat[i] += c * b.flat[i];
  return out;
}

bool state_ok(const LineState& s) {
  for (double x : s.flat)
    if (!std::isfinite(x) || std::abs(x) > 1e100) return false;
  return true;
}

}  // namespace

LineState::LineState(int n_min_, int n_max_) : n_min(n_min_) {
  if (n_min_ > n_max_) throw std::invalid_argument("state range must satisfy n_min <= n_max");
  flat.assign(static_cast<std::size_t>(n_max_ - n_min_ + 2), 0.0);
}

ModelParams make_params(const Mode& khat, const Mode& p, double gamma, int n_min, int n_max) {
  if (!std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite");
  return ModelParams{build_chain(khat, p, n_min - 1, n_max + 1), gamma};
}

LineState fixed_point(const ModelParams& params) {
  LineState s(params.state_n_min(), params.state_n_max());
  s.omega_p() = params.gamma;
  return s;
}

LineState line_field(const LineState& state, const ModelParams& params) {
  check_range(state, params);
  const int lo = state.n_min, hi = state.n_max();
  LineState d(lo, hi);
  const double wp = state.omega_p();
  for (int n = lo; n <= hi; ++n) {
    double v = 0.0;
    if (n > lo) v += params.A_at(n - 1) * wp * state.omega(n - 1);
    if (n < hi) v -= params.A_at(n + 1) * wp * state.omega(n + 1);
    d.omega(n) = v;
  }
  double dp = 0.0;
  for (int m = lo; m < hi; ++m) dp -= params.pair_coeff(m) * state.omega(m) * state.omega(m + 1);
  d.omega_p() = dp;
  return d;
}

LineState deviation_field(const LineState& u, const ModelParams& params) {
  check_range(u, params);
  const int lo = u.n_min, hi = u.n_max();
  LineState d(lo, hi);
  const double up = u.omega_p();
  const double g = params.gamma;
  for (int n = lo; n <= hi; ++n) {
    double v = 0.0;
    if (n > lo) v += params.A_at(n - 1) * g * u.omega(n - 1) + params.A_at(n - 1) * up * u.omega(n - 1);
    if (n < hi) v -= params.A_at(n + 1) * g * u.omega(n + 1) + params.A_at(n + 1) * up * u.omega(n + 1);
    d.omega(n) = v;
  }
  double dp = 0.0;
  for (int m = lo; m < hi; ++m) dp -= params.pair_coeff(m) * u.omega(m) * u.omega(m + 1);
  d.omega_p() = dp;
  return d;
}

LineState ns_field(const LineState& state, const ModelParams& params, const ForcingSpec& forcing,
                   double t) {
  if (forcing.epsilon < 0 || !std::isfinite(forcing.epsilon))
    throw std::invalid_argument("epsilon must be >= 0");
  LineState d = line_field(state, params);
  if (forcing.epsilon == 0.0) return d;  // keep the inviscid path bit-identical
  if (!(forcing.nu > 0)) throw std::invalid_argument("nu must be > 0");
  const double eps = forcing.epsilon;
  const double c = std::cos(forcing.nu * t), s = std::sin(forcing.nu * t);
  const int lo = state.n_min, hi = state.n_max();
  const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
  for (int n = lo; n <= hi; ++n) {
    const std::size_t i = static_cast<std::size_t>(n - lo);
    const double f_n = coeff_of(forcing.a, i, len) * c + coeff_of(forcing.b, i, len) * s;
    d.omega(n) += eps * (-static_cast<double>(params.rho(n)) * state.omega(n) + f_n);
  }
  const double f_p = forcing.a_p * c + forcing.b_p * s;
  d.omega_p() +=
      eps * (-static_cast<double>(params.chain.p.norm2()) * state.omega_p() + f_p);
  return d;
}

Trajectory integrate(const Field& field, const LineState& state0, double dt, long long steps,
                     long long stride, double t0) {
  if (!(dt > 0)) throw std::invalid_argument("dt must be > 0");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");

  Trajectory tr;
  LineState y = state0;
  tr.times.push_back(t0);
  tr.states.push_back(y);
  for (long long step = 1; step <= steps; ++step) {
    const double t = t0 + static_cast<double>(step - 1) * dt;
    const LineState k1 = field(t, y);
    const LineState k2 = field(t + 0.5 * dt, axpy(y, 0.5 * dt, k1));
    const LineState k3 = field(t + 0.5 * dt, axpy(y, 0.5 * dt, k2));
    const LineState k4 = field(t + dt, axpy(y, dt, k3));
    for (std::size_t i = 0; i < y.flat.size(); ++i)
      y.flat[i] += dt / 6.0 * (k1.flat[i] + 2.0 * k2.flat[i] + 2.0 * k3.flat[i] + k4.flat[i]);
    if (!state_ok(y)) {
      tr.blowup_step = step;
      break;
    }
    if (step % stride == 0 || step == steps) {
      tr.times.push_back(t0 + static_cast<double>(step) * dt);
      tr.states.push_back(y);
    }
  }
  return tr;
}

std::pair<double, double> invariants(const LineState& state, const ModelParams& params) {
  check_range(state, params);
  const double wp2 = state.omega_p() * state.omega_p();
  double e = wp2 / static_cast<double>(params.chain.p.norm2());
  double z = wp2;
  for (int n = state.n_min; n <= state.n_max(); ++n) {
    const double w2 = state.omega(n) * state.omega(n);
    e += w2 / static_cast<double>(params.rho(n));
    z += w2;
  }
  return {e, z};
}

double sobolev_norm(const LineState& state, const ModelParams& params, int s) {
  check_range(state, params);
  if (s < 0) throw std::invalid_argument("sobolev order must be >= 0");
  const double sd = static_cast<double>(s);
  double total = std::pow(1.0 + static_cast<double>(params.chain.p.norm2()), sd) *
                 state.omega_p() * state.omega_p();
  for (int n = state.n_min; n <= state.n_max(); ++n)
    total += std::pow(1.0 + static_cast<double>(params.rho(n)), sd) * state.omega(n) * state.omega(n);
  return std::sqrt(total);
}

Eigen::MatrixXd jacobian_fd(const Field& field, const LineState& state, double h, double t) {
  if (!(h > 0)) throw std::invalid_argument("step h must be > 0");
  const std::size_t dim = state.dim();
  Eigen::MatrixXd jac(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    LineState sp = state, sm = state;
    sp.flat[j] += h;
    sm.flat[j] -= h;
    const LineState fp = field(t, sp), fm = field(t, sm);
    for (std::size_t i = 0; i < dim; ++i)
      jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (fp.flat[i] - fm.flat[i]) / (2.0 * h);
  }
  return jac;
}

}  // namespace eulerline
