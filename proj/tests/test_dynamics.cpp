#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "eulerline/dynamics.hpp"
#include "eulerline/spectral.hpp"

using namespace eulerline;

namespace {

ModelParams reference_params(int n_min = -10, int n_max = 12) {
  return make_params(Mode(-3, -2), Mode(1, 1), 2.0, n_min, n_max);
}

LineState random_state(const ModelParams& params, std::mt19937_64& eng) {
  LineState s(params.state_n_min(), params.state_n_max());
  for (double& x : s.flat) x = 2.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 1.0;
  return s;
}

double dot_flat(const LineState& a, const LineState& b) {
  double acc = 0;
  for (std::size_t i = 0; i < a.flat.size(); ++i) acc += a.flat[i] * b.flat[i];
  return acc;
}

}  // namespace

TEST_CASE("state layout and params window") {
  const ModelParams params = reference_params(1, 3);
  CHECK(params.chain.n_min == 0);
  CHECK(params.chain.n_max == 4);
  CHECK(params.state_n_min() == 1);
  CHECK(params.state_n_max() == 3);
  LineState s(1, 3);
  CHECK(s.dim() == 4);
  CHECK(s.n_max() == 3);
  s.omega_p() = 7.0;
  s.omega(2) = -1.5;
  CHECK(s.flat[0] == 7.0);
  CHECK(s.flat[2] == -1.5);
}

TEST_CASE("field on a hand-checked three-mode window") {
  // A_1 = -3/20, A_2 = 1/4, A_3 = 1/4; pair coefficients A_pair_1 = -2/5,
  // A_pair_2 = 0
  const ModelParams params = reference_params(1, 3);
  LineState s(1, 3);
  s.omega_p() = 1.0;
  s.omega(1) = 1.0;
  s.omega(2) = 1.0;
  s.omega(3) = 1.0;
  const LineState d = line_field(s, params);
  CHECK(d.omega(1) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(d.omega(2) == doctest::Approx(-0.4).epsilon(1e-15));
  CHECK(d.omega(3) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(d.omega_p() == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("the steady state is an exact equilibrium") {
  const ModelParams params = reference_params();
  const LineState star = fixed_point(params);
  CHECK(star.omega_p() == 2.0);
  const LineState d = line_field(star, params);
  for (double x : d.flat) CHECK(x == 0.0);
}

TEST_CASE("deviation field matches the shifted line field") {
  const ModelParams params = reference_params();
  std::mt19937_64 eng(7);
  for (int trial = 0; trial < 20; ++trial) {
    LineState u = random_state(params, eng);
    LineState shifted = u;
    shifted.omega_p() += params.gamma;
    const LineState lhs = deviation_field(u, params);
    const LineState rhs = line_field(shifted, params);
    for (std::size_t i = 0; i < lhs.flat.size(); ++i)
      CHECK(lhs.flat[i] == doctest::Approx(rhs.flat[i]).epsilon(1e-14));
  }
}

TEST_CASE("chain rows of the deviation field are linear when u_p = 0") {
  const ModelParams params = reference_params();
  std::mt19937_64 eng(11);
  LineState u = random_state(params, eng);
  u.omega_p() = 0.0;
  const LineState d1 = deviation_field(u, params);
  LineState u2 = u;
  for (double& x : u2.flat) x *= 2.0;  // power of two: exact
  const LineState d2 = deviation_field(u2, params);
  for (int n = u.n_min; n <= u.n_max(); ++n) CHECK(d2.omega(n) == 2.0 * d1.omega(n));
  // while the p row is purely quadratic
  CHECK(d2.omega_p() == 4.0 * d1.omega_p());
}

TEST_CASE("E and Z gradients annihilate the field") {
  const ModelParams params = reference_params();
  std::mt19937_64 eng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const LineState s = random_state(params, eng);
    const LineState d = line_field(s, params);
    double e_dot = 2.0 * s.omega_p() * d.omega_p() / static_cast<double>(params.chain.p.norm2());
    double e_mag = std::abs(e_dot);
    double z_dot = 2.0 * s.omega_p() * d.omega_p();
    double z_mag = std::abs(z_dot);
    for (int n = s.n_min; n <= s.n_max(); ++n) {
      const double rho = static_cast<double>(params.rho(n));
      e_dot += 2.0 * s.omega(n) * d.omega(n) / rho;
      e_mag += std::abs(2.0 * s.omega(n) * d.omega(n) / rho);
      z_dot += 2.0 * s.omega(n) * d.omega(n);
      z_mag += std::abs(2.0 * s.omega(n) * d.omega(n));
    }
    CHECK(std::abs(e_dot) <= 1e-13 * std::max(1e-300, e_mag));
    CHECK(std::abs(z_dot) <= 1e-13 * std::max(1e-300, z_mag));
  }
}

TEST_CASE("invariants at the steady state") {
  const ModelParams params = reference_params();
  const auto [e, z] = invariants(fixed_point(params), params);
  CHECK(e == 2.0);  // Gamma^2 / |p|^2 = 4/2
  CHECK(z == 4.0);
}

TEST_CASE("viscous block is skipped bit-for-bit at epsilon = 0") {
  const ModelParams params = reference_params();
  std::mt19937_64 eng(3);
  const LineState s = random_state(params, eng);
  ForcingSpec forcing;
  forcing.epsilon = 0.0;
  forcing.a_p = 0.7;
  forcing.a = {0.3};
  const LineState a = line_field(s, params);
  const LineState b = ns_field(s, params, forcing, 2.17);
  for (std::size_t i = 0; i < a.flat.size(); ++i) CHECK(a.flat[i] == b.flat[i]);
}

TEST_CASE("viscosity and forcing enter with the right coefficients") {
  const ModelParams params = reference_params();
  ForcingSpec forcing;
  forcing.epsilon = 0.01;
  forcing.nu = 2.0;
  forcing.a_p = 0.5;
  forcing.b_p = -0.25;

  // single excited chain mode, omega_p = 0: the inviscid field vanishes
  LineState s(params.state_n_min(), params.state_n_max());
  s.omega(4) = 0.8;
  CHECK(line_field(s, params).flat == std::vector<double>(s.dim(), 0.0));

  const LineState d0 = ns_field(s, params, forcing, 0.0);  // cos = 1, sin = 0
  CHECK(d0.omega(4) ==
        doctest::Approx(-0.01 * static_cast<double>(params.rho(4)) * 0.8).epsilon(1e-15));
  CHECK(d0.omega_p() == doctest::Approx(0.01 * 0.5).epsilon(1e-15));

  const double t_quarter = std::acos(-1.0) / 4.0;  // nu t = pi/2: cos = 0, sin = 1
  const LineState d1 = ns_field(s, params, forcing, t_quarter);
  CHECK(d1.omega_p() == doctest::Approx(0.01 * -0.25).epsilon(1e-12));

  // per-mode table broadcast: size 1 equals the fully written-out vector
  ForcingSpec one = forcing, full = forcing;
  one.a = {0.3};
  full.a.assign(static_cast<std::size_t>(params.state_n_max() - params.state_n_min() + 1), 0.3);
  const LineState da = ns_field(s, params, one, 0.4);
  const LineState db = ns_field(s, params, full, 0.4);
  for (std::size_t i = 0; i < da.flat.size(); ++i) CHECK(da.flat[i] == db.flat[i]);

  CHECK_THROWS_AS(ns_field(s, params, ForcingSpec{-0.1, 1.0, 0, 0, {}, {}}, 0.0), std::exception);
}

TEST_CASE("integrator is fourth order") {
  // x' = x^2, x(0) = 1 has the closed form x(t) = 1/(1-t); halving dt must
  // cut the endpoint error by ~2^4
  const Field f = [](double, const LineState& x) {
    LineState d(x.n_min, x.n_max());
    d.omega_p() = x.omega_p() * x.omega_p();
    return d;
  };
  LineState s(0, 1);
  s.omega_p() = 1.0;
  const double exact = 2.0;  // x(0.5)
  const auto err = [&](double dt) {
    const long long steps = std::llround(0.5 / dt);
    return std::abs(integrate(f, s, dt, steps, steps).states.back().omega_p() - exact);
  };
  const double order = std::log2(err(0.02) / err(0.01));
  CHECK(order > 3.8);
  CHECK(order < 4.2);
}

TEST_CASE("integrator handles non-autonomous fields and start times") {
  const Field f = [](double t, const LineState& x) {
    LineState d(x.n_min, x.n_max());
    d.omega_p() = std::cos(t);
    return d;
  };
  LineState s(0, 1);
  const Trajectory a = integrate(f, s, 1e-3, 1000, 100);
  CHECK(a.times.back() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.states.back().omega_p() == doctest::Approx(std::sin(1.0)).epsilon(1e-12));

  const Trajectory b = integrate(f, s, 1e-3, 1000, 100, 0.5);
  CHECK(b.times.front() == 0.5);
  CHECK(b.times.back() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(b.states.back().omega_p() ==
        doctest::Approx(std::sin(1.5) - std::sin(0.5)).epsilon(1e-12));
}

TEST_CASE("sampling stride records first, strided and final steps") {
  const Field f = [](double, const LineState& x) {
    LineState d(x.n_min, x.n_max());
    d.omega_p() = 1.0;
    return d;
  };
  LineState s(0, 1);
  const Trajectory t = integrate(f, s, 0.1, 25, 10);
  REQUIRE(t.times.size() == 4);  // steps 0, 10, 20, 25
  CHECK(t.times[0] == doctest::Approx(0.0));
  CHECK(t.times[1] == doctest::Approx(1.0));
  CHECK(t.times[2] == doctest::Approx(2.0));
  CHECK(t.times[3] == doctest::Approx(2.5));
  CHECK_FALSE(t.blowup_step.has_value());
}

TEST_CASE("finite-time blowup is detected and the prefix kept") {
  const Field f = [](double, const LineState& x) {
    LineState d(x.n_min, x.n_max());
    d.omega_p() = x.omega_p() * x.omega_p();  // blows up at t = 1
    return d;
  };
  LineState s(0, 1);
  s.omega_p() = 1.0;
  const Trajectory t = integrate(f, s, 0.01, 200, 10);
  REQUIRE(t.blowup_step.has_value());
  CHECK(*t.blowup_step <= 110);
  CHECK(!t.states.empty());
  for (const LineState& x : t.states) CHECK(std::isfinite(x.omega_p()));
}

TEST_CASE("Sobolev norms at the steady state") {
  const ModelParams params = reference_params();
  const LineState star = fixed_point(params);
  CHECK(sobolev_norm(star, params, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sobolev_norm(star, params, 1) == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-15));
  std::mt19937_64 eng(5);
  const LineState s = random_state(params, eng);
  CHECK(sobolev_norm(s, params, 2) > sobolev_norm(s, params, 1));
  CHECK(sobolev_norm(s, params, 1) > sobolev_norm(s, params, 0));
}

TEST_CASE("Jacobian at the steady state is the bordered linearization") {
  const ModelParams params = reference_params();
  const Field f = [&params](double, const LineState& x) { return line_field(x, params); };
  const Eigen::MatrixXd jac = jacobian_fd(f, fixed_point(params), 1e-5);
  const LinearSubsystem sys(params.chain, params.gamma);
  const Eigen::MatrixXd lin = assemble_range(sys, params.state_n_min(), params.state_n_max());
  const auto dim = static_cast<Eigen::Index>(lin.rows());
  REQUIRE(jac.rows() == dim + 1);
  // p row and p column vanish at the steady state
  CHECK(jac.row(0).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(jac.col(0).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((jac.block(1, 1, dim, dim) - lin).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("central differences are exact on a quadratic field") {
  const Field f = [](double, const LineState& x) {
    LineState d(x.n_min, x.n_max());
    d.omega_p() = x.omega(0) * x.omega(1);
    d.omega(0) = 3.0 * x.omega_p() * x.omega_p();
    d.omega(1) = -x.omega_p() * x.omega(0);
    return d;
  };
  LineState s(0, 1);
  s.omega_p() = 0.75;
  s.omega(0) = -0.5;
  s.omega(1) = 0.25;
  const Eigen::MatrixXd jac = jacobian_fd(f, s, 1e-4);
  Eigen::MatrixXd expect(3, 3);
  expect << 0, 0.25, -0.5, 4.5, 0, 0, 0.5, -0.75, 0;
  CHECK((jac - expect).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("conservation over a long integration") {
  const ModelParams params = reference_params();
  LineState s = fixed_point(params);
  std::mt19937_64 eng(99);
  for (int n = s.n_min; n <= s.n_max(); ++n)
    s.omega(n) = 0.1 * (2.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 1.0);
  const Field f = [&params](double, const LineState& x) { return line_field(x, params); };
  const auto [e0, z0] = invariants(s, params);
  const Trajectory traj = integrate(f, s, 1e-3, 20000, 2000);
  for (const LineState& x : traj.states) {
    const auto [e, z] = invariants(x, params);
    CHECK(std::abs(e - e0) <= 1e-10 * std::abs(e0));
    CHECK(std::abs(z - z0) <= 1e-10 * std::abs(z0));
  }
  // the quadratic terms genuinely moved energy around meanwhile
  double moved = 0;
  for (int n = s.n_min; n <= s.n_max(); ++n)
    moved = std::max(moved, std::abs(traj.states.back().omega(n) - s.omega(n)));
  CHECK(moved > 1e-3);
}

TEST_CASE("dot product sanity for the test helpers") {
  LineState a(0, 1), b(0, 1);
  a.flat = {1, 2, 3};
  b.flat = {4, 5, 6};
  CHECK(dot_flat(a, b) == 32.0);
}
