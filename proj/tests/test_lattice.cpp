#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "eulerline/lattice.hpp"

using namespace eulerline;

namespace {

Mode random_mode(std::mt19937& rng) {
  std::uniform_int_distribution<int> d(-20, 20);
  while (true) {
    const int a = d(rng), b = d(rng);
    if (a != 0 || b != 0) return Mode(a, b);
  }
}

}  // namespace

TEST_CASE("mode invariant") {
  CHECK_THROWS_AS(Mode(0, 0), std::invalid_argument);
  CHECK(Mode(-3, -2).norm2() == 13);
  CHECK(Mode(1, 1).norm2() == 2);
}

TEST_CASE("coeff_A reference values") {
  CHECK(coeff_A(Mode(1, 1), Mode(-3, -2)) ==
        doctest::Approx(-11.0 / 52.0).epsilon(1e-15));
  CHECK(coeff_A(Mode(-3, -2), Mode(1, 1)) ==
        doctest::Approx(-11.0 / 52.0).epsilon(1e-15));
  CHECK(coeff_A(Mode(1, 1), Mode(2, 2)) == 0.0);    // parallel
  CHECK(coeff_A(Mode(1, 0), Mode(0, 1)) == 0.0);    // equal norms
}

TEST_CASE("coeff_A symmetry and degeneracy on random pairs") {
  std::mt19937 rng(42);
  for (int i = 0; i < 10000; ++i) {
    const Mode p = random_mode(rng), q = random_mode(rng);
    const double apq = coeff_A(p, q), aqp = coeff_A(q, p);
    CHECK(std::abs(apq - aqp) <= 1e-15 * std::max({std::abs(apq), std::abs(aqp), 1e-30}));
    if (p.norm2() == q.norm2()) CHECK(apq == 0.0);
    if (static_cast<long long>(p.k1) * q.k2 == static_cast<long long>(p.k2) * q.k1)
      CHECK(apq == 0.0);
  }
}

TEST_CASE("chain tabulation for the reference class") {
  const ClassChain c = build_chain(Mode(-3, -2), Mode(1, 1), 0, 5);
  CHECK(c.D == 1);
  const long long rho_expect[] = {13, 5, 1, 1, 5, 13};
  const double a_expect[] = {-11.0 / 52.0, -3.0 / 20.0, 0.25, 0.25, -3.0 / 20.0, -11.0 / 52.0};
  REQUIRE(c.rho.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(c.rho[i] == rho_expect[i]);
    CHECK(c.A[i] == doctest::Approx(a_expect[i]).epsilon(1e-15));
  }
  // A_n = A_{5-n} for this class (range symmetric around the disk modes).
  for (int i = 0; i < 6; ++i) CHECK(c.A[i] == doctest::Approx(c.A[5 - i]).epsilon(1e-15));
  CHECK(c.pair_at(2) == 0.0);  // coeff_A((-1,0),(0,1)), equal norms
}

TEST_CASE("build_chain rejects bad input") {
  CHECK_THROWS_AS(build_chain(Mode(-1, 0), Mode(1, 0), 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_chain(Mode(-1, 0), Mode(1, 0), 1, 2), std::invalid_argument);
  CHECK_NOTHROW(build_chain(Mode(-1, 0), Mode(1, 0), 2, 5));  // origin outside range
  CHECK_THROWS_AS(build_chain(Mode(-3, -2), Mode(1, 1), 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_chain(Mode(-3, -2), Mode(1, 1), 4, 1), std::invalid_argument);
}

TEST_CASE("closed form, telescoping and energy identities") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Mode khat = random_mode(rng), p = random_mode(rng);
    const auto z = zero_mode_index(khat, p);
    const int lo = -8, hi = 8;
    if (z && *z >= lo - 1 && *z <= hi + 1) continue;
    const ClassChain c = build_chain(khat, p, lo, hi);
    const double p2 = static_cast<double>(p.norm2());
    for (int n = lo; n <= hi; ++n) {
      const double closed = 0.5 * (1.0 / static_cast<double>(c.rho_at(n)) - 1.0 / p2) *
                            static_cast<double>(c.D);
      CHECK(c.coeff_at(n) == doctest::Approx(closed).epsilon(1e-15));
      CHECK(c.coeff_at(n) == doctest::Approx(coeff_A(p, c.mode_at(n))).epsilon(1e-14));
      if (n < hi) {
        const double tele = c.coeff_at(n) - c.coeff_at(n + 1);
        CHECK(std::abs(c.pair_at(n) - tele) <= 1e-15 * std::max(1.0, std::abs(tele)));
        const double lhs = c.coeff_at(n) / static_cast<double>(c.rho_at(n + 1)) -
                           c.coeff_at(n + 1) / static_cast<double>(c.rho_at(n));
        const double rhs = c.pair_at(n) / p2;
        CHECK(std::abs(lhs - rhs) <= 1e-15 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("disk intersection reference classes") {
  CHECK(disk_intersection(Mode(-3, -2), Mode(1, 1)) == std::vector<long long>{2, 3});
  CHECK(disk_intersection(Mode(2, -1), Mode(1, 1)).empty());
  CHECK(!disk_intersection(Mode(-3, -2), Mode(100, 100)).empty());
}

TEST_CASE("disk intersection agrees with brute force") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Mode khat = random_mode(rng), p = random_mode(rng);
    const auto fast = disk_intersection(khat, p);
    std::vector<long long> slow;
    for (long long n = -1000000; n <= 1000000; ++n) {
      const long long r = khat.norm2() + 2 * n * (static_cast<long long>(khat.k1) * p.k1 +
                                                  static_cast<long long>(khat.k2) * p.k2) +
                          n * n * p.norm2();
      if (r <= p.norm2()) slow.push_back(n);
    }
    CHECK(fast == slow);
  }
}

TEST_CASE("boundary indices mark decoupling") {
  CHECK(boundary_indices(Mode(-3, -2), Mode(1, 1)).empty());
  CHECK(boundary_indices(Mode(-3, -1), Mode(1, 1)) == std::vector<long long>{2});
  const ClassChain c = build_chain(Mode(-3, -1), Mode(1, 1), 0, 4);
  CHECK(c.coeff_at(2) == 0.0);  // rho_2 = |p|^2 exactly
}

TEST_CASE("zero mode index") {
  CHECK(zero_mode_index(Mode(-1, 0), Mode(1, 0)) == 1);
  CHECK(zero_mode_index(Mode(2, 4), Mode(1, 2)) == -2);
  CHECK(!zero_mode_index(Mode(-3, -2), Mode(1, 1)).has_value());
  CHECK(!zero_mode_index(Mode(1, 1), Mode(0, 2)).has_value());
  CHECK(zero_mode_index(Mode(0, -6), Mode(0, 2)) == 3);
}

TEST_CASE("canonical representative") {
  const auto rep = canonical_representative(Mode(-3, -2), Mode(1, 1));
  CHECK(rep.n == 2);
  CHECK(rep.mode == Mode(-1, 0));  // rho ties at n=2,3; (-1,0) < (0,1) lexicographically
  const auto rep2 = canonical_representative(Mode(2, -1), Mode(1, 1));
  CHECK(rep2.mode.norm2() == 5);
  CHECK_THROWS_AS(canonical_representative(Mode(2, 4), Mode(1, 2)), std::invalid_argument);
}
