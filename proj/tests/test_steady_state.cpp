#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "nonrecip/steady_state.hpp"

using namespace nonrecip;
using C = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

// Time derivatives of the mean-field Langevin equations (probe off),
// evaluated directly; a steady state makes all three vanish.
double langevin_drift(const SystemParamsd &p, const SteadyStated &s) {
  const C I(0, 1);
  const double u = 2 * s.b_s.real();
  const C dc1 = -(I * p.delta_c + p.kappa1 / 2 - I * p.g0 * u) * s.c1_s + p.eps_c - I * p.J * s.c2_s;
  const C dc2 = -(I * p.delta_c + p.kappa2 / 2 + I * p.g0 * u) * s.c2_s + p.eps_d - I * p.J * s.c1_s;
  const C db = -(I * p.omega_m + p.gamma / 2) * s.b_s -
               I * p.g0 * (std::norm(s.c2_s) - std::norm(s.c1_s));
  return std::max({std::abs(dc1), std::abs(dc2), std::abs(db)});
}

SystemParamsd example_params() {
  return make_system_params(1.0, 1.0, 0.01, 100.0, 1e-3, 0.5, 100.0, C(200), C(0, 200));
}

} // namespace

TEST_CASE("decoupled mechanics: one linear solve") {
  auto p = example_params();
  p.g0 = 0;
  FixedPointOptions one;
  one.max_iterations = 1;
  const auto s = solve_steady_state(p, one);
  CHECK(s.b_s == C(0));
  // Cavity means from the 2x2 linear system, solved independently.
  Eigen::Matrix2cd A;
  A << C(p.kappa1 / 2, p.delta_c), C(0, p.J), C(0, p.J), C(p.kappa2 / 2, p.delta_c);
  const Eigen::Vector2cd c = A.lu().solve(Eigen::Vector2cd(p.eps_c, p.eps_d));
  CHECK(std::abs(s.c1_s - c(0)) < 1e-13 * std::abs(c(0)));
  CHECK(std::abs(s.c2_s - c(1)) < 1e-13 * std::abs(c(1)));
  CHECK(s.delta1 == p.delta_c);
  CHECK(s.delta2 == p.delta_c);
}

TEST_CASE("undriven system stays at rest") {
  auto p = example_params();
  p.eps_c = p.eps_d = C(0);
  const auto s = solve_steady_state(p);
  CHECK(s.b_s == C(0));
  CHECK(s.c1_s == C(0));
  CHECK(s.c2_s == C(0));
}

TEST_CASE("driven example satisfies the mean-field equations") {
  const auto p = example_params();
  const auto s = solve_steady_state(p);
  CHECK(steady_residual(p, s) < 1e-10);
  CHECK(langevin_drift(p, s) < 1e-9);
  CHECK(std::abs(s.b_s) > 0);
  CHECK(std::abs(s.delta1 + s.delta2 - 2 * p.delta_c) <= 1e-15 * p.delta_c);
}

TEST_CASE("steady_residual") {
  const auto p = example_params();
  const auto s = solve_steady_state(p);
  CHECK(steady_residual(p, s) < 1e-12);

  SteadyStated zero;
  CHECK(steady_residual(p, zero) > 1.0);

  SteadyStated perturbed = s;
  perturbed.c1_s += 1e-6;
  const double r = steady_residual(p, perturbed);
  CHECK(r >= 1e-8);
  CHECK(r <= 1e-4);
}

TEST_CASE("fixed point is insensitive to relaxation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int compared = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double kappa = 0.5 + u01(rng);
    const auto p = make_system_params(kappa, kappa * (0.5 + u01(rng)), 0.01 + 0.1 * u01(rng),
                                      50 + 100 * u01(rng), 1e-3 * u01(rng), u01(rng),
                                      50 + 100 * u01(rng), std::polar(300 * u01(rng), 2 * pi * u01(rng)),
                                      std::polar(300 * u01(rng), 2 * pi * u01(rng)));
    FixedPointOptions a, b, c;
    a.relaxation = 0.3;
    c.relaxation = 0.7;
    const auto sa = solve_steady_state(p, a);
    const auto sb = solve_steady_state(p, b);
    const auto sc = solve_steady_state(p, c);
    for (const auto *other : {&sa, &sc}) {
      CHECK(std::abs(other->c1_s - sb.c1_s) <= 1e-10 * (1 + std::abs(sb.c1_s)));
      CHECK(std::abs(other->c2_s - sb.c2_s) <= 1e-10 * (1 + std::abs(sb.c2_s)));
      CHECK(std::abs(other->b_s - sb.b_s) <= 1e-10 * (1 + std::abs(sb.b_s)));
    }
    ++compared;
  }
  CHECK(compared == 50);
}

TEST_CASE("iteration cap reports NoConvergence with the last step") {
  auto p = example_params();
  p.g0 = 0.05;
  FixedPointOptions opts;
  opts.max_iterations = 2;
  try {
    solve_steady_state(p, opts);
    FAIL("expected NoConvergence");
  } catch (const NoConvergenceError &e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
    CHECK(e.residual() > 0);
    CHECK(e.iterations() == 2);
  }
}

TEST_CASE("relaxation outside (0, 1] is rejected") {
  FixedPointOptions bad;
  bad.relaxation = 0;
  CHECK_THROWS_AS(solve_steady_state(example_params(), bad), Error);
}

TEST_CASE("drives_for_target") {
  SUBCASE("single-mode inversion") {
    const auto [ec, ed] = drives_for_target(0.1, 0.0, 0.0, 1.0, 1.0, 0.01, 0.0, 0.0);
    CHECK(std::abs(ec - C(5)) < 1e-14);
    CHECK(std::abs(ed - C(0.5 * 10)) < 1e-14); // c2 = 10 with the same bare cavity
  }
  SUBCASE("zero coupling needs no drive") {
    const auto [ec, ed] = drives_for_target(0.0, 1.0, 0.5, 1.0, 1.0, 1e-3, 100.0, 100.0);
    CHECK(ec == C(0));
    CHECK(ed == C(0));
  }
  SUBCASE("g0 must be positive") {
    try {
      drives_for_target(0.1, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0);
      FAIL("expected ZeroG0");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::ZeroG0);
    }
  }
}

TEST_CASE("drives round-trip through the solver") {
  const double G = 0.05, theta = -pi / 2, J = 0.5, kappa = 1.0, g0 = 1e-3, delta = 100.0;
  const auto [ec, ed] = drives_for_target(G, theta, J, kappa, kappa, g0, delta, delta);
  const auto p = make_system_params(kappa, kappa, 0.01, 100.0, g0, J, delta, ec, ed);
  const auto s = solve_steady_state(p);
  const auto lin = linearized_from_steady(p, s);
  CHECK(std::abs(lin.G - G) <= 1e-6 * G);
  CHECK(std::abs(lin.theta - theta) <= 1e-6 * std::abs(theta));
  CHECK(steady_residual(p, s) < 1e-10);
}

TEST_CASE("round-trip property over random equal-G targets") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double G = 0.01 + u01(rng), theta = pi * (2 * u01(rng) - 1), J = u01(rng);
    const double kappa = 0.1 + 2 * u01(rng), g0 = 1e-4 + 1e-2 * u01(rng);
    const double delta = 200 * (2 * u01(rng) - 1);
    const auto [ec, ed] = drives_for_target(G, theta, J, kappa, kappa, g0, delta, delta);
    const auto q = make_system_params(kappa, kappa, 0.05, 10.0, g0, J, delta, ec, ed);
    const auto lin = linearized_from_steady(q, solve_steady_state(q));
    CHECK(std::abs(lin.G - G) <= 1e-6 * G);
    CHECK(std::abs(wrap_angle(lin.theta - theta)) <= 1e-6 * std::max(std::abs(theta), 1e-3));
  }
}
