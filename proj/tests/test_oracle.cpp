#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "nonrecip/oracle.hpp"

using namespace nonrecip;
using C = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

LinearizedSystemd half_pi_point() { return make_linearized(0.5, -pi / 2, 0.5, 1.0, 1.0); }

double worst_rel(const ResponseAmplitudesd &a, const ResponseAmplitudesd &b) {
  const double scale =
      std::max({std::abs(b.b_plus), std::abs(b.c1_plus), std::abs(b.c2_plus)});
  return std::max({std::abs(a.b_plus - b.b_plus), std::abs(a.c1_plus - b.c1_plus),
                   std::abs(a.c2_plus - b.c2_plus)}) /
         scale;
}

double fastest(const GeneralLinearizedSystemd &s, double x) {
  return std::max({s.kappa1, s.kappa2, s.gamma, std::abs(s.G1c), std::abs(s.G2c), s.J,
                   std::abs(x)});
}

TimeSeriesd synthetic(double x, C a, C b, std::size_t n, double dt) {
  TimeSeriesd ts;
  ts.t0 = 0.3;
  ts.dt = dt;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = ts.time(k);
    const C v = a * std::polar(1.0, -x * t) + b * std::polar(1.0, x * t);
    ts.samples.emplace_back(v, 2.0 * v, -v);
  }
  return ts;
}

} // namespace

TEST_CASE("linsolve_response: reference cases") {
  SUBCASE("bare cavity") {
    const GeneralLinearizedSystemd s{C(0), C(0), 1.6, 0.9, 0.4, 0.0};
    const auto r = linsolve_response(s, ProbeSpecd::left(0.0));
    CHECK(std::abs(r.c1_plus - C(2 / 1.6)) < 1e-15);
    CHECK(std::abs(r.c2_plus) < 1e-15);
    CHECK(std::abs(r.b_plus) < 1e-15);
  }
  SUBCASE("reduces to the closed form in the symmetric gauge") {
    const auto lin = make_linearized(0.37, 1.1, 0.81, 1.3, 0.45);
    const auto r = linsolve_response(GeneralLinearizedSystemd::from(lin), ProbeSpecd{C(0.4, 1), C(-2, 0.5), -0.7});
    const auto ref = response_amplitudes(lin, ProbeSpecd{C(0.4, 1), C(-2, 0.5), -0.7});
    CHECK(worst_rel(r, ref) < 1e-12);
  }
  SUBCASE("singular system") {
    // kappa, gamma -> 0 with no coupling: M - ix is nearly zero on every mode.
    GeneralLinearizedSystemd s{C(0), C(0), 1e-14, 1.0, 1.0, 0.0};
    try {
      linsolve_response(s, ProbeSpecd::left(0.0));
      FAIL("expected SingularMatrix");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::SingularMatrix);
    }
  }
}

TEST_CASE("unequal cavity decay rates give no perfect isolation on a (J, x) scan") {
  GeneralLinearizedSystemd s{C(0.3), std::polar(0.4, -pi / 2), 1.0, 2.0, 1.0, 0.0};
  double best_lr = 1e300, best_rl = 1e300;
  for (int i = 0; i <= 200; ++i) {
    s.J = 4.0 * i / 200;
    for (int k = 0; k <= 200; ++k) {
      const double x = -4 + 8.0 * k / 200;
      const auto p = linsolve_scattering(s, x);
      best_lr = std::min(best_lr, std::max(std::abs(p.T_LR - 1), p.T_RL));
      best_rl = std::min(best_rl, std::max(p.T_LR, std::abs(p.T_RL - 1)));
    }
  }
  CHECK(best_lr > 1e-3);
  CHECK(best_rl > 1e-3);
}

TEST_CASE("integrate_rwa") {
  SUBCASE("zero drive stays at rest") {
    const auto ts = integrate_rwa(half_pi_point(), ProbeSpecd{C(0), C(0), 0.2}, 20.0, 0.01);
    for (const auto &y : ts.samples)
      CHECK(y.norm() == 0.0);
  }
  SUBCASE("perfect transmission at the perfect point") {
    const auto s = GeneralLinearizedSystemd::from(half_pi_point());
    const auto p = timedomain_rwa_scattering(s, 0.0, 40.0, 0.01);
    CHECK(std::abs(p.T_LR - 1) < 1e-3);
    CHECK(p.T_RL < 1e-3);
  }
  SUBCASE("matches the dense solve at a generic point") {
    const auto lin = make_linearized(0.4, pi / 3, 0.4, 1.0, 1.0);
    const auto s = GeneralLinearizedSystemd::from(lin);
    const double x = 0.3;
    for (auto probe : {ProbeSpecd::left(x), ProbeSpecd::right(x)}) {
      const auto d = demodulate(integrate_rwa(s, probe, settling_time(s), 0.02), x);
      CHECK(worst_rel(d.as_response(), linsolve_response(s, probe)) < 1e-3);
    }
  }
  SUBCASE("negative frequency components vanish") {
    const double x = 0.4;
    const auto d = demodulate(integrate_rwa(half_pi_point(), ProbeSpecd::left(x), 60.0, 0.01), x);
    for (int m = 0; m < 3; ++m)
      CHECK(std::abs(d.minus[m]) < 1e-6 * std::abs(d.plus[m]));
  }
  SUBCASE("preconditions") {
    try {
      integrate_rwa(half_pi_point(), ProbeSpecd::left(0.0), 40.0, 0.2);
      FAIL("expected StepTooLarge");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::StepTooLarge);
    }
    CHECK_THROWS_AS(integrate_rwa(half_pi_point(), ProbeSpecd::left(0.0), 5.0, 0.01), Error);
  }
}

TEST_CASE("RK4 is fourth order on a driven single cavity") {
  const double kappa = 1.0, x = 0.7, t_end = 12.0;
  const GeneralLinearizedSystemd s{C(0), C(0), kappa, kappa, kappa, 0.0};
  const C eps(0.8, -0.3);
  const auto exact = eps / C(kappa / 2, -x) *
                     (std::polar(1.0, -x * t_end) - std::exp(-kappa * t_end / 2));
  auto error = [&](double dt) {
    const auto ts = integrate_rwa(s, ProbeSpecd{eps, C(0), x}, t_end, dt);
    return std::abs(ts.samples.back()(kC1) - exact);
  };
  const double e1 = error(0.05), e2 = error(0.025);
  CHECK(e2 > 0);
  CHECK(e1 / e2 >= 12.0);
}

TEST_CASE("demodulate") {
  SUBCASE("single tone") {
    const auto d = demodulate(synthetic(0.9, C(3), C(0), 4000, 0.01), 0.9);
    CHECK(std::abs(d.plus[kC1] - C(3)) < 1e-10);
    CHECK(std::abs(d.minus[kC1]) < 1e-10);
    CHECK(std::abs(d.plus[kC2] - C(6)) < 1e-10);
    CHECK(std::abs(d.plus[kB] + C(3)) < 1e-10);
  }
  SUBCASE("two tones") {
    const auto d = demodulate(synthetic(1.3, C(2), C(0.5), 4000, 0.01), 1.3);
    CHECK(std::abs(d.plus[kC1] - C(2)) < 1e-10);
    CHECK(std::abs(d.minus[kC1] - C(0.5)) < 1e-10);
  }
  SUBCASE("x = 0 folds into one constant") {
    const auto d = demodulate(synthetic(0.0, C(1, 2), C(0), 100, 0.1), 0.0);
    CHECK(std::abs(d.plus[kC1] - C(1, 2)) < 1e-12);
    CHECK(d.minus[kC1] == C(0));
  }
  SUBCASE("window too short") {
    try {
      demodulate(synthetic(1.0, C(1), C(0), 40, 0.1), 1.0);
      FAIL("expected WindowTooShort");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::WindowTooShort);
    }
    CHECK_THROWS_AS(demodulate(synthetic(1.0, C(1), C(0), 400, 0.1), 1.0, 1.0), Error);
  }
}

TEST_CASE("integrate_full") {
  const auto lin = half_pi_point();
  SUBCASE("zero drive stays at rest") {
    const auto params = red_sideband_params(lin, 50.0, 1e-3);
    const auto steady = solve_steady_state(params);
    const auto ts = integrate_full(params, steady, ProbeSpecd{C(0), C(0), 0.1}, 2.0, 1e-4);
    for (const auto &y : ts.samples)
      CHECK(y.norm() == 0.0);
  }
  SUBCASE("step must resolve omega_m") {
    const auto params = red_sideband_params(lin, 50.0, 1e-3);
    const auto steady = solve_steady_state(params);
    try {
      integrate_full(params, steady, ProbeSpecd::left(0.0), 2.0, 1e-3);
      FAIL("expected StepTooLarge");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::StepTooLarge);
    }
  }
  SUBCASE("approaches the rotating-wave result as omega_m grows") {
    const auto devs = rwa_deviation_scan(lin, std::vector<double>{50.0, 200.0}, 1e-3, 0.0, 40.0);
    REQUIRE(devs.size() == 2);
    CHECK(devs[1] < devs[0]);
    CHECK(devs[1] < 1e-3);
  }
}

TEST_CASE("time-domain demodulation agrees with the dense solve over random draws") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int draws = 0;
  for (int n = 0; n < 20; ++n) {
    const double kappa = 0.2 + 3 * u01(rng);
    const double gamma = kappa * std::pow(10.0, -2 + std::log10(300.0) * u01(rng));
    const auto lin = make_linearized(2 * kappa * u01(rng), pi * (2 * u01(rng) - 1),
                                     2 * kappa * u01(rng), kappa, gamma);
    const double x = kappa * (4 * u01(rng) - 2);
    const auto s = GeneralLinearizedSystemd::from(lin);
    const double dt = 0.02 / fastest(s, x);
    const double t_end = settling_time(s);
    const auto ref = linsolve_response(s, ProbeSpecd::left(x));
    const auto d1 = demodulate(integrate_rwa(s, ProbeSpecd::left(x), t_end, dt), x).as_response();
    const double e1 = worst_rel(d1, ref);
    CHECK(e1 < 1e-3);
    if (e1 >= 1e-3) {
      const auto d2 =
          demodulate(integrate_rwa(s, ProbeSpecd::left(x), 2 * t_end, dt), x).as_response();
      CHECK(worst_rel(d2, ref) < e1);
    }
    ++draws;
  }
  CHECK(draws == 20);
}

TEST_CASE("settling time covers the slowest mode") {
  const auto s = GeneralLinearizedSystemd::from(make_linearized(0.3, 0.4, 0.7, 1.0, 0.05));
  const double slow = slowest_decay_rate(s);
  CHECK(slow > 0);
  CHECK(slow <= 0.5 + 1e-12);
  CHECK(settling_time(s) == doctest::Approx(20 / std::min(0.05, slow)));
}
