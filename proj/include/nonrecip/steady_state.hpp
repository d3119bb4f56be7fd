#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>

#include "nonrecip/error.hpp"
#include "nonrecip/model.hpp"

namespace nonrecip {

struct FixedPointOptions {
  double relaxation = 0.5; // lambda in u <- (1 - lambda) u + lambda F(u)
  double tolerance = 1e-12;
  int max_iterations = 10000;
};

namespace detail {

template <typename Scalar> struct CavityMeans {
  std::complex<Scalar> c1, c2;
};

// Cavity mean amplitudes for given effective detunings.
template <typename Scalar>
CavityMeans<Scalar> cavity_means(const SystemParams<Scalar> &p, Scalar delta1,
                                 Scalar delta2) {
  using C = std::complex<Scalar>;
  const C I(0, 1);
  const C a1(p.kappa1 / 2, delta1);
  const C a2(p.kappa2 / 2, delta2);
  const C den = p.J * p.J + a1 * a2;
  return {(a2 * p.eps_c - I * p.J * p.eps_d) / den,
          (a1 * p.eps_d - I * p.J * p.eps_c) / den};
}

template <typename Scalar>
std::complex<Scalar> mechanical_mean(const SystemParams<Scalar> &p,
                                     std::complex<Scalar> c1,
                                     std::complex<Scalar> c2) {
  using C = std::complex<Scalar>;
  return C(0, -p.g0) * (std::norm(c2) - std::norm(c1)) /
         C(p.gamma / 2, p.omega_m);
}

} // namespace detail

/// Self-consistent mean fields. Iterates on the real feedback variable
/// u = b_s + b_s^* seeded at u = 0; only that branch is ever returned.
/// Throws NoConvergenceError when the iteration cap is hit.
template <typename Scalar>
SteadyState<Scalar> solve_steady_state(const SystemParams<Scalar> &params,
                                       const FixedPointOptions &opts = {}) {
  const auto p = validated(params);
  const Scalar lambda = Scalar(opts.relaxation);
  if (!(lambda > 0) || !(lambda <= 1))
    throw Error(ErrorCode::InvalidArgument, "relaxation must be in (0, 1]");

  auto feedback = [&p](Scalar u) {
    const auto cs = detail::cavity_means(p, p.delta_c - p.g0 * u,
                                         p.delta_c + p.g0 * u);
    return Scalar(2) * detail::mechanical_mean(p, cs.c1, cs.c2).real();
  };

  Scalar u = 0;
  Scalar step = 0;
  bool converged = false;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const Scalar next = (1 - lambda) * u + lambda * feedback(u);
    step = std::abs(next - u);
    u = next;
    if (!std::isfinite(u))
      break;
    if (step <= Scalar(opts.tolerance) * (1 + std::abs(u))) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NoConvergenceError(double(step), opts.max_iterations);

  SteadyState<Scalar> s;
  s.delta1 = p.delta_c - p.g0 * u;
  s.delta2 = p.delta_c + p.g0 * u;
  const auto cs = detail::cavity_means(p, s.delta1, s.delta2);
  s.c1_s = cs.c1;
  s.c2_s = cs.c2;
  s.b_s = detail::mechanical_mean(p, cs.c1, cs.c2);
  return s;
}

/// Max absolute mismatch over the three mean-field relations, with the
/// effective detunings recomputed from b_s (not taken from the struct).
template <typename Scalar>
Scalar steady_residual(const SystemParams<Scalar> &p,
                       const SteadyState<Scalar> &s) {
  const Scalar u = Scalar(2) * s.b_s.real();
  const auto cs =
      detail::cavity_means(p, p.delta_c - p.g0 * u, p.delta_c + p.g0 * u);
  const Scalar r_b =
      std::abs(s.b_s - detail::mechanical_mean(p, s.c1_s, s.c2_s));
  return std::max({r_b, std::abs(s.c1_s - cs.c1), std::abs(s.c2_s - cs.c2)});
}

/// Coupling-field amplitudes that produce c1_s = G/g0 and
/// c2_s = (G/g0) e^{i theta} at the given effective detunings. Exact when the
/// detunings are themselves self-consistent (always so for equal |c1_s|,
/// |c2_s| and delta1 == delta2).
template <typename Scalar>
std::pair<std::complex<Scalar>, std::complex<Scalar>>
drives_for_target(Scalar G, Scalar theta, Scalar J, Scalar kappa1,
                  Scalar kappa2, Scalar g0, Scalar delta1, Scalar delta2) {
  using C = std::complex<Scalar>;
  if (!(g0 > 0))
    throw Error(ErrorCode::ZeroG0, "g0 must be > 0 to invert the steady state");
  if (!(G >= 0))
    throw Error(ErrorCode::NegativeCoupling, "target G must be >= 0");
  const C I(0, 1);
  const C c1(G / g0);
  const C c2 = std::polar(G / g0, theta);
  return {C(kappa1 / 2, delta1) * c1 + I * J * c2,
          C(kappa2 / 2, delta2) * c2 + I * J * c1};
}

/// Physical system realising a reduced model with both coupling fields on
/// the red sideband (delta_c = omega_m) and single-photon coupling g0.
template <typename Scalar>
SystemParams<Scalar> red_sideband_params(const LinearizedSystem<Scalar> &lin,
                                         Scalar omega_m, Scalar g0) {
  const auto [eps_c, eps_d] = drives_for_target(
      lin.G, lin.theta, lin.J, lin.kappa, lin.kappa, g0, omega_m, omega_m);
  return make_system_params(lin.kappa, lin.kappa, lin.gamma, omega_m, g0,
                            lin.J, omega_m, eps_c, eps_d);
}

} // namespace nonrecip
