#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "nonrecip/error.hpp"

namespace nonrecip {

/// Maps an angle onto the principal branch (-pi, pi].
template <typename Scalar> Scalar wrap_angle(Scalar theta) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar w = std::remainder(theta, Scalar(2) * pi);
  if (w <= -pi)
    w += Scalar(2) * pi;
  return w;
}

/// Propagation direction of a transmission coefficient or of the open
/// channel of an isolator.
enum class Direction { L_to_R, R_to_L };

inline const char *to_string(Direction d) {
  return d == Direction::L_to_R ? "L_to_R" : "R_to_L";
}

/// Physical parameters of the driven double-cavity system. All rates share
/// one angular-frequency unit (hbar = 1). Only detunings are stored; absolute
/// cavity, coupling and probe frequencies never enter the dynamics.
template <typename Scalar> struct SystemParams {
  using Complex = std::complex<Scalar>;

  Scalar kappa1 = 1;
  Scalar kappa2 = 1;
  Scalar gamma = 1;
  Scalar omega_m = 1;
  Scalar g0 = 0;
  Scalar J = 0;
  Scalar delta_c = 0; // cavity minus coupling-field frequency
  Complex eps_c{};
  Complex eps_d{};
};

/// Validates raw fields. No clamping: any violation throws.
template <typename Scalar>
SystemParams<Scalar>
make_system_params(Scalar kappa1, Scalar kappa2, Scalar gamma, Scalar omega_m,
                   Scalar g0, Scalar J, Scalar delta_c,
                   std::complex<Scalar> eps_c, std::complex<Scalar> eps_d) {
  // Negated comparisons so NaN is rejected too.
  if (!(kappa1 > 0) || !(kappa2 > 0) || !(gamma > 0) || !(omega_m > 0))
    throw Error(ErrorCode::NonPositiveRate,
                "kappa1, kappa2, gamma and omega_m must be > 0");
  if (!(g0 >= 0) || !(J >= 0))
    throw Error(ErrorCode::NegativeCoupling, "g0 and J must be >= 0");
  if (!std::isfinite(delta_c) || !std::isfinite(std::abs(eps_c)) ||
      !std::isfinite(std::abs(eps_d)))
    throw Error(ErrorCode::InvalidArgument, "non-finite detuning or drive");
  return {kappa1, kappa2, gamma, omega_m, g0, J, delta_c, eps_c, eps_d};
}

template <typename Scalar>
SystemParams<Scalar> validated(const SystemParams<Scalar> &p) {
  return make_system_params(p.kappa1, p.kappa2, p.gamma, p.omega_m, p.g0, p.J,
                            p.delta_c, p.eps_c, p.eps_d);
}

/// Weak probe fields injected from the left and right mirrors, and the probe
/// detuning from the mechanical sideband, x = delta - omega_m.
template <typename Scalar> struct ProbeSpec {
  std::complex<Scalar> eps_L{};
  std::complex<Scalar> eps_R{};
  Scalar x = 0;

  static ProbeSpec left(Scalar x) { return {Scalar(1), Scalar(0), x}; }
  static ProbeSpec right(Scalar x) { return {Scalar(0), Scalar(1), x}; }
};

/// Mean-field solution of the undriven-by-probe problem. delta1/delta2 are
/// the effective detunings shifted by radiation pressure.
template <typename Scalar> struct SteadyState {
  std::complex<Scalar> b_s{};
  std::complex<Scalar> c1_s{};
  std::complex<Scalar> c2_s{};
  Scalar delta1 = 0;
  Scalar delta2 = 0;
};

/// Reduced three-mode beam-splitter model: equal cavity decay, equal
/// coupling magnitude G, relative coupling phase theta in (-pi, pi].
template <typename Scalar> struct LinearizedSystem {
  Scalar G = 0;
  Scalar theta = 0;
  Scalar J = 0;
  Scalar kappa = 1;
  Scalar gamma = 1;
};

template <typename Scalar>
LinearizedSystem<Scalar> make_linearized(Scalar G, Scalar theta, Scalar J,
                                         Scalar kappa, Scalar gamma) {
  if (!(kappa > 0) || !(gamma > 0))
    throw Error(ErrorCode::NonPositiveRate, "kappa and gamma must be > 0");
  if (!(G >= 0) || !(J >= 0))
    throw Error(ErrorCode::NegativeCoupling, "G and J must be >= 0");
  if (!std::isfinite(theta) || !std::isfinite(G) || !std::isfinite(J))
    throw Error(ErrorCode::InvalidArgument, "non-finite linearized parameter");
  return {G, wrap_angle(theta), J, kappa, gamma};
}

/// Linearized model before the equal-damping / equal-coupling reduction.
/// The cavity-2 coupling G2c already includes the relative phase, i.e. the
/// reduced model corresponds to G1c = G, G2c = G e^{i theta}.
template <typename Scalar> struct GeneralLinearizedSystem {
  std::complex<Scalar> G1c{};
  std::complex<Scalar> G2c{};
  Scalar kappa1 = 1;
  Scalar kappa2 = 1;
  Scalar gamma = 1;
  Scalar J = 0;

  static GeneralLinearizedSystem from(const LinearizedSystem<Scalar> &lin) {
    return {std::complex<Scalar>(lin.G),
            std::polar(lin.G, lin.theta),
            lin.kappa,
            lin.kappa,
            lin.gamma,
            lin.J};
  }
};

/// Reduces a steady state to (G, theta) in the gauge where g0 c1_s is real
/// positive. Only valid in the equal-damping, equal-coupling regime; anything
/// else must go through GeneralLinearizedSystem.
template <typename Scalar>
LinearizedSystem<Scalar> linearized_from_steady(const SystemParams<Scalar> &p,
                                                const SteadyState<Scalar> &s) {
  const Scalar a1 = std::abs(s.c1_s);
  const Scalar a2 = std::abs(s.c2_s);
  if (a1 == 0 || p.g0 == 0)
    throw Error(ErrorCode::ZeroCoupling, "g0 |c1_s| is zero");
  const Scalar kappa_scale = std::max(p.kappa1, p.kappa2);
  if (std::abs(p.kappa1 - p.kappa2) > Scalar(1e-9) * kappa_scale)
    throw Error(ErrorCode::AsymmetricSystem, "kappa1 != kappa2");
  const Scalar G1 = p.g0 * a1;
  const Scalar G2 = p.g0 * a2;
  if (std::abs(G1 - G2) > Scalar(1e-6) * std::max(G1, G2))
    throw Error(ErrorCode::AsymmetricSystem, "|G1| != |G2|");
  // arg(c2/c1) is invariant under a common phase; computing it from the
  // product avoids subtracting two wrapped angles.
  const Scalar theta = std::arg(s.c2_s * std::conj(s.c1_s));
  return make_linearized(G1, theta, p.J, p.kappa1, p.gamma);
}

using SystemParamsd = SystemParams<double>;
using ProbeSpecd = ProbeSpec<double>;
using SteadyStated = SteadyState<double>;
using LinearizedSystemd = LinearizedSystem<double>;
using GeneralLinearizedSystemd = GeneralLinearizedSystem<double>;

} // namespace nonrecip
