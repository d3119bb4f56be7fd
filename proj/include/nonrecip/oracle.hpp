#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "nonrecip/error.hpp"
#include "nonrecip/model.hpp"
#include "nonrecip/response.hpp"
#include "nonrecip/steady_state.hpp"

// Independent numerical routes to the quantities the closed forms give:
// a generic dense solve of the frequency-domain equations, fixed-step RK4
// integration of the rotating-wave and full linearized equations, and
// least-squares two-tone demodulation of the resulting trajectories.

namespace nonrecip {

template <typename Scalar> using ModeVector = Eigen::Matrix<std::complex<Scalar>, 3, 1>;
template <typename Scalar> using ModeMatrix = Eigen::Matrix<std::complex<Scalar>, 3, 3>;

/// Mode ordering used throughout: (delta c1, delta c2, delta b).
enum Mode : int { kC1 = 0, kC2 = 1, kB = 2 };

template <typename Scalar> struct TimeSeries {
  Scalar t0 = 0;
  Scalar dt = 0;
  std::vector<ModeVector<Scalar>> samples;

  Scalar time(std::size_t k) const { return t0 + Scalar(k) * dt; }
  std::size_t size() const { return samples.size(); }
};

/// Drift matrix M of the rotating-wave equations, d/dt y = -M y + drive:
///   rows (c1, c2, b) = [[k1/2, iJ, -iG1], [iJ, k2/2, iG2], [-iG1*, iG2*, g/2]].
template <typename Scalar>
ModeMatrix<Scalar> drift_matrix(const GeneralLinearizedSystem<Scalar> &s) {
  using C = std::complex<Scalar>;
  const C I(0, 1);
  ModeMatrix<Scalar> M;
  M << C(s.kappa1 / 2), I * s.J, -I * s.G1c,
       I * s.J, C(s.kappa2 / 2), I * s.G2c,
       -I * std::conj(s.G1c), I * std::conj(s.G2c), C(s.gamma / 2);
  return M;
}

/// Slowest amplitude decay rate of the rotating-wave dynamics
/// (min real part of the eigenvalues of the drift matrix).
template <typename Scalar>
Scalar slowest_decay_rate(const GeneralLinearizedSystem<Scalar> &s) {
  Eigen::ComplexEigenSolver<ModeMatrix<Scalar>> es(drift_matrix(s), false);
  return es.eigenvalues().real().minCoeff();
}

/// Solves (M - i x) y = (eps_L, eps_R, 0) for the positive-frequency
/// amplitudes. Throws SingularMatrix when the 2-norm condition number
/// exceeds 1e12.
template <typename Scalar>
ResponseAmplitudes<Scalar> linsolve_response(const GeneralLinearizedSystem<Scalar> &s,
                                             const ProbeSpec<Scalar> &probe) {
  using C = std::complex<Scalar>;
  ModeMatrix<Scalar> A = drift_matrix(s);
  A.diagonal().array() -= C(0, probe.x);
  const Eigen::Matrix<Scalar, 3, 1> sv =
      Eigen::JacobiSVD<ModeMatrix<Scalar>>(A).singularValues();
  if (!(sv(2) > 0) || sv(0) / sv(2) > Scalar(1e12))
    throw Error(ErrorCode::SingularMatrix, "frequency-domain system is singular");
  ModeVector<Scalar> rhs(probe.eps_L, probe.eps_R, C(0));
  const ModeVector<Scalar> y = A.fullPivLu().solve(rhs);
  return {y(kB), y(kC1), y(kC2)};
}

/// Transmission coefficients from the responses to a unit left probe and a
/// unit right probe, with eps_in = eps / sqrt(kappa_port) on each side.
template <typename Scalar>
ScatteringPoint<Scalar> transmission_from_responses(const GeneralLinearizedSystem<Scalar> &s,
                                                    Scalar x,
                                                    const ResponseAmplitudes<Scalar> &left,
                                                    const ResponseAmplitudes<Scalar> &right) {
  const Scalar port = std::sqrt(s.kappa1 * s.kappa2);
  ScatteringPoint<Scalar> p;
  p.x = x;
  p.t_LR = port * left.c2_plus;
  p.t_RL = port * right.c1_plus;
  p.T_LR = std::abs(p.t_LR);
  p.T_RL = std::abs(p.t_RL);
  return p;
}

template <typename Scalar>
ScatteringPoint<Scalar> linsolve_scattering(const GeneralLinearizedSystem<Scalar> &s, Scalar x) {
  return transmission_from_responses(s, x,
                                     linsolve_response(s, ProbeSpec<Scalar>::left(x)),
                                     linsolve_response(s, ProbeSpec<Scalar>::right(x)));
}

namespace detail {

// Classic RK4 with n equal steps of size h from t0, sampling every step.
template <typename Scalar, typename Rhs>
TimeSeries<Scalar> rk4(Rhs &&f, Scalar t0, Scalar h, std::size_t n) {
  TimeSeries<Scalar> ts;
  ts.t0 = t0;
  ts.dt = h;
  ts.samples.reserve(n + 1);
  ModeVector<Scalar> y = ModeVector<Scalar>::Zero();
  ts.samples.push_back(y);
  for (std::size_t k = 0; k < n; ++k) {
    const Scalar t = t0 + Scalar(k) * h;
    const ModeVector<Scalar> k1 = f(t, y);
    const ModeVector<Scalar> k2 = f(t + h / 2, y + (h / 2) * k1);
    const ModeVector<Scalar> k3 = f(t + h / 2, y + (h / 2) * k2);
    const ModeVector<Scalar> k4 = f(t + h, y + h * k3);
    y += (h / 6) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
    ts.samples.push_back(y);
  }
  return ts;
}

template <typename Scalar> std::size_t step_count(Scalar t_end, Scalar dt) {
  if (!(t_end > 0) || !(dt > 0))
    throw Error(ErrorCode::InvalidArgument, "t_end and dt must be > 0");
  return static_cast<std::size_t>(std::ceil(t_end / dt - Scalar(1e-9)));
}

} // namespace detail

/// RK4 integration of the rotating-wave equations from rest, driven by
/// eps_L e^{-ixt} and eps_R e^{-ixt}. The step is shrunk so that an integer
/// number of steps lands exactly on t_end.
template <typename Scalar>
TimeSeries<Scalar> integrate_rwa(const GeneralLinearizedSystem<Scalar> &s,
                                 const ProbeSpec<Scalar> &probe, Scalar t_end, Scalar dt) {
  using C = std::complex<Scalar>;
  const Scalar fastest = std::max({s.kappa1, s.kappa2, s.gamma, std::abs(s.G1c),
                                   std::abs(s.G2c), s.J, std::abs(probe.x)});
  if (dt > Scalar(0.05) / fastest)
    throw Error(ErrorCode::StepTooLarge, "dt must be <= 0.05 / fastest rate");
  if (t_end < Scalar(10) / std::min({s.kappa1, s.kappa2, s.gamma}))
    throw Error(ErrorCode::InvalidArgument, "t_end must be >= 10 / slowest decay");
  const std::size_t n = detail::step_count(t_end, dt);
  const ModeMatrix<Scalar> M = drift_matrix(s);
  const ModeVector<Scalar> drive(probe.eps_L, probe.eps_R, C(0));
  auto rhs = [&](Scalar t, const ModeVector<Scalar> &y) -> ModeVector<Scalar> {
    return -M * y + std::polar(Scalar(1), -probe.x * t) * drive;
  };
  return detail::rk4<Scalar>(rhs, Scalar(0), t_end / Scalar(n), n);
}

template <typename Scalar>
TimeSeries<Scalar> integrate_rwa(const LinearizedSystem<Scalar> &lin,
                                 const ProbeSpec<Scalar> &probe, Scalar t_end, Scalar dt) {
  return integrate_rwa(GeneralLinearizedSystem<Scalar>::from(lin), probe, t_end, dt);
}

/// RK4 integration of the linearized equations before the rotating-wave
/// approximation, in the frame rotating at omega_m (mechanics) and at the
/// effective detunings (cavities). Every counter-rotating term is kept.
/// Couplings come straight from the steady state: G1 = g0 c1_s,
/// G2 e^{i theta} = g0 c2_s.
template <typename Scalar>
TimeSeries<Scalar> integrate_full(const SystemParams<Scalar> &params,
                                  const SteadyState<Scalar> &steady,
                                  const ProbeSpec<Scalar> &probe, Scalar t_end, Scalar dt) {
  using C = std::complex<Scalar>;
  const auto p = validated(params);
  if (dt > Scalar(0.02) / p.omega_m)
    throw Error(ErrorCode::StepTooLarge, "dt must be <= 0.02 / omega_m");
  const std::size_t n = detail::step_count(t_end, dt);

  const C I(0, 1);
  const C g1 = p.g0 * steady.c1_s; // G1
  const C g2 = p.g0 * steady.c2_s; // G2 e^{i theta}
  const Scalar wm = p.omega_m, d1 = steady.delta1, d2 = steady.delta2;
  const Scalar delta = probe.x + wm; // probe detuning from the coupling field
  const Scalar k1 = p.kappa1 / 2, k2 = p.kappa2 / 2, gm = p.gamma / 2, J = p.J;

  auto rhs = [&](Scalar t, const ModeVector<Scalar> &y) -> ModeVector<Scalar> {
    const C c1 = y(kC1), c2 = y(kC2), b = y(kB);
    const C e_p1 = std::polar(Scalar(1), (wm + d1) * t); // e^{i(wm+D1)t}
    const C e_m1 = std::polar(Scalar(1), (wm - d1) * t); // e^{i(wm-D1)t}
    const C e_p2 = std::polar(Scalar(1), (wm + d2) * t);
    const C e_m2 = std::polar(Scalar(1), (wm - d2) * t);
    const C e_12 = std::polar(Scalar(1), (d1 - d2) * t);
    ModeVector<Scalar> dy;
    dy(kC1) = -k1 * c1 + I * g1 * (std::conj(b) * e_p1 + b * std::conj(e_m1)) +
              probe.eps_L * std::polar(Scalar(1), -(delta - d1) * t) - I * J * c2 * e_12;
    dy(kC2) = -k2 * c2 - I * g2 * (std::conj(b) * e_p2 + b * std::conj(e_m2)) +
              probe.eps_R * std::polar(Scalar(1), -(delta - d2) * t) -
              I * J * c1 * std::conj(e_12);
    dy(kB) = -gm * b + I * (std::conj(g1) * c1 * e_m1 + g1 * std::conj(c1) * e_p1) -
             I * (std::conj(g2) * c2 * e_m2 + g2 * std::conj(c2) * e_p2);
    return dy;
  };
  return detail::rk4<Scalar>(rhs, Scalar(0), t_end / Scalar(n), n);
}

/// Per-mode amplitudes of the e^{-ixt} and e^{+ixt} components.
template <typename Scalar> struct Demodulated {
  std::array<std::complex<Scalar>, 3> plus{};
  std::array<std::complex<Scalar>, 3> minus{};

  ResponseAmplitudes<Scalar> as_response() const {
    return {plus[kB], plus[kC1], plus[kC2]};
  }
};

/// Least-squares fit of the trailing window_fraction of each mode's samples
/// to a e^{-ixt} + b e^{+ixt}, with t the absolute sample time. When the two
/// tones cannot be told apart on the window (|x| T_window < 1e-4, including
/// x = 0) a single constant tone is fitted and b is reported as zero.
template <typename Scalar>
Demodulated<Scalar> demodulate(const TimeSeries<Scalar> &ts, Scalar x,
                               Scalar window_fraction = Scalar(0.25)) {
  using C = std::complex<Scalar>;
  if (!(window_fraction > 0) || !(window_fraction < 1))
    throw Error(ErrorCode::InvalidArgument, "window_fraction must be in (0, 1)");
  const std::size_t n = ts.size();
  const auto m = static_cast<std::size_t>(std::floor(window_fraction * Scalar(n)));
  if (m < 16)
    throw Error(ErrorCode::WindowTooShort, "demodulation window has fewer than 16 samples");
  const std::size_t first = n - m;
  const Scalar span = ts.time(n - 1) - ts.time(first);
  const bool single_tone = std::abs(x) * span < Scalar(1e-4);

  using Basis = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
  Basis A(Eigen::Index(m), single_tone ? 1 : 2);
  Basis Y(Eigen::Index(m), 3);
  for (std::size_t k = 0; k < m; ++k) {
    const Scalar t = ts.time(first + k);
    A(Eigen::Index(k), 0) = std::polar(Scalar(1), -x * t);
    if (!single_tone)
      A(Eigen::Index(k), 1) = std::polar(Scalar(1), x * t);
    Y.row(Eigen::Index(k)) = ts.samples[first + k].transpose();
  }
  const Basis coeffs = A.colPivHouseholderQr().solve(Y);

  Demodulated<Scalar> out;
  for (int mode = 0; mode < 3; ++mode) {
    out.plus[std::size_t(mode)] = coeffs(0, mode);
    out.minus[std::size_t(mode)] = single_tone ? C(0) : coeffs(1, mode);
  }
  return out;
}

/// Transmission pair recovered from two rotating-wave integrations (unit
/// left probe, unit right probe) by demodulation at x.
template <typename Scalar>
ScatteringPoint<Scalar> timedomain_rwa_scattering(const GeneralLinearizedSystem<Scalar> &s,
                                                  Scalar x, Scalar t_end, Scalar dt,
                                                  Scalar window_fraction = Scalar(0.25)) {
  const auto left = demodulate(integrate_rwa(s, ProbeSpec<Scalar>::left(x), t_end, dt), x,
                               window_fraction);
  const auto right = demodulate(integrate_rwa(s, ProbeSpec<Scalar>::right(x), t_end, dt), x,
                                window_fraction);
  return transmission_from_responses(s, x, left.as_response(), right.as_response());
}

/// Same as timedomain_rwa_scattering but through the full linearized
/// equations of a physical system about its steady state.
template <typename Scalar>
ScatteringPoint<Scalar> timedomain_full_scattering(const SystemParams<Scalar> &params,
                                                   const SteadyState<Scalar> &steady,
                                                   Scalar x, Scalar t_end, Scalar dt,
                                                   Scalar window_fraction = Scalar(0.25)) {
  GeneralLinearizedSystem<Scalar> ports;
  ports.kappa1 = params.kappa1;
  ports.kappa2 = params.kappa2;
  const auto left = demodulate(
      integrate_full(params, steady, ProbeSpec<Scalar>::left(x), t_end, dt), x, window_fraction);
  const auto right = demodulate(
      integrate_full(params, steady, ProbeSpec<Scalar>::right(x), t_end, dt), x, window_fraction);
  return transmission_from_responses(ports, x, left.as_response(), right.as_response());
}

/// Largest deviation between two transmission pairs, relative to the larger
/// transmission magnitude of the reference.
template <typename Scalar>
Scalar transmission_deviation(const ScatteringPoint<Scalar> &a,
                              const ScatteringPoint<Scalar> &reference) {
  const Scalar scale = std::max({reference.T_LR, reference.T_RL,
                                 std::numeric_limits<Scalar>::min()});
  return std::max(std::abs(a.t_LR - reference.t_LR), std::abs(a.t_RL - reference.t_RL)) /
         scale;
}

/// Integration horizon long enough for transients to decay by e^{-15} over
/// the leading 75% of the run: 20 / min(kappa, gamma, slowest decay rate).
template <typename Scalar>
Scalar settling_time(const GeneralLinearizedSystem<Scalar> &s) {
  const Scalar slowest =
      std::min({s.kappa1, s.kappa2, s.gamma, slowest_decay_rate(s)});
  return Scalar(20) / slowest;
}

/// Deviation of the full linearized equations from the rotating-wave ones
/// for a reduced model lifted onto the red sideband at each
/// omega_m = factor * kappa. Both routes share step size, horizon and
/// demodulation window, so the difference isolates the counter-rotating
/// terms.
template <typename Scalar>
std::vector<Scalar> rwa_deviation_scan(const LinearizedSystem<Scalar> &lin,
                                       const std::vector<Scalar> &omega_m_factors, Scalar g0,
                                       Scalar x, Scalar t_end,
                                       Scalar window_fraction = Scalar(0.25)) {
  const auto general = GeneralLinearizedSystem<Scalar>::from(lin);
  std::vector<Scalar> out(omega_m_factors.size());
  for (std::size_t i = 0; i < omega_m_factors.size(); ++i) {
    const Scalar omega_m = omega_m_factors[i] * lin.kappa;
    const auto params = red_sideband_params(lin, omega_m, g0);
    const auto steady = solve_steady_state(params);
    const Scalar dt = Scalar(0.02) / omega_m;
    const auto full = timedomain_full_scattering(params, steady, x, t_end, dt, window_fraction);
    const auto rwa = timedomain_rwa_scattering(general, x, t_end, dt, window_fraction);
    out[i] = transmission_deviation(full, rwa);
  }
  return out;
}

using TimeSeriesd = TimeSeries<double>;

} // namespace nonrecip
