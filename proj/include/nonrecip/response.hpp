#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "nonrecip/error.hpp"
#include "nonrecip/model.hpp"

namespace nonrecip {

/// Positive-frequency response amplitudes delta s_+ of the reduced model.
/// The negative-frequency parts vanish identically and are not stored.
template <typename Scalar> struct ResponseAmplitudes {
  std::complex<Scalar> b_plus{};
  std::complex<Scalar> c1_plus{};
  std::complex<Scalar> c2_plus{};
};

/// Transmission at one probe detuning. t_LR is the right output per unit
/// left input (right input off); t_RL the reverse.
template <typename Scalar> struct ScatteringPoint {
  Scalar x = 0;
  std::complex<Scalar> t_LR{};
  std::complex<Scalar> t_RL{};
  Scalar T_LR = 0;
  Scalar T_RL = 0;

  Scalar T(Direction d) const { return d == Direction::L_to_R ? T_LR : T_RL; }
};

namespace detail {

/// |D(x)| at or below this is treated as singular.
inline constexpr double kSingularDenominator = 1e-30;

template <typename Scalar> struct Spectral {
  std::complex<Scalar> kappa_x, gamma_x, D;
};

// kappa_x = kappa - 2ix, gamma_x = gamma - 2ix and the common denominator
// D = 8 G^2 kappa_x + (4 J^2 + kappa_x^2) gamma_x + 16 i G^2 J cos(theta).
template <typename Scalar>
Spectral<Scalar> spectral(const LinearizedSystem<Scalar> &lin, Scalar x) {
  using C = std::complex<Scalar>;
  const C kx(lin.kappa, -2 * x);
  const C gx(lin.gamma, -2 * x);
  const Scalar G2 = lin.G * lin.G;
  const C D = Scalar(8) * G2 * kx + (Scalar(4) * lin.J * lin.J + kx * kx) * gx +
              C(0, 16 * G2 * lin.J * std::cos(lin.theta));
  if (!(std::abs(D) > Scalar(kSingularDenominator)))
    throw Error(ErrorCode::SingularDenominator,
                "response denominator vanishes at x = " + std::to_string(double(x)));
  return {kx, gx, D};
}

} // namespace detail

/// Closed-form steady response of the reduced model to the probe.
template <typename Scalar>
ResponseAmplitudes<Scalar> response_amplitudes(const LinearizedSystem<Scalar> &lin,
                                               const ProbeSpec<Scalar> &probe) {
  using C = std::complex<Scalar>;
  const C I(0, 1);
  const auto [kx, gx, D] = detail::spectral(lin, probe.x);
  const Scalar G = lin.G, J = lin.J;
  const C ph = std::polar(Scalar(1), lin.theta);
  const C phc = std::conj(ph);
  const C eL = probe.eps_L, eR = probe.eps_R;

  ResponseAmplitudes<Scalar> r;
  r.b_plus = Scalar(4) * G *
             ((I * kx - Scalar(2) * J * phc) * eL +
              (Scalar(2) * J - I * kx * phc) * eR) /
             D;
  const C direct = Scalar(2) * (Scalar(4) * G * G + gx * kx);
  r.c1_plus = (direct * eL + (Scalar(8) * G * G * phc - Scalar(4) * I * J * gx) * eR) / D;
  r.c2_plus = (direct * eR + (Scalar(8) * G * G * ph - Scalar(4) * I * J * gx) * eL) / D;
  return r;
}

/// Input-output relation: eps_out = sqrt(kappa) dc_+ - eps / sqrt(kappa).
/// Returns (left output, right output).
template <typename Scalar>
std::pair<std::complex<Scalar>, std::complex<Scalar>>
output_fields(const LinearizedSystem<Scalar> &lin, const ProbeSpec<Scalar> &probe) {
  const auto r = response_amplitudes(lin, probe);
  const Scalar sk = std::sqrt(lin.kappa);
  return {sk * r.c1_plus - probe.eps_L / sk, sk * r.c2_plus - probe.eps_R / sk};
}

template <typename Scalar>
ScatteringPoint<Scalar> scattering_point(const LinearizedSystem<Scalar> &lin,
                                         Scalar x) {
  using C = std::complex<Scalar>;
  const C I(0, 1);
  const auto [kx, gx, D] = detail::spectral(lin, x);
  const Scalar G2 = lin.G * lin.G;
  const C jg = I * lin.J * gx;
  ScatteringPoint<Scalar> p;
  p.x = x;
  p.t_LR = Scalar(4) * lin.kappa * (Scalar(2) * G2 * std::polar(Scalar(1), lin.theta) - jg) / D;
  p.t_RL = Scalar(4) * lin.kappa * (Scalar(2) * G2 * std::polar(Scalar(1), -lin.theta) - jg) / D;
  p.T_LR = std::abs(p.t_LR);
  p.T_RL = std::abs(p.t_RL);
  return p;
}

/// Uniform detuning grid including both endpoints.
template <typename Scalar>
std::vector<Scalar> detuning_grid(Scalar x_min, Scalar x_max, std::size_t n) {
  if (n < 2 || !(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max))
    throw Error(ErrorCode::BadGrid, "need x_min < x_max and n_points >= 2");
  std::vector<Scalar> xs(n);
  const Scalar h = (x_max - x_min) / Scalar(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    xs[i] = x_min + Scalar(i) * h;
  xs.back() = x_max;
  return xs;
}

/// Transmission spectrum on a uniform grid, detuning-ascending. Points are
/// independent and evaluated in parallel when OpenMP is enabled.
template <typename Scalar>
std::vector<ScatteringPoint<Scalar>> sweep(const LinearizedSystem<Scalar> &lin,
                                           Scalar x_min, Scalar x_max,
                                           std::size_t n_points) {
  const auto xs = detuning_grid(x_min, x_max, n_points);
  std::vector<ScatteringPoint<Scalar>> out(xs.size());
  const long n = static_cast<long>(xs.size());
  bool failed = false;
#pragma omp parallel for schedule(static) reduction(|| : failed)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = scattering_point(lin, xs[i]);
    } catch (const Error &) {
      failed = true;
    }
  }
  if (failed) {
    // Rerun serially so the first failing point raises with its detuning.
    for (const Scalar x : xs)
      (void)scattering_point(lin, x);
  }
  return out;
}

struct Fwhm {
  double width = 0;
  double left = 0;  // interpolated half-maximum crossing below the peak
  double right = 0; // interpolated half-maximum crossing above the peak
  double peak_x = 0;
  double peak = 0;
};

/// Full width at half maximum of |t| in one direction, linearly interpolated
/// between grid points around the global maximum. nullopt when either
/// half-maximum crossing lies outside the grid.
template <typename Scalar>
std::optional<Fwhm> fwhm(const std::vector<ScatteringPoint<Scalar>> &points,
                         Direction direction) {
  if (points.size() < 3)
    return std::nullopt;
  std::size_t imax = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].T(direction) > points[imax].T(direction))
      imax = i;
  const double peak = double(points[imax].T(direction));
  const double half = peak / 2;
  if (!(peak > 0))
    return std::nullopt;

  auto crossing = [&](std::size_t inside, std::size_t outside) {
    const double ti = double(points[inside].T(direction));
    const double to = double(points[outside].T(direction));
    const double xi = double(points[inside].x);
    const double xo = double(points[outside].x);
    return xi + (ti - half) / (ti - to) * (xo - xi);
  };

  std::size_t l = imax;
  while (l > 0 && double(points[l - 1].T(direction)) >= half)
    --l;
  if (l == 0)
    return std::nullopt;
  std::size_t r = imax;
  while (r + 1 < points.size() && double(points[r + 1].T(direction)) >= half)
    ++r;
  if (r + 1 == points.size())
    return std::nullopt;

  Fwhm f;
  f.left = crossing(l, l - 1);
  f.right = crossing(r, r + 1);
  f.width = f.right - f.left;
  f.peak_x = double(points[imax].x);
  f.peak = peak;
  return f;
}

using ResponseAmplitudesd = ResponseAmplitudes<double>;
using ScatteringPointd = ScatteringPoint<double>;

} // namespace nonrecip
