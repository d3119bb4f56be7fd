#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

#include "nonrecip/error.hpp"
#include "nonrecip/model.hpp"
#include "nonrecip/response.hpp"

namespace nonrecip {

/// Which closed-form family a perfect-nonreciprocity point belongs to.
enum class ConditionBranch {
  ThetaHalfPi,  // theta = -+pi/2, any gamma
  EqualDamping, // kappa = gamma, any theta != 0, pi
};

inline const char *to_string(ConditionBranch b) {
  return b == ConditionBranch::ThetaHalfPi ? "ThetaHalfPi" : "EqualDamping";
}

/// Sign choice in the two-valued coupling condition; Upper takes the top
/// signs of both the exponent and the parenthesis.
enum class SignBranch { Upper, Lower };

template <typename Scalar> struct ConditionSet {
  Scalar x_star = 0;
  Scalar J_star = 0;
  Scalar G_star = 0;
  Direction direction = Direction::L_to_R;
  ConditionBranch branch = ConditionBranch::ThetaHalfPi;

  /// Reduced model sitting exactly on the condition.
  LinearizedSystem<Scalar> system(Scalar kappa, Scalar gamma, Scalar theta) const {
    return make_linearized(G_star, theta, J_star, kappa, gamma);
  }
};

inline constexpr double kThetaMatchTol = 1e-12;
inline constexpr double kDampingMatchRelTol = 1e-9;

namespace detail {

template <typename Scalar> bool near_angle(Scalar theta, Scalar target) {
  return std::abs(wrap_angle(theta - target)) <= Scalar(kThetaMatchTol);
}

template <typename Scalar> bool theta_degenerate(Scalar theta) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  return near_angle(theta, Scalar(0)) || near_angle(theta, pi);
}

} // namespace detail

/// Tunnelling rate J that the L->R isolation condition demands:
///   J = -e^{-+i theta} (gamma cot(theta) +- i kappa) / 2.
/// Physically admissible only when the result is real and positive.
template <typename Scalar>
std::complex<Scalar> required_coupling_J(Scalar kappa, Scalar gamma, Scalar theta,
                                         SignBranch sign) {
  using C = std::complex<Scalar>;
  if (detail::theta_degenerate(theta))
    throw Error(ErrorCode::ThetaDegenerate, "cot(theta) undefined at theta = 0 mod pi");
  const Scalar s = sign == SignBranch::Upper ? Scalar(1) : Scalar(-1);
  const Scalar cot = std::cos(theta) / std::sin(theta);
  return -std::polar(Scalar(1), -s * theta) * C(gamma * cot, s * kappa) / Scalar(2);
}

/// Direction of the open channel for a given branch. Throws InvalidBranch
/// when theta does not belong to the branch.
template <typename Scalar>
Direction isolation_direction(Scalar theta, ConditionBranch branch) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar th = wrap_angle(theta);
  switch (branch) {
  case ConditionBranch::ThetaHalfPi:
    if (detail::near_angle(th, -pi / 2))
      return Direction::L_to_R;
    if (detail::near_angle(th, pi / 2))
      return Direction::R_to_L;
    break;
  case ConditionBranch::EqualDamping:
    if (!detail::theta_degenerate(th))
      return th > 0 ? Direction::R_to_L : Direction::L_to_R;
    break;
  }
  throw Error(ErrorCode::InvalidBranch, "theta does not lie on the requested branch");
}

/// Exact perfect-nonreciprocity point for (kappa, gamma, theta), or nullopt
/// when neither closed-form family applies. The theta = +-pi/2 family wins
/// when both apply (the formulas coincide there).
template <typename Scalar>
std::optional<ConditionSet<Scalar>> perfect_conditions(Scalar kappa, Scalar gamma,
                                                       Scalar theta) {
  if (!(kappa > 0) || !(gamma > 0))
    throw Error(ErrorCode::NonPositiveRate, "kappa and gamma must be > 0");
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar th = wrap_angle(theta);

  if (detail::near_angle(th, -pi / 2) || detail::near_angle(th, pi / 2)) {
    ConditionSet<Scalar> c;
    c.x_star = 0;
    c.J_star = kappa / 2;
    c.G_star = std::sqrt(kappa * gamma) / 2;
    c.branch = ConditionBranch::ThetaHalfPi;
    c.direction = isolation_direction(th, c.branch);
    return c;
  }
  if (std::abs(kappa - gamma) <= Scalar(kDampingMatchRelTol) * kappa &&
      !detail::theta_degenerate(th)) {
    // s = +1 on (0, pi), -1 on (-pi, 0) keeps J and G positive.
    const Scalar s = th > 0 ? Scalar(1) : Scalar(-1);
    ConditionSet<Scalar> c;
    c.x_star = s * gamma * std::cos(th) / std::sin(th) / 2;
    c.J_star = s * gamma / std::sin(th) / 2;
    c.G_star = c.J_star;
    c.branch = ConditionBranch::EqualDamping;
    c.direction = isolation_direction(th, c.branch);
    return c;
  }
  return std::nullopt;
}

/// Outcome of the brute-force search around an analytic condition.
struct GridVerification {
  double J = 0, G = 0, x = 0; // grid minimiser
  double objective = 0;       // blocked T + (1 - passed T) at the minimiser
  double step_J = 0, step_G = 0, step_x = 0;
  double dist_J = 0, dist_G = 0, dist_x = 0; // |minimiser - analytic|
  bool within_one_step = false;
};

/// Searches J in [0.2 J*, 2 J*], G in [0.2 G*, 2 G*] and
/// x in [x* - 2 kappa, x* + 2 kappa] on a points^3 grid for the minimum of
/// (blocked-direction T) + (1 - open-direction T). Independent of the
/// closed-form condition: only the transmission formula is used.
inline GridVerification verify_condition_by_grid(double kappa, double gamma,
                                                 double theta,
                                                 const ConditionSet<double> &cond,
                                                 int points = 41) {
  if (points < 2)
    throw Error(ErrorCode::BadGrid, "grid verifier needs at least 2 points per axis");
  const auto Js = detuning_grid(0.2 * cond.J_star, 2.0 * cond.J_star, std::size_t(points));
  const auto Gs = detuning_grid(0.2 * cond.G_star, 2.0 * cond.G_star, std::size_t(points));
  const auto xs = detuning_grid(cond.x_star - 2 * kappa, cond.x_star + 2 * kappa,
                                std::size_t(points));
  const Direction open = cond.direction;
  const Direction blocked =
      open == Direction::L_to_R ? Direction::R_to_L : Direction::L_to_R;

  const long n = points;
  std::vector<double> best_obj(std::size_t(n), 2.0);
  std::vector<std::array<long, 3>> best_idx(std::size_t(n), {0, 0, 0});
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      const LinearizedSystem<double> lin{Gs[j], wrap_angle(theta), Js[i], kappa, gamma};
      for (long k = 0; k < n; ++k) {
        const auto p = scattering_point(lin, xs[k]);
        const double obj = p.T(blocked) + (1.0 - p.T(open));
        if (obj < best_obj[i]) {
          best_obj[i] = obj;
          best_idx[i] = {i, j, k};
        }
      }
    }
  }
  long bi = 0;
  for (long i = 1; i < n; ++i)
    if (best_obj[i] < best_obj[bi])
      bi = i;

  GridVerification r;
  const auto [i, j, k] = best_idx[bi];
  r.J = Js[i];
  r.G = Gs[j];
  r.x = xs[k];
  r.objective = best_obj[bi];
  r.step_J = Js[1] - Js[0];
  r.step_G = Gs[1] - Gs[0];
  r.step_x = xs[1] - xs[0];
  r.dist_J = std::abs(r.J - cond.J_star);
  r.dist_G = std::abs(r.G - cond.G_star);
  r.dist_x = std::abs(r.x - cond.x_star);
  r.within_one_step = r.dist_J <= r.step_J && r.dist_G <= r.step_G && r.dist_x <= r.step_x;
  return r;
}

using ConditionSetd = ConditionSet<double>;

} // namespace nonrecip
