#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nonrecip {

enum class ErrorCode {
  NonPositiveRate,
  NegativeCoupling,
  AsymmetricSystem,
  ZeroCoupling,
  NoConvergence,
  ZeroG0,
  SingularDenominator,
  BadGrid,
  ThetaDegenerate,
  InvalidBranch,
  SingularMatrix,
  StepTooLarge,
  WindowTooShort,
  InvalidArgument,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::NonPositiveRate: return "NonPositiveRate";
  case ErrorCode::NegativeCoupling: return "NegativeCoupling";
  case ErrorCode::AsymmetricSystem: return "AsymmetricSystem";
  case ErrorCode::ZeroCoupling: return "ZeroCoupling";
  case ErrorCode::NoConvergence: return "NoConvergence";
  case ErrorCode::ZeroG0: return "ZeroG0";
  case ErrorCode::SingularDenominator: return "SingularDenominator";
  case ErrorCode::BadGrid: return "BadGrid";
  case ErrorCode::ThetaDegenerate: return "ThetaDegenerate";
  case ErrorCode::InvalidBranch: return "InvalidBranch";
  case ErrorCode::SingularMatrix: return "SingularMatrix";
  case ErrorCode::StepTooLarge: return "StepTooLarge";
  case ErrorCode::WindowTooShort: return "WindowTooShort";
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Thrown by every library operation that can fail. The code identifies the
/// failure class; what() carries the detail.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// NoConvergence carries the last fixed-point residual.
class NoConvergenceError : public Error {
public:
  NoConvergenceError(double residual, int iterations)
      : Error(ErrorCode::NoConvergence,
              "fixed point did not converge after " +
                  std::to_string(iterations) + " iterations, last step " +
                  std::to_string(residual)),
        residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

private:
  double residual_;
  int iterations_;
};

} // namespace nonrecip
