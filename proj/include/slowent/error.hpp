#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slowent {

enum class ErrorCode {
  // input validation (CLI exit status 1)
  ConfigParse,
  DimensionMismatch,
  NonUnimodular,
  NonCommuting,
  AlreadySuspended,
  AllZeroSpectrum,
  RankTooLarge,
  RankNotTwo,
  ZeroVector,
  GammaMismatch,
  InvalidNorm,
  SlackTooLarge,
  NotPlanarFactorizable,
  GridTooCoarse,
  InvalidArgument,
  // numerical failure (CLI exit status 2)
  EigenFailure,
  ToleranceAmbiguity,
  DegenerateArrangement,
  NoSeparatingElement,
  BudgetExhausted,
  WraparoundRisk,
  EmptyWindow,
  ZeroAcceptance,
  LinearProgramFailure,
};

std::string_view error_name(ErrorCode code) noexcept;

/// True for errors caused by numerics rather than by malformed input.
bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &detail)
      : std::runtime_error(std::string(error_name(code)) +
                           (detail.empty() ? "" : " " + detail)),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

private:
  ErrorCode code_;
};

} // namespace slowent
