#include "slowent/error.hpp"

namespace slowent {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::ConfigParse: return "ConfigParse";
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::NonUnimodular: return "NonUnimodular";
  case ErrorCode::NonCommuting: return "NonCommuting";
  case ErrorCode::AlreadySuspended: return "AlreadySuspended";
  case ErrorCode::AllZeroSpectrum: return "AllZeroSpectrum";
  case ErrorCode::RankTooLarge: return "RankTooLarge";
  case ErrorCode::RankNotTwo: return "RankNotTwo";
  case ErrorCode::ZeroVector: return "ZeroVector";
  case ErrorCode::GammaMismatch: return "GammaMismatch";
  case ErrorCode::InvalidNorm: return "InvalidNorm";
  case ErrorCode::SlackTooLarge: return "SlackTooLarge";
  case ErrorCode::NotPlanarFactorizable: return "NotPlanarFactorizable";
  case ErrorCode::GridTooCoarse: return "GridTooCoarse";
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::EigenFailure: return "EigenFailure";
  case ErrorCode::ToleranceAmbiguity: return "ToleranceAmbiguity";
  case ErrorCode::DegenerateArrangement: return "DegenerateArrangement";
  case ErrorCode::NoSeparatingElement: return "NoSeparatingElement";
  case ErrorCode::BudgetExhausted: return "BudgetExhausted";
  case ErrorCode::WraparoundRisk: return "WraparoundRisk";
  case ErrorCode::EmptyWindow: return "EmptyWindow";
  case ErrorCode::ZeroAcceptance: return "ZeroAcceptance";
  case ErrorCode::LinearProgramFailure: return "LinearProgramFailure";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::EigenFailure:
  case ErrorCode::ToleranceAmbiguity:
  case ErrorCode::DegenerateArrangement:
  case ErrorCode::NoSeparatingElement:
  case ErrorCode::BudgetExhausted:
  case ErrorCode::WraparoundRisk:
  case ErrorCode::EmptyWindow:
  case ErrorCode::ZeroAcceptance:
  case ErrorCode::LinearProgramFailure:
    return true;
  default:
    return false;
  }
}

} // namespace slowent
