#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lgheat {

enum class ErrorCode {
  Parse,
  VariableOutOfRange,
  NegativeExponent,
  InvalidArgument,
  NotHolomorphic,
  NotQuasiHomogeneous,
  WeightsNotUnique,
  WeightOutOfRange,
  BilinearMonomialPresent,
  GradientVanishesAwayFromOrigin,
  NonIntegerMilnor,
  MissingTamenessReport,
  BudgetTooSmall,
  ConstancyViolated,
  IllConditioned,
  NonMonotoneRefinement,
  TailDominates,
  ExponentFitUnstable,
  Unsupported,
};

inline std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::VariableOutOfRange: return "VariableOutOfRange";
    case ErrorCode::NegativeExponent: return "NegativeExponent";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotHolomorphic: return "NotHolomorphic";
    case ErrorCode::NotQuasiHomogeneous: return "NotQuasiHomogeneous";
    case ErrorCode::WeightsNotUnique: return "WeightsNotUnique";
    case ErrorCode::WeightOutOfRange: return "WeightOutOfRange";
    case ErrorCode::BilinearMonomialPresent: return "BilinearMonomialPresent";
    case ErrorCode::GradientVanishesAwayFromOrigin: return "GradientVanishesAwayFromOrigin";
    case ErrorCode::NonIntegerMilnor: return "NonIntegerMilnor";
    case ErrorCode::MissingTamenessReport: return "MissingTamenessReport";
    case ErrorCode::BudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::ConstancyViolated: return "ConstancyViolated";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NonMonotoneRefinement: return "NonMonotoneRefinement";
    case ErrorCode::TailDominates: return "TailDominates";
    case ErrorCode::ExponentFitUnstable: return "ExponentFitUnstable";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

/// Library-wide exception. The code is what callers (and the CLI exit map) switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Syntax errors carry the byte offset into the parsed text.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& what, std::size_t offset)
      : Error(code, what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace lgheat
