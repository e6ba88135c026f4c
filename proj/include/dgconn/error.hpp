#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dgc {

enum class ErrorCode {
  NotPure,
  NonPseudomanifold,
  BadLink,
  MixedDimension,
  UnknownName,
  NotASimplex,
  WrongDimension,
  Disconnected,
  NotAPath,
  EdgeNotInComplex,
  SimplexNotInComplex,
  MissingCoefficient,
  ZeroCoefficient,
  MissingGaugeValue,
  DegenerateSolutions,
  DifferentComplex,
  MixedField,
  NoPath,
  InvalidFraming,
  MissingHomologyData,
  UnpairedInteriorEdge,
  BranchViolation,
  NonIntegerTotal,
  InconsistentMu,
  Degenerate,
  BadLabeling,
  NotClosed,
  NotWordBuilt,
  Unsolvable,
  InconsistentInvariants,
  BranchObstruction,
  CocycleNotExact,
  NotLocallyFlat,
  NotOrientable,
  ParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPure: return "NotPure";
    case ErrorCode::NonPseudomanifold: return "NonPseudomanifold";
    case ErrorCode::BadLink: return "BadLink";
    case ErrorCode::MixedDimension: return "MixedDimension";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::NotASimplex: return "NotASimplex";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NotAPath: return "NotAPath";
    case ErrorCode::EdgeNotInComplex: return "EdgeNotInComplex";
    case ErrorCode::SimplexNotInComplex: return "SimplexNotInComplex";
    case ErrorCode::MissingCoefficient: return "MissingCoefficient";
    case ErrorCode::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorCode::MissingGaugeValue: return "MissingGaugeValue";
    case ErrorCode::DegenerateSolutions: return "DegenerateSolutions";
    case ErrorCode::DifferentComplex: return "DifferentComplex";
    case ErrorCode::MixedField: return "MixedField";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::InvalidFraming: return "InvalidFraming";
    case ErrorCode::MissingHomologyData: return "MissingHomologyData";
    case ErrorCode::UnpairedInteriorEdge: return "UnpairedInteriorEdge";
    case ErrorCode::BranchViolation: return "BranchViolation";
    case ErrorCode::NonIntegerTotal: return "NonIntegerTotal";
    case ErrorCode::InconsistentMu: return "InconsistentMu";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::BadLabeling: return "BadLabeling";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NotWordBuilt: return "NotWordBuilt";
    case ErrorCode::Unsolvable: return "Unsolvable";
    case ErrorCode::InconsistentInvariants: return "InconsistentInvariants";
    case ErrorCode::BranchObstruction: return "BranchObstruction";
    case ErrorCode::CocycleNotExact: return "CocycleNotExact";
    case ErrorCode::NotLocallyFlat: return "NotLocallyFlat";
    case ErrorCode::NotOrientable: return "NotOrientable";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace dgc
