#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssmod {

enum class ErrorCode {
  NonPrime,
  UnsupportedPrime,
  ZeroPolynomial,
  DivisionByZero,
  ParseError,
  SymmetryViolation,
  DegreeMismatch,
  KroneckerViolation,
  EllEqualsP,
  NonSupersingularRoot,
  HeckeInvariantViolation,
  ExtensionConstructionFailure,
  SingularCurve,
  NonPrimeConductor,
  NonMinimalModel,
  AdditiveReduction,
  BadReductionPrime,
  Inconclusive,
  WrongResidueClass,
  DimensionMismatch,
  GenusZero,
  EigenspaceNotRankOne,
  EigenvalueMismatch,
  NonDivisibleNorm,
  NoWeightTwoVertex,
  NotApplicable,
  CacheCorrupt,
  IOError,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; `code()` is the
// machine-readable kind and what() carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ssmod
