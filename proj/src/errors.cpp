#include "ssmod/errors.hpp"

namespace ssmod {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPrime: return "NonPrime";
    case ErrorCode::UnsupportedPrime: return "UnsupportedPrime";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SymmetryViolation: return "SymmetryViolation";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::KroneckerViolation: return "KroneckerViolation";
    case ErrorCode::EllEqualsP: return "EllEqualsP";
    case ErrorCode::NonSupersingularRoot: return "NonSupersingularRoot";
    case ErrorCode::HeckeInvariantViolation: return "HeckeInvariantViolation";
    case ErrorCode::ExtensionConstructionFailure: return "ExtensionConstructionFailure";
    case ErrorCode::SingularCurve: return "SingularCurve";
    case ErrorCode::NonPrimeConductor: return "NonPrimeConductor";
    case ErrorCode::NonMinimalModel: return "NonMinimalModel";
    case ErrorCode::AdditiveReduction: return "AdditiveReduction";
    case ErrorCode::BadReductionPrime: return "BadReductionPrime";
    case ErrorCode::Inconclusive: return "Inconclusive";
    case ErrorCode::WrongResidueClass: return "WrongResidueClass";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::GenusZero: return "GenusZero";
    case ErrorCode::EigenspaceNotRankOne: return "EigenspaceNotRankOne";
    case ErrorCode::EigenvalueMismatch: return "EigenvalueMismatch";
    case ErrorCode::NonDivisibleNorm: return "NonDivisibleNorm";
    case ErrorCode::NoWeightTwoVertex: return "NoWeightTwoVertex";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::CacheCorrupt: return "CacheCorrupt";
    case ErrorCode::IOError: return "IOError";
  }
  return "Unknown";
}

}  // namespace ssmod
