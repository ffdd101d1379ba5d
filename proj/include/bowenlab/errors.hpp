#ifndef BOWENLAB_ERRORS_HPP
#define BOWENLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bowenlab {

enum class ErrorCode {
  UnknownVertex,
  DuplicateEdgeId,
  OutOfRangeEpsilon,
  ExponentUnstable,
  AbscissaUndetermined,
  TailBoundExceeded,
  SeriesDivergent,
  PowerIterationStalled,
  DegenerateLeadingEigenvalue,
  NonNegativeDerivative,
  SingularShift,
  ZeroMassNormalization,
  BracketNotFound,
  PressureInfinite,
  AdmissibilityViolated,
  DenominatorNearZero,
  GridTooCoarse,
  ResidualUnderflow,
  NoRoot,
  NotStronglyRegular,
  SchemaViolation,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::DuplicateEdgeId: return "DuplicateEdgeId";
    case ErrorCode::OutOfRangeEpsilon: return "OutOfRangeEpsilon";
    case ErrorCode::ExponentUnstable: return "ExponentUnstable";
    case ErrorCode::AbscissaUndetermined: return "AbscissaUndetermined";
    case ErrorCode::TailBoundExceeded: return "TailBoundExceeded";
    case ErrorCode::SeriesDivergent: return "SeriesDivergent";
    case ErrorCode::PowerIterationStalled: return "PowerIterationStalled";
    case ErrorCode::DegenerateLeadingEigenvalue: return "DegenerateLeadingEigenvalue";
    case ErrorCode::NonNegativeDerivative: return "NonNegativeDerivative";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::ZeroMassNormalization: return "ZeroMassNormalization";
    case ErrorCode::BracketNotFound: return "BracketNotFound";
    case ErrorCode::PressureInfinite: return "PressureInfinite";
    case ErrorCode::AdmissibilityViolated: return "AdmissibilityViolated";
    case ErrorCode::DenominatorNearZero: return "DenominatorNearZero";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::ResidualUnderflow: return "ResidualUnderflow";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::NotStronglyRegular: return "NotStronglyRegular";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bowenlab

#endif
