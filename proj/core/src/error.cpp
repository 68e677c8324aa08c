#include "chainlab/error.hpp"

namespace chainlab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonSquareMatrix: return "NonSquareMatrix";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::RowSumViolation: return "RowSumViolation";
    case ErrorCode::DuplicateStateLabel: return "DuplicateStateLabel";
    case ErrorCode::InvalidStateLabel: return "InvalidStateLabel";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownStateReference: return "UnknownStateReference";
    case ErrorCode::InvalidProbabilityVector: return "InvalidProbabilityVector";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::MissingInitialVector: return "MissingInitialVector";
    case ErrorCode::NotErgodic: return "NotErgodic";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::NotAbsorbing: return "NotAbsorbing";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::MissingWeight: return "MissingWeight";
    case ErrorCode::StartNotTransient: return "StartNotTransient";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

ChainError::ChainError(ErrorCode code, std::string message, std::string field_path)
    : std::runtime_error(compose(code, message, field_path)),
      code_(code),
      detail_(std::move(message)),
      field_path_(std::move(field_path)) {}

ChainError ChainError::at(std::string field_path) const {
  ChainError out(code_, detail_, std::move(field_path));
  out.row = row;
  out.column = column;
  out.value = value;
  return out;
}

std::string ChainError::compose(ErrorCode code, const std::string& message,
                                const std::string& field_path) {
  std::string out = to_string(code);
  if (!field_path.empty()) {
    out += " at ";
    out += field_path;
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace chainlab
