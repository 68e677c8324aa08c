#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace chainlab {

enum class ErrorCode {
  NonSquareMatrix,
  NegativeEntry,
  NonFiniteEntry,
  RowSumViolation,
  DuplicateStateLabel,
  InvalidStateLabel,
  DimensionMismatch,
  UnknownStateReference,
  InvalidProbabilityVector,
  NegativeWeight,
  MissingInitialVector,
  NotErgodic,
  NotRegular,
  NotAbsorbing,
  SingularSystem,
  SingularMatrix,
  NoConvergence,
  DimensionTooLarge,
  MissingWeight,
  StartNotTransient,
  InvalidConfig,
  NumericalFailure,
  ParseError,
};

const char* to_string(ErrorCode code) noexcept;

/// Error raised by every chainlab operation.
///
/// `field_path` is filled in by the model loader so diagnostics name the
/// offending location in the input document (e.g. `transitions[1]`).
class ChainError : public std::runtime_error {
 public:
  ChainError(ErrorCode code, std::string message, std::string field_path = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& field_path() const noexcept { return field_path_; }
  const std::string& detail() const noexcept { return detail_; }

  /// Same error relocated to `field_path`, keeping row/column/value.
  ChainError at(std::string field_path) const;

  std::optional<std::size_t> row;
  std::optional<std::size_t> column;
  std::optional<double> value;

 private:
  static std::string compose(ErrorCode code, const std::string& message,
                             const std::string& field_path);

  ErrorCode code_;
  std::string detail_;
  std::string field_path_;
};

}  // namespace chainlab
