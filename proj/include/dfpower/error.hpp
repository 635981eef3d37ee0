#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dfpower {

enum class ErrorKind {
  // validation of relative interaction matrices
  DimensionTooSmall,
  NotSquare,
  NonFinite,
  NegativeEntry,
  NonzeroDiagonal,
  RowSumError,
  Reducible,
  DimensionMismatch,
  // numerical
  NoConvergence,
  VertexInput,
  NumericalOverflow,
  NearVertex,
  StarTopology,
  InvalidState,
  InadmissibleInitial,
  // trajectories and programs
  ProgramMismatch,
  PhaseMismatch,
  ChainInconsistency,
  InvalidSignal,
  // files and configuration
  ParseError,
  IoError,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// True for kinds that describe the input files or the environment rather
/// than the mathematics (CLI exit code 2 instead of 1).
bool is_io_error(ErrorKind kind);

/// Shortest round-trip form of a double, for messages.
std::string format_number(double value);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace dfpower
