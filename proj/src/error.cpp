#include "dfpower/error.hpp"

#include <charconv>

namespace dfpower {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorKind::RowSumError: return "RowSumError";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::VertexInput: return "VertexInput";
    case ErrorKind::NumericalOverflow: return "NumericalOverflow";
    case ErrorKind::NearVertex: return "NearVertex";
    case ErrorKind::StarTopology: return "StarTopology";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::InadmissibleInitial: return "InadmissibleInitial";
    case ErrorKind::ProgramMismatch: return "ProgramMismatch";
    case ErrorKind::PhaseMismatch: return "PhaseMismatch";
    case ErrorKind::ChainInconsistency: return "ChainInconsistency";
    case ErrorKind::InvalidSignal: return "InvalidSignal";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

bool is_io_error(ErrorKind kind) {
  return kind == ErrorKind::ParseError || kind == ErrorKind::IoError ||
         kind == ErrorKind::ConfigError;
}

std::string format_number(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace dfpower
