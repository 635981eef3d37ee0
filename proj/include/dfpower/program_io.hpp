#pragma once

#include "dfpower/topology.hpp"

#include <filesystem>
#include <string>

namespace dfpower {

/// Program files are JSON documents:
///
///   {
///     "n": 3,
///     "matrices": [ [[0, 0.5, 0.5], [1, 0, 0], [1, 0, 0]] ],
///     "signal": { "type": "random", "seed": 7 }
///   }
///
/// `signal.type` is one of `constant` (`index`), `periodic` (`order`),
/// `scripted` (`sequence`) or `random` (`seed`); all matrix indices are
/// 1-based. A missing `signal` means constant topology on matrix 1.
/// Malformed documents raise ParseError; well-formed documents whose matrices
/// break the interaction-matrix invariants raise the validation error kind.
TopologyProgram parse_program(const std::string& text,
                              const std::string& source = "<string>");
std::string format_program(const TopologyProgram& program);

TopologyProgram load_program(const std::filesystem::path& path);
void save_program(const TopologyProgram& program, const std::filesystem::path& path);

/// Shortest form is not used: always 17 significant digits, which
/// round-trips every double exactly.
std::string format_decimal(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dfpower
