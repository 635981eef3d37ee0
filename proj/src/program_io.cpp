#include "dfpower/program_io.hpp"

#include "dfpower/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace dfpower {

namespace {

using nlohmann::json;

std::size_t line_of(const std::string& text, std::size_t byte) {
  const auto end = text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size()));
  return 1 + static_cast<std::size_t>(std::count(text.begin(), end, '\n'));
}

[[noreturn]] void fail(const std::string& source, const std::string& field,
                       const std::string& what) {
  throw Error(ErrorKind::ParseError, source + ": field '" + field + "': " + what);
}

const json& require(const json& obj, const char* key, const std::string& source,
                    const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) fail(source, path + "/" + key, "missing");
  return obj.at(key);
}

Index one_based(const json& v, const std::string& source, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    fail(source, field, "expected a 1-based matrix index");
  }
  return static_cast<Index>(v.get<long long>() - 1);
}

std::vector<Index> index_list(const json& v, const std::string& source,
                              const std::string& field) {
  if (!v.is_array() || v.empty()) fail(source, field, "expected a non-empty index list");
  std::vector<Index> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(one_based(v[k], source, field + "/" + std::to_string(k)));
  }
  return out;
}

SwitchingSignal parse_signal(const json& sig, const std::string& source) {
  if (!sig.is_object()) fail(source, "/signal", "expected an object");
  const json& type = require(sig, "type", source, "/signal");
  if (!type.is_string()) fail(source, "/signal/type", "expected a string");
  const auto name = type.get<std::string>();
  if (name == "constant") {
    return ConstantSignal{one_based(require(sig, "index", source, "/signal"), source,
                                    "/signal/index")};
  }
  if (name == "periodic") {
    return PeriodicSignal{
        index_list(require(sig, "order", source, "/signal"), source, "/signal/order")};
  }
  if (name == "scripted") {
    return ScriptedSignal{index_list(require(sig, "sequence", source, "/signal"), source,
                                     "/signal/sequence")};
  }
  if (name == "random") {
    const json& seed = require(sig, "seed", source, "/signal");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
      fail(source, "/signal/seed", "expected a non-negative 64-bit integer");
    }
    return RandomSignal{seed.get<std::uint64_t>()};
  }
  fail(source, "/signal/type", "unknown signal type '" + name + "'");
}

json signal_to_json(const SwitchingSignal& signal) {
  auto list = [](const std::vector<Index>& v) {
    json a = json::array();
    for (Index p : v) a.push_back(p + 1);
    return a;
  };
  return std::visit(
      [&](const auto& sig) -> json {
        using T = std::decay_t<decltype(sig)>;
        if constexpr (std::is_same_v<T, ConstantSignal>) {
          return {{"type", "constant"}, {"index", sig.index + 1}};
        } else if constexpr (std::is_same_v<T, PeriodicSignal>) {
          return {{"type", "periodic"}, {"order", list(sig.order)}};
        } else if constexpr (std::is_same_v<T, ScriptedSignal>) {
          return {{"type", "scripted"}, {"sequence", list(sig.sequence)}};
        } else {
          return {{"type", "random"}, {"seed", sig.seed}};
        }
      },
      signal);
}

}  // namespace

std::string format_decimal(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

TopologyProgram parse_program(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError,
                source + ": line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) fail(source, "/", "expected an object");

  const json& n_field = require(doc, "n", source, "");
  if (!n_field.is_number_integer() || n_field.get<long long>() < 1) {
    fail(source, "/n", "expected a positive integer");
  }
  const auto n = static_cast<Index>(n_field.get<long long>());

  const json& list = require(doc, "matrices", source, "");
  if (!list.is_array() || list.empty()) fail(source, "/matrices", "expected a non-empty list");

  std::vector<InteractionMatrix> matrices;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string base = "/matrices/" + std::to_string(k);
    const json& rows = list[k];
    if (!rows.is_array() || static_cast<Index>(rows.size()) != n) {
      fail(source, base, "expected " + std::to_string(n) + " rows");
    }
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) {
      const json& row = rows[static_cast<std::size_t>(i)];
      const std::string row_path = base + "/" + std::to_string(i);
      if (!row.is_array() || static_cast<Index>(row.size()) != n) {
        fail(source, row_path, "expected " + std::to_string(n) + " entries");
      }
      for (Index j = 0; j < n; ++j) {
        const json& v = row[static_cast<std::size_t>(j)];
        if (!v.is_number()) fail(source, row_path + "/" + std::to_string(j), "expected a number");
        m(i, j) = v.get<double>();
      }
    }
    try {
      matrices.push_back(InteractionMatrix::validate(m));
    } catch (const Error& e) {
      throw Error(e.kind(), source + ": matrix " + std::to_string(k + 1) + ": " + e.detail());
    }
  }

  SwitchingSignal signal = ConstantSignal{0};
  if (doc.contains("signal")) signal = parse_signal(doc.at("signal"), source);
  try {
    return TopologyProgram(std::move(matrices), std::move(signal));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidSignal) fail(source, "/signal", e.detail());
    throw;
  }
}

std::string format_program(const TopologyProgram& program) {
  // Written by hand so each matrix row sits on one line with 17-digit
  // decimals; the signal object is small enough for the json serializer.
  std::ostringstream out;
  const Index n = program.dimension();
  out << "{\n  \"n\": " << n << ",\n  \"matrices\": [\n";
  for (Index p = 0; p < program.size(); ++p) {
    const Matrix& m = program.matrix(p).entries();
    out << "    [\n";
    for (Index i = 0; i < n; ++i) {
      out << "      [";
      for (Index j = 0; j < n; ++j) {
        out << (j ? ", " : "") << format_decimal(m(i, j));
      }
      out << "]" << (i + 1 < n ? "," : "") << "\n";
    }
    out << "    ]" << (p + 1 < program.size() ? "," : "") << "\n";
  }
  out << "  ],\n  \"signal\": " << signal_to_json(program.signal()).dump() << "\n}\n";
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

TopologyProgram load_program(const std::filesystem::path& path) {
  return parse_program(read_text_file(path), path.string());
}

void save_program(const TopologyProgram& program, const std::filesystem::path& path) {
  write_text_file(path, format_program(program));
}

}  // namespace dfpower
