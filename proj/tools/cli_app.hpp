#pragma once

#include "dfpower/common.hpp"
#include "dfpower/dynamics.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dfpower::cli {

/// Environment variable naming the default output directory. Precedence:
/// --out flag, then the config's output_dir, then this variable, then the
/// current directory.
inline constexpr const char* kOutDirEnv = "DFPOWER_OUT_DIR";

enum ExitCode : int { kOk = 0, kDomainFailure = 1, kIoFailure = 2 };

/// Either explicit values or a 1-based vertex tag; turned into an
/// InitialCondition once the program dimension is known.
struct NamedInitial {
  std::string name;
  std::optional<Vector> values;
  std::optional<Index> vertex;

  InitialCondition resolve(Index n) const;
};

struct ExperimentConfig {
  std::filesystem::path source;
  std::filesystem::path program_path;
  std::vector<NamedInitial> initial_conditions;
  Index issues = 200;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
  bool plot = false;
  std::vector<Index> compare_individuals;
  Index bound_check_from = 20;
  double gap_threshold = 1e-6;
  Index burn_in = 30;
  double limit_tol = 1e-8;
  double fixed_point_tol = 1e-13;
  Tolerances tolerances;
};

/// Paths inside the config are resolved against the config's directory.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Runs one CLI invocation; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dfpower::cli
