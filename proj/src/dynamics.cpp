#include "dfpower/dynamics.hpp"

#include "dfpower/error.hpp"
#include "dfpower/program_io.hpp"

#include <cmath>
#include <sstream>

namespace dfpower {

PowerVector PowerVector::from_values(Vector x) {
  for (Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x(i)) || x(i) < 0.0 || x(i) > 1.0) {
      throw Error(ErrorKind::InvalidState,
                  "x_" + std::to_string(i + 1) + " = " + std::to_string(x(i)) +
                      " is outside [0, 1]");
    }
  }
  return PowerVector(std::move(x), std::nullopt);
}

PowerVector PowerVector::vertex(Index n, Index i) {
  if (i < 0 || i >= n) {
    throw Error(ErrorKind::InvalidState, "vertex index " + std::to_string(i + 1) +
                                             " outside 1.." + std::to_string(n));
  }
  return PowerVector(Vector::Unit(n, i), i);
}

InitialCondition InitialCondition::values(Vector x0) {
  bool any_positive = false;
  for (Index i = 0; i < x0.size(); ++i) {
    if (!std::isfinite(x0(i)) || x0(i) < 0.0 || x0(i) >= 1.0) {
      throw Error(ErrorKind::InadmissibleInitial,
                  "need 0 <= x_i(0) < 1, got x_" + std::to_string(i + 1) + " = " +
                      std::to_string(x0(i)));
    }
    any_positive = any_positive || x0(i) > 0.0;
  }
  if (!any_positive) {
    throw Error(ErrorKind::InadmissibleInitial, "need some x_j(0) > 0");
  }
  return InitialCondition(PowerVector::from_values(std::move(x0)));
}

InitialCondition InitialCondition::vertex(Index n, Index i) {
  return InitialCondition(PowerVector::vertex(n, i));
}

double alpha(const PowerVector& x, const Vector& gamma) {
  if (x.is_vertex()) {
    throw Error(ErrorKind::VertexInput, "alpha is undefined at a vertex");
  }
  return 1.0 / (gamma.array() / (1.0 - x.values().array())).sum();
}

PowerVector df_map(const PowerVector& x, const Vector& gamma, const Tolerances& tol) {
  if (x.size() != gamma.size()) {
    throw Error(ErrorKind::DimensionMismatch, "state and gamma differ in length");
  }
  if (x.is_vertex()) return x;
  const Vector& v = x.values();
  for (Index i = 0; i < v.size(); ++i) {
    if (1.0 - v(i) < tol.vertex_guard) {
      throw Error(ErrorKind::NumericalOverflow,
                  "1 - x_" + std::to_string(i + 1) + " < " + format_number(tol.vertex_guard) +
                      " on an untagged state");
    }
  }
  const Vector weights = (gamma.array() / (1.0 - v.array())).matrix();
  return PowerVector::from_values(weights / weights.sum());
}

DynamicStep df_step_dynamic(const PowerVector& x, const TopologyProgram& program, Index s,
                            const Tolerances& tol) {
  const Index p = program.index_at(s);
  return {df_map(x, program.gammas()[p], tol), p};
}

Trajectory simulate(const TopologyProgram& program, const InitialCondition& init, Index issues,
                    const Tolerances& tol) {
  if (issues < 1) throw Error(ErrorKind::ConfigError, "issue count must be >= 1");
  if (init.state().size() != program.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "initial condition has length " +
                                                  std::to_string(init.state().size()) +
                                                  ", program has n = " +
                                                  std::to_string(program.dimension()));
  }
  Trajectory traj;
  traj.gammas = program.gammas();
  traj.signal_log = program.realize(issues + 1);
  traj.states.reserve(static_cast<std::size_t>(issues + 1));
  traj.states.push_back(init.state());
  for (Index s = 0; s < issues; ++s) {
    try {
      traj.states.push_back(df_map(traj.states.back(), traj.applied_gamma(s), tol));
    } catch (const Error& e) {
      throw Error(e.kind(), "issue " + std::to_string(s) + ": " + e.detail());
    }
  }
  return traj;
}

std::vector<double> limit_gap(const Trajectory& a, const Trajectory& b) {
  if (a.signal_log != b.signal_log || a.states.size() != b.states.size()) {
    throw Error(ErrorKind::ProgramMismatch,
                "trajectories were produced under different signal realizations");
  }
  std::vector<double> gap;
  gap.reserve(a.states.size());
  for (std::size_t s = 0; s < a.states.size(); ++s) {
    gap.push_back((a.states[s].values() - b.states[s].values()).lpNorm<1>());
  }
  return gap;
}

double replay_residual(const Trajectory& traj, const Tolerances& tol) {
  double worst = 0.0;
  for (Index s = 0; s < traj.issues(); ++s) {
    const PowerVector next = df_map(traj.states[s], traj.applied_gamma(s), tol);
    worst = std::max(worst, (next.values() - traj.states[s + 1].values()).lpNorm<1>());
  }
  return worst;
}

std::string format_trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  const Index n = traj.states.front().size();
  out << "s,p";
  for (Index i = 0; i < n; ++i) out << ",x_" << i + 1;
  out << "\n";
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    out << s << "," << traj.signal_log[s] + 1;
    const Vector& x = traj.states[s].values();
    for (Index i = 0; i < n; ++i) out << "," << format_decimal(x(i));
    out << "\n";
  }
  return out.str();
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  write_text_file(path, format_trajectory_csv(traj));
}

TrajectoryTable parse_trajectory_csv(const std::string& text, const std::string& source) {
  auto schema_error = [&](std::size_t line, const std::string& what) -> Error {
    return Error(ErrorKind::ParseError, source + ": line " + std::to_string(line) + ": " + what);
  };
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };

  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw schema_error(1, "empty file, expected header");
  const auto header = split(line);
  if (header.size() < 3 || header[0] != "s" || header[1] != "p") {
    throw schema_error(1, "header must start with s,p,x_1");
  }
  const auto n = static_cast<Index>(header.size() - 2);
  for (Index i = 0; i < n; ++i) {
    if (header[static_cast<std::size_t>(i + 2)] != "x_" + std::to_string(i + 1)) {
      throw schema_error(1, "unexpected column '" + header[static_cast<std::size_t>(i + 2)] + "'");
    }
  }

  TrajectoryTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (static_cast<Index>(cells.size()) != n + 2) {
      throw schema_error(line_no, "expected " + std::to_string(n + 2) + " columns");
    }
    try {
      std::size_t used = 0;
      table.s.push_back(std::stol(cells[0], &used));
      table.p.push_back(std::stol(cells[1], &used));
      Vector x(n);
      for (Index i = 0; i < n; ++i) x(i) = std::stod(cells[static_cast<std::size_t>(i + 2)]);
      table.x.push_back(std::move(x));
    } catch (const std::exception&) {
      throw schema_error(line_no, "non-numeric cell");
    }
  }
  if (table.x.empty()) throw schema_error(line_no, "no data rows");
  return table;
}

TrajectoryTable read_trajectory_csv(const std::filesystem::path& path) {
  return parse_trajectory_csv(read_text_file(path), path.string());
}

}  // namespace dfpower
