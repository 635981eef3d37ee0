#pragma once

#include "dfpower/topology.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dfpower {

/// Individual social powers x(s). Either an untagged vector with entries in
/// [0, 1], or an explicitly tagged simplex vertex e_i.
class PowerVector {
 public:
  static PowerVector from_values(Vector x);
  static PowerVector vertex(Index n, Index i);

  bool is_vertex() const { return vertex_.has_value(); }
  std::optional<Index> vertex_index() const { return vertex_; }
  const Vector& values() const { return x_; }
  Index size() const { return x_.size(); }
  double operator[](Index i) const { return x_(i); }

 private:
  PowerVector(Vector x, std::optional<Index> v) : x_(std::move(x)), vertex_(v) {}
  Vector x_;
  std::optional<Index> vertex_;
};

/// Admissible starting point: 0 <= x_i < 1 for all i with some x_j > 0, or a
/// tagged vertex.
class InitialCondition {
 public:
  static InitialCondition values(Vector x0);
  static InitialCondition vertex(Index n, Index i);

  const PowerVector& state() const { return state_; }

 private:
  explicit InitialCondition(PowerVector s) : state_(std::move(s)) {}
  PowerVector state_;
};

/// alpha(x) = 1 / sum_i gamma_i / (1 - x_i). Throws VertexInput for tagged
/// vertices.
double alpha(const PowerVector& x, const Vector& gamma);

/// One issue of the reduced DeGroot-Friedkin map with dominant left
/// eigenvector `gamma`. Vertices map to themselves; untagged states need
/// 1 - x_i >= tol.vertex_guard (NumericalOverflow otherwise).
PowerVector df_map(const PowerVector& x, const Vector& gamma,
                   const Tolerances& tol = default_tolerances());

struct DynamicStep {
  PowerVector next;
  Index topology;  // sigma(s), 0-based
};

DynamicStep df_step_dynamic(const PowerVector& x, const TopologyProgram& program, Index s,
                            const Tolerances& tol = default_tolerances());

struct Trajectory {
  std::vector<PowerVector> states;  // x(0), ..., x(S)
  /// sigma(0), ..., sigma(S), 0-based. The last entry is the topology the
  /// next issue would use; it has not been applied.
  std::vector<Index> signal_log;
  std::vector<Vector> gammas;  // gamma of every matrix in the program

  Index issues() const { return static_cast<Index>(states.size()) - 1; }
  const Vector& applied_gamma(Index s) const { return gammas.at(signal_log.at(s)); }
};

Trajectory simulate(const TopologyProgram& program, const InitialCondition& init, Index issues,
                    const Tolerances& tol = default_tolerances());

/// ||x_A(s) - x_B(s)||_1 for every issue. Both runs must share a signal log.
std::vector<double> limit_gap(const Trajectory& a, const Trajectory& b);

/// Largest ||states[s+1] - F_{sigma(s)}(states[s])||_1, recomputed from the
/// log.
double replay_residual(const Trajectory& traj, const Tolerances& tol = default_tolerances());

/// CSV with header `s,p,x_1,...,x_n`; p is 1-based, decimals 17 digits.
std::string format_trajectory_csv(const Trajectory& traj);
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

/// Parsed CSV content; states are plain vectors since CSV does not carry the
/// vertex tag.
struct TrajectoryTable {
  std::vector<Index> s;
  std::vector<Index> p;  // 1-based as in the file
  std::vector<Vector> x;
  Index dimension() const { return x.empty() ? 0 : x.front().size(); }
};
TrajectoryTable parse_trajectory_csv(const std::string& text,
                                     const std::string& source = "<string>");
TrajectoryTable read_trajectory_csv(const std::filesystem::path& path);

}  // namespace dfpower
