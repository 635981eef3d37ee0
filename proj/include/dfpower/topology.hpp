#pragma once

#include "dfpower/common.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace dfpower {

/// Row-stochastic, zero-diagonal, irreducible n x n matrix (n >= 3).
/// Only obtainable through validate(), so holding one is proof of the
/// invariants.
class InteractionMatrix {
 public:
  static InteractionMatrix validate(const Matrix& raw,
                                    const Tolerances& tol = default_tolerances());

  Index size() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  double operator()(Index i, Index j) const { return entries_(i, j); }

 private:
  explicit InteractionMatrix(Matrix m) : entries_(std::move(m)) {}
  Matrix entries_;
};

/// Strongly connected components of the support graph of `m` (edge j -> i
/// whenever m(i, j) > structural_zero, i != j). Returns one component label
/// per node, labels in [0, count).
struct ComponentLabels {
  std::vector<Index> label;
  Index count = 0;
};
ComponentLabels strongly_connected_components(const Matrix& m,
                                              double structural_zero = 1e-15);

bool is_irreducible(const Matrix& m, double structural_zero = 1e-15);

struct StarClassification {
  bool is_star = false;
  std::optional<Index> center;  // 0-based
};

StarClassification classify_star(const InteractionMatrix& c,
                                 const Tolerances& tol = default_tolerances());

struct DominantLeftEigenvector {
  Vector gamma;
  double residual = 0.0;  // ||gamma^T C - gamma^T||_1
  long iterations = 0;
  bool damped = false;
};

struct PowerIterationOptions {
  double tol = 1e-12;
  long max_iters = 100000;
  double damping = 0.0;  // theta; 0 means the plain iteration g <- g^T M
};

/// Left Perron vector of a row-stochastic matrix by sum-normalised power
/// iteration from the uniform vector. Throws NoConvergence when the residual
/// does not reach `opts.tol` within `opts.max_iters`.
DominantLeftEigenvector power_iterate_left(const Matrix& m,
                                           const PowerIterationOptions& opts);

/// Plain power iteration, then a damped retry if the plain one cycles.
DominantLeftEigenvector dominant_left_eigenvector(
    const InteractionMatrix& c, const Tolerances& tol = default_tolerances());

// Switching signals. Matrix indices are 0-based here; files and user output
// use 1-based indices.
struct ConstantSignal {
  Index index = 0;
};
/// sigma(0) = order[P-1], sigma(Pq + p) = order[p-1] for p = 1..P.
struct PeriodicSignal {
  std::vector<Index> order;
};
/// sigma(s) = sequence[s]; holds the last entry for s beyond the sequence.
struct ScriptedSignal {
  std::vector<Index> sequence;
};
/// Independent uniform draws over the matrix set, replayable from the seed.
struct RandomSignal {
  std::uint64_t seed = 0;
};
using SwitchingSignal =
    std::variant<ConstantSignal, PeriodicSignal, ScriptedSignal, RandomSignal>;

/// Paper-convention phase for periodic signals: 1-based p with sigma(0) = P.
Index periodic_phase(Index s, Index period);

class TopologyProgram {
 public:
  TopologyProgram(std::vector<InteractionMatrix> matrices, SwitchingSignal signal);

  Index size() const { return static_cast<Index>(matrices_.size()); }
  Index dimension() const { return matrices_.front().size(); }
  const std::vector<InteractionMatrix>& matrices() const { return matrices_; }
  const InteractionMatrix& matrix(Index p) const { return matrices_.at(p); }
  const SwitchingSignal& signal() const { return signal_; }

  /// Dominant left eigenvectors, one per matrix, computed at construction.
  const std::vector<Vector>& gammas() const { return gammas_; }

  /// sigma(s), 0-based.
  Index index_at(Index s) const;

  /// sigma(0), ..., sigma(count - 1) in one pass.
  std::vector<Index> realize(Index count) const;

  TopologyProgram with_signal(SwitchingSignal signal) const;

 private:
  std::vector<InteractionMatrix> matrices_;
  SwitchingSignal signal_;
  std::vector<Vector> gammas_;
};

/// Entrywise maximum of the dominant left eigenvectors over the matrix set.
Vector max_gamma_profile(const TopologyProgram& program);

}  // namespace dfpower
