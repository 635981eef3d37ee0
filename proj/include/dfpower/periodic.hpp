#pragma once

#include "dfpower/dynamics.hpp"

#include <optional>
#include <vector>

namespace dfpower {

// Periodic switching with period P: sigma(0) = P and sigma(Pq + p) = p for
// p = 1..P. Phases are 1-based throughout this header.

class PeriodicProgram {
 public:
  /// `sources[p-1]` is the 0-based matrix index used in phase p, kept so a
  /// trajectory's signal log can be matched against the program.
  PeriodicProgram(std::vector<Vector> phase_gammas, std::vector<Index> sources,
                  const Tolerances& tol = default_tolerances());

  /// Built from a program whose signal is PeriodicSignal (InvalidSignal
  /// otherwise). Star phases raise StarTopology.
  static PeriodicProgram from_program(const TopologyProgram& program,
                                      const Tolerances& tol = default_tolerances());

  Index period() const { return static_cast<Index>(gammas_.size()); }
  const Vector& gamma(Index phase) const { return gammas_.at(phase - 1); }
  Index source(Index phase) const { return sources_.at(phase - 1); }
  const std::vector<Vector>& phase_gammas() const { return gammas_; }

  /// Phase whose map is applied to the limit state y*_p, i.e. sigma(p - 1).
  Index outgoing_phase(Index p) const { return p == 1 ? period() : p - 1; }

 private:
  std::vector<Vector> gammas_;
  std::vector<Index> sources_;
};

/// Return map G_p of phase p: the P constituent maps applied in the order
/// visited from an issue s = Pq + p - 1. For P = 2, G_1 = F_1 o F_2 and
/// G_2 = F_2 o F_1.
class CompositeMap {
 public:
  CompositeMap(const PeriodicProgram& program, Index p);

  /// Phases in application order (first applied first).
  const std::vector<Index>& application_order() const { return order_; }
  PowerVector operator()(const PowerVector& x,
                         const Tolerances& tol = default_tolerances()) const;

 private:
  std::vector<Vector> gammas_;  // in application order
  std::vector<Index> order_;
};

CompositeMap compose(const PeriodicProgram& program, Index p);

struct PeriodicLimit {
  std::vector<Vector> fixed_points;   // y*_1, ..., y*_P
  std::vector<double> chain_residuals;  // ||F_{sigma(p-1)}(y*_p) - y*_{p+1}||_1
  std::vector<double> fixed_residuals;  // ||G_p(y*_p) - y*_p||_1
  std::vector<Index> iterations;
};

/// Iterates each G_p from the uniform vector until the step is below `tol`,
/// then checks the chain property within 10 tol (ChainInconsistency).
PeriodicLimit periodic_fixed_points(const PeriodicProgram& program, double tol,
                                    const Tolerances& tols = default_tolerances());

struct PeriodicVerification {
  bool within_tol = false;
  double max_deviation = 0.0;  // max over s >= burn_in of ||x(s) - y*_{phase}||_1
};

/// x(Pq + p - 1) is compared with y*_p. Throws PhaseMismatch when the
/// trajectory's signal log does not follow the program's periodic schedule.
PeriodicVerification verify_periodic_limit(const Trajectory& traj, const PeriodicProgram& program,
                                           const PeriodicLimit& limit, Index burn_in, double tol);

/// Shared dominant left eigenvector if every pair is within `tol` in the
/// 1-norm.
std::optional<Vector> same_gamma_class(const TopologyProgram& program, double tol);

}  // namespace dfpower
