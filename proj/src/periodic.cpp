#include "dfpower/periodic.hpp"

#include "dfpower/error.hpp"

#include <cmath>

namespace dfpower {

PeriodicProgram::PeriodicProgram(std::vector<Vector> phase_gammas, std::vector<Index> sources,
                                 const Tolerances& tol)
    : gammas_(std::move(phase_gammas)), sources_(std::move(sources)) {
  if (gammas_.size() < 2) throw Error(ErrorKind::InvalidSignal, "periodic program needs P >= 2");
  if (sources_.size() != gammas_.size()) {
    throw Error(ErrorKind::InvalidSignal, "one source index per phase required");
  }
  for (std::size_t p = 0; p < gammas_.size(); ++p) {
    if ((gammas_[p].array() - 0.5).abs().minCoeff() <= tol.star) {
      throw Error(ErrorKind::StarTopology,
                  "phase " + std::to_string(p + 1) + " has star topology");
    }
  }
}

PeriodicProgram PeriodicProgram::from_program(const TopologyProgram& program,
                                              const Tolerances& tol) {
  const auto* sig = std::get_if<PeriodicSignal>(&program.signal());
  if (sig == nullptr) throw Error(ErrorKind::PhaseMismatch, "program signal is not periodic");
  std::vector<Vector> gammas;
  for (Index p : sig->order) gammas.push_back(program.gammas()[p]);
  return PeriodicProgram(std::move(gammas), sig->order, tol);
}

CompositeMap::CompositeMap(const PeriodicProgram& program, Index p) {
  const Index period = program.period();
  if (p < 1 || p > period) throw Error(ErrorKind::InvalidSignal, "phase out of range");
  Index phase = program.outgoing_phase(p);
  for (Index k = 0; k < period; ++k) {
    order_.push_back(phase);
    gammas_.push_back(program.gamma(phase));
    phase = phase % period + 1;
  }
}

PowerVector CompositeMap::operator()(const PowerVector& x, const Tolerances& tol) const {
  PowerVector y = x;
  for (const auto& g : gammas_) y = df_map(y, g, tol);
  return y;
}

CompositeMap compose(const PeriodicProgram& program, Index p) { return CompositeMap(program, p); }

PeriodicLimit periodic_fixed_points(const PeriodicProgram& program, double tol,
                                    const Tolerances& tols) {
  const Index period = program.period();
  const Index n = program.gamma(1).size();
  PeriodicLimit limit;
  for (Index p = 1; p <= period; ++p) {
    const CompositeMap g = compose(program, p);
    PowerVector y = PowerVector::from_values(Vector::Constant(n, 1.0 / static_cast<double>(n)));
    Index it = 0;
    for (;; ++it) {
      if (it >= tols.max_issues) {
        throw Error(ErrorKind::NoConvergence,
                    "G_" + std::to_string(p) + " did not reach a fixed point");
      }
      PowerVector next = g(y, tols);
      const double step = (next.values() - y.values()).lpNorm<1>();
      y = std::move(next);
      if (step < tol) break;
    }
    limit.fixed_residuals.push_back((g(y, tols).values() - y.values()).lpNorm<1>());
    limit.fixed_points.push_back(y.values());
    limit.iterations.push_back(it + 1);
  }
  for (Index p = 1; p <= period; ++p) {
    const Index next = p % period + 1;
    const auto mapped = df_map(PowerVector::from_values(limit.fixed_points[p - 1]),
                               program.gamma(program.outgoing_phase(p)), tols);
    const double r = (mapped.values() - limit.fixed_points[next - 1]).lpNorm<1>();
    limit.chain_residuals.push_back(r);
    if (r > 10.0 * tol) {
      throw Error(ErrorKind::ChainInconsistency,
                  "F maps y*_" + std::to_string(p) + " to within " + format_number(r) +
                      " of y*_" + std::to_string(next));
    }
  }
  return limit;
}

PeriodicVerification verify_periodic_limit(const Trajectory& traj, const PeriodicProgram& program,
                                           const PeriodicLimit& limit, Index burn_in, double tol) {
  const Index period = program.period();
  for (Index s = 0; s < static_cast<Index>(traj.signal_log.size()); ++s) {
    if (traj.signal_log[s] != program.source(periodic_phase(s, period))) {
      throw Error(ErrorKind::PhaseMismatch,
                  "issue " + std::to_string(s) + " used matrix " +
                      std::to_string(traj.signal_log[s] + 1) +
                      ", periodic schedule expects " +
                      std::to_string(program.source(periodic_phase(s, period)) + 1));
    }
  }
  PeriodicVerification out;
  for (Index s = burn_in; s <= traj.issues(); ++s) {
    const Index p = s % period + 1;
    out.max_deviation = std::max(
        out.max_deviation, (traj.states[s].values() - limit.fixed_points[p - 1]).lpNorm<1>());
  }
  out.within_tol = out.max_deviation <= tol;
  return out;
}

std::optional<Vector> same_gamma_class(const TopologyProgram& program, double tol) {
  const auto& g = program.gammas();
  for (std::size_t a = 0; a < g.size(); ++a) {
    for (std::size_t b = a + 1; b < g.size(); ++b) {
      if ((g[a] - g[b]).lpNorm<1>() > tol) return std::nullopt;
    }
  }
  return g.front();
}

}  // namespace dfpower
