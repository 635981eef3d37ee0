// Acceptance checks, one line per criterion. Usage: acceptance [k ...]
// with k in 1..11; no arguments runs all of them. Exit status is nonzero if
// any selected criterion fails.

#include "support.hpp"

#include "dfpower/analysis.hpp"
#include "dfpower/degroot.hpp"
#include "dfpower/periodic.hpp"
#include "dfpower/report.hpp"
#include "dfpower/verify.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

using namespace dfpower;
using namespace testing;

namespace {

// Pinned tolerances.
constexpr double kGammaBarTol = 5e-5;
constexpr double kBoundTol = 1e-3;
constexpr double kBoundSlack = 1e-9;
constexpr Index kBoundFrom = 20;
constexpr double kForgetGap = 1e-6;
constexpr Index kForgetFrom = 20;
constexpr Index kMonotoneFrom = 2;
constexpr double kMonotoneJitter = 1e-12;
constexpr long kCertificateStates = 10000;
constexpr double kStructureTol = 1e-10;
constexpr double kImagTol = 1e-9;
constexpr double kEquivalenceTol = 1e-10;
constexpr long kEquivalenceSamples = 1000;
constexpr double kFdStep = 1e-7;
constexpr double kFdRelTol = 1e-5;
constexpr long kFdSamples = 100;
constexpr double kColumnSumTol = 1e-10;
constexpr double kRateSlack = 1e-9;
constexpr double kRateNoiseFloor = 1e-10;
constexpr Index kStarBudget = 10000;
constexpr double kStarTarget = 0.99;
// Measured once with uniform x(0) on data/star5.json and frozen.
constexpr Index kStarCrossing = 132;
constexpr double kChainTol = 1e-10;
constexpr double kPeriodicTol = 1e-8;
constexpr Index kPeriodicBurnIn = 30;
constexpr double kStationaryTol = 1e-8;
constexpr Index kStationaryBy = 60;
constexpr double kRuntimeLimit = 1.0;  // seconds

const Vector kGammaBarPrinted = vec({0.4737, 0.2371, 0.2439, 0.2439, 0.2439, 0.2392});
const Vector kBoundPrinted = vec({0.9, 0.3108, 0.3226, 0.3226, 0.3226, 0.3144});
const Vector kXHat = vec({0.95, 0.95, 0.95, 0, 0, 0});
const Vector kXTilde = vec({0.05, 0.05, 0.05, 0.9, 0.05, 0.9});

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

Vector from_json(const Json& a) {
  Vector v(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Index>(i)) = a[i].get<double>();
  return v;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PowerVector pv(const Vector& x) { return PowerVector::from_values(x); }

Outcome c1() {
  const auto t0 = std::chrono::steady_clock::now();
  const Json doc = analyze_program(load("appendix_program.json"));
  const Vector bar = from_json(doc["switching"]["gamma_bar"]);
  const double err = (bar - kGammaBarPrinted).lpNorm<Eigen::Infinity>();
  const double dt = seconds_since(t0);
  return {err <= kGammaBarTol && dt < kRuntimeLimit,
          "max |gamma_bar - printed| = " + fmt(err) + " (tol " + fmt(kGammaBarTol) +
              "), runtime " + fmt(dt) + " s"};
}

Outcome c2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto program = load("appendix_program.json");
  const Json doc = analyze_program(program);
  const Vector bound = from_json(doc["switching"]["upper_bounds"]);
  const double err = (bound - kBoundPrinted).lpNorm<Eigen::Infinity>();
  long violations = 0;
  double worst = -1.0;
  for (const Vector& x0 : {kXHat, kXTilde}) {
    const auto traj = simulate(program, InitialCondition::values(x0), 200);
    for (Index s = kBoundFrom + 1; s <= 200; ++s) {
      const Vector excess = traj.states[s].values() - bound;
      worst = std::max(worst, excess.maxCoeff());
      violations += (excess.array() > kBoundSlack).count();
    }
  }
  const double dt = seconds_since(t0);
  return {err <= kBoundTol && violations == 0 && dt < kRuntimeLimit,
          "max |bound - printed| = " + fmt(err) + " (tol " + fmt(kBoundTol) + "), " +
              std::to_string(violations) + " violations for s > 20, max x - bound = " +
              fmt(worst) + ", runtime " + fmt(dt) + " s"};
}

Outcome c3() {
  const auto program = load("appendix_program.json");
  const auto a = simulate(program, InitialCondition::values(kXHat), 200);
  const auto b = simulate(program, InitialCondition::values(kXTilde), 200);
  const auto gap = limit_gap(a, b);
  double worst_late = 0.0, worst_rise = -1.0;
  for (std::size_t s = kForgetFrom; s < gap.size(); ++s) worst_late = std::max(worst_late, gap[s]);
  for (std::size_t s = kMonotoneFrom; s + 1 < gap.size(); ++s) {
    worst_rise = std::max(worst_rise, gap[s + 1] - gap[s]);
  }
  return {worst_late < kForgetGap && worst_rise <= kMonotoneJitter,
          "max gap for s >= 20 = " + fmt(worst_late) + " (tol " + fmt(kForgetGap) +
              "), largest increase after s = 2 = " + fmt(worst_rise) + " (jitter " +
              fmt(kMonotoneJitter) + ")"};
}

Outcome c4() {
  std::vector<Vector> states;
  StateSampler sampler(4);
  for (long k = 0; k < kCertificateStates; ++k) states.push_back(sampler.interior(3 + k % 6));
  const auto program = load("appendix_program.json");
  for (const Vector& x0 : {kXHat, kXTilde}) {
    const auto traj = simulate(program, InitialCondition::values(x0), 200);
    for (Index s = 1; s <= 200; ++s) states.push_back(traj.states[s].values());
  }
  Tolerances tol;
  tol.structure = kStructureTol;
  long bad = 0;
  double max_norm = 0.0, max_imag = 0.0, max_trace_err = 0.0;
  std::string first;
  for (const auto& x : states) {
    const auto r = transform_chain(pv(x), tol);
    max_norm = std::max(max_norm, r.h_one_norm);
    max_imag = std::max(max_imag, r.h_eigs_max_imag);
    max_trace_err = std::max(max_trace_err, std::abs(r.h_trace - 1.0));
    const auto v = structure_violations(r);
    if (!v.empty()) {
      if (first.empty()) first = v.front();
      ++bad;
    }
  }
  return {bad == 0 && max_norm < 1.0 && max_imag <= kImagTol,
          std::to_string(states.size()) + " states, min 1 - ||H||_1 = " + fmt(1.0 - max_norm) +
              ", max |Im eig H| = " + fmt(max_imag) + ", max |tr H - 1| = " + fmt(max_trace_err) +
              ", " + std::to_string(bad) + " structure failures" +
              (first.empty() ? "" : " (first: " + first + ")")};
}

Outcome c5() {
  const auto program = load("appendix_program.json");
  StateSampler sampler(5);
  double worst = 0.0;
  for (Index p = 0; p < program.size(); ++p) {
    for (long k = 0; k < kEquivalenceSamples; ++k) {
      const auto x = pv(sampler.interior(6));
      const Vector via_zeta = appraisal_step_via_zeta(x, program.matrix(p)).values();
      const Vector via_map = df_map(x, program.gammas()[p]).values();
      worst = std::max(worst, (via_zeta - via_map).lpNorm<1>());
    }
  }
  return {worst <= kEquivalenceTol,
          "5 x 1000 states, max ||zeta - F(x)||_1 = " + fmt(worst) + " (tol " +
              fmt(kEquivalenceTol) + ")"};
}

Outcome c6() {
  const auto program = load("appendix_program.json");
  StateSampler sampler(6);
  double worst_rel = 0.0, worst_from_one = 0.0, worst_from_zero = 0.0;
  for (long k = 0; k < kFdSamples; ++k) {
    const Vector& gamma = program.gammas()[static_cast<std::size_t>(k % program.size())];
    const Vector x = sampler.interior(6, 1e-3);
    const Matrix j = jacobian(pv(x), df_map(pv(x), gamma)).j;
    const Matrix fd = finite_difference_jacobian(x, gamma, kFdStep);
    worst_rel = std::max(worst_rel, (j - fd).cwiseAbs().maxCoeff() / j.cwiseAbs().maxCoeff());
    const Eigen::RowVectorXd sums = j.colwise().sum();
    worst_from_one = std::max(worst_from_one, (sums.array() - 1.0).abs().maxCoeff());
    worst_from_zero = std::max(worst_from_zero, sums.cwiseAbs().maxCoeff());
  }
  const bool fd_ok = worst_rel <= kFdRelTol;
  const bool sums_one = worst_from_one <= kColumnSumTol;
  return {fd_ok && sums_one,
          "(a) finite differences: max rel err = " + fmt(worst_rel) + " (tol " + fmt(kFdRelTol) +
              ") " + (fd_ok ? "ok" : "FAIL") + "; (b) column sums = 1: max |sum - 1| = " +
              fmt(worst_from_one) + " (tol " + fmt(kColumnSumTol) + ") " +
              (sums_one ? "ok" : "FAIL") + "; measured max |sum| = " + fmt(worst_from_zero)};
}

Outcome c7() {
  const auto program = load("doubly_stochastic4.json");
  const Vector gamma = program.gammas()[0];
  const double rate = *convergence_rate({gamma});
  const double beta = rate / 2.0;
  const Vector xs = fixed_point(gamma, 1e-15).x;
  const auto traj = simulate(program, InitialCondition::values(vec({0.9, 0.05, 0.02, 0.03})), 80);
  const auto s1 = rate_burn_in(traj, beta);
  if (!s1) return {false, "trajectory never entered the burn-in region"};
  double worst = 0.0;
  Index checked = 0;
  for (Index s = *s1; s < traj.issues(); ++s) {
    const double d = (traj.states[s].values() - xs).lpNorm<1>();
    if (d <= kRateNoiseFloor) break;
    worst = std::max(worst, (traj.states[s + 1].values() - xs).lpNorm<1>() / d);
    ++checked;
  }
  return {checked > 0 && worst <= rate + kRateSlack,
          "rate 2 beta = " + fmt(rate) + ", burn-in s1 = " + std::to_string(*s1) + ", " +
              std::to_string(checked) + " ratios, max ratio = " + fmt(worst)};
}

Outcome c8() {
  const auto program = load("star5.json");
  const auto traj = simulate(program, InitialCondition::values(uniform(5)), kStarBudget);
  Index crossing = -1;
  for (Index s = 0; s < traj.issues(); ++s) {
    const double now = traj.states[s][0], next = traj.states[s + 1][0];
    // Increments underflow once x_1 is within rounding of 1.
    if (!(next > now) && now < 1.0 - 1e-12) {
      return {false, "x_1 fails to increase at s = " + std::to_string(s)};
    }
    if (crossing < 0 && next > kStarTarget) crossing = s + 1;
  }
  return {crossing > 0 && crossing == kStarCrossing,
          "x_1 strictly increasing, exceeds 0.99 at s = " + std::to_string(crossing) +
              " (frozen " + std::to_string(kStarCrossing) + ", budget " +
              std::to_string(kStarBudget) + ")"};
}

Outcome c9() {
  std::string detail;
  bool ok = true;
  for (const char* f : {"periodic_two_phase.json", "periodic_three_phase.json"}) {
    const auto program = load(f);
    const auto pp = PeriodicProgram::from_program(program);
    const auto limit = periodic_fixed_points(pp, 1e-13);
    double chain = 0.0;
    for (double r : limit.chain_residuals) chain = std::max(chain, r);
    double dev = 0.0;
    for (const Vector& x0 : {kXHat, kXTilde}) {
      const auto traj = simulate(program, InitialCondition::values(x0), 150);
      dev = std::max(dev, verify_periodic_limit(traj, pp, limit, kPeriodicBurnIn, kPeriodicTol)
                              .max_deviation);
    }
    ok = ok && chain <= kChainTol && dev < kPeriodicTol;
    detail += (detail.empty() ? "" : "; ") + std::string("P = ") + std::to_string(pp.period()) +
              ": chain residual " + fmt(chain) + ", max deviation after s = 30 " + fmt(dev);
  }
  return {ok, detail};
}

Outcome c10() {
  const auto program = load("doubly_stochastic_class5.json");
  const auto shared = same_gamma_class(program, 1e-12);
  if (!shared) return {false, "matrices do not share a dominant left eigenvector"};
  double worst = 0.0;
  for (const Vector& x0 : {vec({0.6, 0.1, 0.05, 0.2, 0.0}), vec({0.0, 0.0, 0.0, 0.0, 0.9})}) {
    const auto traj = simulate(program, InitialCondition::values(x0), 2 * kStationaryBy);
    for (Index s = kStationaryBy; s <= traj.issues(); ++s) {
      worst = std::max(worst, (traj.states[s].values() - uniform(5)).lpNorm<Eigen::Infinity>());
    }
  }
  return {worst <= kStationaryTol,
          "3 distinct doubly stochastic 5x5, random signal, max |x_i(s) - 0.2| for s >= 60 = " +
              fmt(worst)};
}

Outcome c11() {
  const auto a = vertex_stability(vec({0.4, 0.35, 0.25}), 0);
  const auto star = load("star5.json");
  const auto b = vertex_stability(star.gammas()[0], 0);
  const bool ok = a.kind == VertexStabilityKind::Unstable && a.eigenvalue == 1.5 &&
                  b.kind == VertexStabilityKind::AsymptoticallyStableNotExponential;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", a.eigenvalue);
  return {ok, "gamma_1 = 0.4: " + to_string(a.kind) + " eigenvalue " + buf +
                  "; star center: " + to_string(b.kind)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria{
      {1, {"gamma-bar reproduction", c1}},
      {2, {"bound reproduction", c2}},
      {3, {"initial-condition forgetting", c3}},
      {4, {"contraction certificate", c4}},
      {5, {"oracle equivalence", c5}},
      {6, {"Jacobian correctness", c6}},
      {7, {"rate bound", c7}},
      {8, {"star dynamics", c8}},
      {9, {"periodic limit", c9}},
      {10, {"same-gamma stationarity", c10}},
      {11, {"vertex classification", c11}},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (const auto& [k, _] : criteria) selected.push_back(k);

  int failures = 0;
  for (int k : selected) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::printf("unknown criterion %d\n", k);
      return 2;
    }
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", k, it->second.first,
                o.detail.c_str());
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
