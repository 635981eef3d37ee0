#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include "dfpower/analysis.hpp"
#include "dfpower/dynamics.hpp"
#include "dfpower/verify.hpp"

#include <algorithm>
#include <numeric>

using namespace dfpower;
using namespace testing;

namespace {

PowerVector pv(const Vector& x) { return PowerVector::from_values(x); }

std::vector<Index> argsort(const Vector& v) {
  std::vector<Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return v(a) < v(b); });
  return idx;
}

}  // namespace

TEST_CASE("alpha examples") {
  const Vector g = vec({0.4, 0.35, 0.25});
  CHECK(alpha(pv(uniform(3)), g) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(alpha(pv(Vector::Zero(3)), g) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(alpha(pv(vec({0.5, 0.25, 0.25})), g) == doctest::Approx(0.625).epsilon(1e-14));
  CHECK(kind_of([&] { alpha(PowerVector::vertex(3, 1), g); }) == ErrorKind::VertexInput);
}

TEST_CASE("df_map examples") {
  const Vector g = vec({0.4, 0.35, 0.25});
  // Weights 0.4/0.8, 0.35/0.5, 0.25/0.7 scale to (35, 49, 25)/109.
  const Vector expected = vec({35.0 / 109, 49.0 / 109, 25.0 / 109});
  const Vector out = df_map(pv(vec({0.2, 0.5, 0.3})), g).values();
  CHECK((out - expected).lpNorm<Eigen::Infinity>() < 1e-15);
  CHECK((out - map_by_definition(vec({0.2, 0.5, 0.3}), g)).lpNorm<Eigen::Infinity>() < 1e-15);

  const auto v = df_map(PowerVector::vertex(3, 1), g);
  CHECK(v.is_vertex());
  CHECK(*v.vertex_index() == 1);
  CHECK(v.values() == vec({0, 1, 0}));

  for (Index n = 3; n <= 8; ++n) {
    StateSampler sampler(static_cast<std::uint64_t>(n));
    const Vector gamma = sampler.interior(n);
    CHECK((df_map(pv(uniform(n)), gamma).values() - gamma).lpNorm<Eigen::Infinity>() < 1e-15);
  }
}

TEST_CASE("df_map rejects untagged states too close to a vertex") {
  const Vector g = vec({0.4, 0.35, 0.25});
  CHECK(kind_of([&] { df_map(pv(vec({1.0 - 1e-15, 1e-15, 0})), g); }) ==
        ErrorKind::NumericalOverflow);
  CHECK(kind_of([&] { df_map(pv(vec({1.0, 0, 0})), g); }) == ErrorKind::NumericalOverflow);
  CHECK_NOTHROW(df_map(pv(vec({1.0 - 1e-13, 1e-13, 0})), g));
}

TEST_CASE("state types enforce their shapes") {
  CHECK(kind_of([] { PowerVector::from_values(vec({0.5, 1.5, 0})); }) == ErrorKind::InvalidState);
  CHECK(kind_of([] { PowerVector::from_values(vec({0.5, -0.1, 0})); }) == ErrorKind::InvalidState);
  CHECK(kind_of([] { InitialCondition::values(Vector::Zero(3)); }) ==
        ErrorKind::InadmissibleInitial);
  CHECK(kind_of([] { InitialCondition::values(vec({1.0, 0, 0})); }) ==
        ErrorKind::InadmissibleInitial);
  CHECK_NOTHROW(InitialCondition::values(vec({0.95, 0.95, 0.95})));
  CHECK(InitialCondition::vertex(4, 2).state().is_vertex());
}

TEST_CASE("simplex preservation and positivity on random inputs") {
  StateSampler sampler(99);
  for (int k = 0; k < 2000; ++k) {
    const Index n = 3 + k % 6;
    const Vector gamma = sampler.interior(n);
    Vector x(n);
    for (Index i = 0; i < n; ++i) x(i) = 0.999 * sampler.uniform();
    if (k % 3 == 0) x(k % n) = 0.0;
    const Vector y = df_map(pv(x), gamma).values();
    CHECK(std::abs(y.sum() - 1.0) <= 1e-12);
    CHECK(y.minCoeff() > 0.0);
  }
}

TEST_CASE("dynamic step follows the signal") {
  const auto program = load("appendix_program.json");
  const auto x = pv(uniform(6));
  for (Index s : {0, 3, 7}) {
    const auto step = df_step_dynamic(x, program, s);
    CHECK(step.topology == program.index_at(s));
    CHECK(step.next.values() == df_map(x, program.gammas()[step.topology]).values());
  }

  const TopologyProgram scripted(program.matrices(), ScriptedSignal{{1, 0}});
  CHECK((df_step_dynamic(x, scripted, 0).next.values() - program.gammas()[1]).lpNorm<1>() <
        1e-15);

  const TopologyProgram constant(program.matrices(), ConstantSignal{3});
  const auto a = df_step_dynamic(pv(vec({0.1, 0.2, 0.3, 0.1, 0.2, 0.1})), constant, 11).next;
  const auto b = df_map(pv(vec({0.1, 0.2, 0.3, 0.1, 0.2, 0.1})), program.gammas()[3]);
  CHECK(a.values() == b.values());

  // Same seed, same index at s = 7, every time.
  const Index first = df_step_dynamic(x, load("appendix_program.json"), 7).topology;
  for (int rep = 0; rep < 5; ++rep) CHECK(df_step_dynamic(x, program, 7).topology == first);
}

TEST_CASE("simulate from the section V initial condition") {
  const auto program = load("appendix_program.json");
  const auto traj =
      simulate(program, InitialCondition::values(vec({0.95, 0.95, 0.95, 0, 0, 0})), 200);
  REQUIRE(traj.states.size() == 201);
  CHECK(traj.signal_log.size() == 201);
  CHECK(traj.issues() == 200);
  for (Index s = 1; s <= 200; ++s) {
    CHECK(traj.states[s].values().minCoeff() > 0.0);
    CHECK(std::abs(traj.states[s].values().sum() - 1.0) <= 1e-12);
  }
  CHECK(replay_residual(traj) <= 1e-12);
  for (Index s = 0; s < 200; ++s) {
    CHECK(traj.applied_gamma(s) == program.gammas()[traj.signal_log[s]]);
  }
}

TEST_CASE("vertex initial condition stays put") {
  const auto program = load("appendix_program.json");
  const auto traj = simulate(program, InitialCondition::vertex(6, 0), 50);
  for (const auto& x : traj.states) {
    CHECK(x.is_vertex());
    CHECK(*x.vertex_index() == 0);
  }
}

TEST_CASE("doubly stochastic constant topology fixes the uniform vector") {
  const auto program = load("doubly_stochastic4.json");
  const auto traj = simulate(program, InitialCondition::values(uniform(4)), 20);
  for (const auto& x : traj.states) CHECK((x.values() - uniform(4)).lpNorm<1>() < 1e-15);
}

TEST_CASE("single issue gives two states") {
  const auto program = load("doubly_stochastic4.json");
  CHECK(simulate(program, InitialCondition::values(uniform(4)), 1).states.size() == 2);
  CHECK(kind_of([&] { simulate(program, InitialCondition::values(uniform(4)), 0); }) ==
        ErrorKind::ConfigError);
  CHECK(kind_of([&] { simulate(program, InitialCondition::values(uniform(3)), 5); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("limit gap") {
  const auto program = load("appendix_program.json");
  const auto a = simulate(program, InitialCondition::values(vec({0.95, 0.95, 0.95, 0, 0, 0})), 60);
  const auto b = simulate(program, InitialCondition::values(vec({0.95, 0.95, 0.95, 0, 0, 0})), 60);
  for (double d : limit_gap(a, b)) CHECK(d == 0.0);

  const auto c =
      simulate(program, InitialCondition::values(vec({0.05, 0.05, 0.05, 0.9, 0.05, 0.9})), 60);
  const auto gap = limit_gap(a, c);
  for (std::size_t s = 20; s < gap.size(); ++s) CHECK(gap[s] < 1e-6);

  const auto other = simulate(program.with_signal(RandomSignal{1}),
                              InitialCondition::values(vec({0.95, 0.95, 0.95, 0, 0, 0})), 60);
  CHECK(kind_of([&] { limit_gap(a, other); }) == ErrorKind::ProgramMismatch);
  const auto shorter =
      simulate(program, InitialCondition::values(vec({0.95, 0.95, 0.95, 0, 0, 0})), 30);
  CHECK(kind_of([&] { limit_gap(a, shorter); }) == ErrorKind::ProgramMismatch);
}

TEST_CASE("fixed point ordering follows gamma ordering") {
  const auto program = load("appendix_program.json");
  for (const auto& g : program.gammas()) {
    const Vector xs = fixed_point(g, 1e-14).x;
    CHECK(argsort(xs) == argsort(g));
    for (Index i = 0; i < g.size(); ++i) {
      for (Index j = 0; j < g.size(); ++j) {
        if (std::abs(g(i) - g(j)) <= 1e-12) CHECK(std::abs(xs(i) - xs(j)) <= 1e-9);
        if (g(i) < g(j) - 1e-12) CHECK(xs(i) < xs(j));
      }
    }
  }
}

TEST_CASE("trajectory CSV") {
  const auto program = load("periodic_two_phase.json");
  const auto traj = simulate(program, InitialCondition::values(uniform(6)), 5);
  const std::string text = format_trajectory_csv(traj);
  CHECK(text.rfind("s,p,x_1,x_2,x_3,x_4,x_5,x_6\n", 0) == 0);
  const auto table = parse_trajectory_csv(text);
  CHECK(table.dimension() == 6);
  REQUIRE(table.s.size() == 6);
  for (std::size_t s = 0; s < 6; ++s) {
    CHECK(table.s[s] == static_cast<Index>(s));
    CHECK(table.p[s] == traj.signal_log[s] + 1);
    CHECK(table.x[s] == traj.states[s].values());  // 17 digits round-trip exactly
  }
  CHECK(table.p[0] == 4);  // sigma(0) = P with order [2, 4]
  CHECK(table.p[1] == 2);

  CHECK(kind_of([] { parse_trajectory_csv(""); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_trajectory_csv("s,q,x_1\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_trajectory_csv("s,p,x_1,x_2,x_3\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_trajectory_csv("s,p,x_1,x_2,x_3\n0,1,0.2\n"); }) ==
        ErrorKind::ParseError);
}
