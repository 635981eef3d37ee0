#include "dfpower/report.hpp"

#include "dfpower/error.hpp"

#include <cmath>

namespace dfpower {

namespace {

Json bounds_json(const Vector& gamma, const Tolerances& tol) {
  Json bounds = Json::array();
  for (Index i = 0; i < gamma.size(); ++i) {
    if (std::abs(gamma(i) - 0.5) <= tol.star) {
      bounds.push_back(nullptr);
    } else {
      bounds.push_back(gamma(i) / (1.0 - gamma(i)));
    }
  }
  return bounds;
}

Json rate_json(const std::optional<double>& rate) {
  if (rate) return *rate;
  return "NotApplicable";
}

}  // namespace

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Vector(m.row(i).transpose())));
  return rows;
}

Json to_json(const Tolerances& t) {
  return Json{{"row_sum", t.row_sum},
              {"structural_zero", t.structural_zero},
              {"eigenvector", t.eigenvector},
              {"eigenvector_max_iters", t.eigenvector_max_iters},
              {"damping", t.damping},
              {"vertex_guard", t.vertex_guard},
              {"near_vertex", t.near_vertex},
              {"fixed_point", t.fixed_point},
              {"max_issues", t.max_issues},
              {"star", t.star},
              {"opinion", t.opinion},
              {"opinion_max_iters", t.opinion_max_iters},
              {"zeta", t.zeta},
              {"structure", t.structure}};
}

Json to_json(const ContractionReport& r) {
  return Json{{"x", to_json(r.x)},
              {"theta", to_json(r.theta)},
              {"theta_min", r.theta_min},
              {"theta_max", r.theta_max},
              {"phi", to_json(r.phi)},
              {"phi_eigenvalues", to_json(r.phi_eigs)},
              {"h", to_json(r.h)},
              {"h_eigenvalues", to_json(r.h_eigs)},
              {"h_eigenvalues_max_imag", r.h_eigs_max_imag},
              {"h_trace", r.h_trace},
              {"h_one_norm", r.h_one_norm},
              {"margin", r.margin},
              {"certified", r.certified},
              {"violations", structure_violations(r)},
              {"tolerances", to_json(r.tolerances)}};
}

Json to_json(const PeriodicLimit& limit) {
  Json phases = Json::array();
  for (std::size_t p = 0; p < limit.fixed_points.size(); ++p) {
    phases.push_back(Json{{"phase", p + 1},
                          {"fixed_point", to_json(limit.fixed_points[p])},
                          {"fixed_residual", limit.fixed_residuals[p]},
                          {"chain_residual", limit.chain_residuals[p]},
                          {"iterations", limit.iterations[p]}});
  }
  return phases;
}

Json to_json(const VerifyReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"passed", c.passed},
                          {"worst", c.worst},
                          {"limit", c.limit},
                          {"detail", c.detail}});
  }
  return Json{{"passed", report.passed()}, {"checks", checks}};
}

Json analyze_program(const TopologyProgram& program, const Tolerances& tol) {
  Json doc;
  doc["n"] = program.dimension();
  doc["matrix_count"] = program.size();

  Json per = Json::array();
  bool any_star = false;
  for (Index p = 0; p < program.size(); ++p) {
    const auto& c = program.matrix(p);
    const auto eig = dominant_left_eigenvector(c, tol);
    const Vector& g = eig.gamma;
    const auto star = classify_star(c, tol);
    any_star = any_star || star.is_star;

    Json item;
    item["matrix"] = p + 1;
    item["gamma"] = to_json(g);
    item["eigen_residual"] = eig.residual;
    item["eigen_damped"] = eig.damped;
    item["star"] = Json{{"is_star", star.is_star},
                        {"center", star.center ? Json(*star.center + 1) : Json(nullptr)}};
    item["radii"] = to_json(contraction_radii(g, tol));
    item["upper_bounds"] = bounds_json(g, tol);
    if (star.is_star) {
      item["note"] = "StarTopology: center bound omitted, center converges to e_" +
                     std::to_string(*star.center + 1);
    }
    item["rate"] = rate_json(convergence_rate({g}));
    Json vertices = Json::array();
    for (Index i = 0; i < g.size(); ++i) {
      const auto vs = vertex_stability(g, i, tol);
      vertices.push_back(Json{{"vertex", i + 1},
                              {"classification", to_string(vs.kind)},
                              {"eigenvalue", vs.eigenvalue}});
    }
    item["vertex_stability"] = vertices;
    per.push_back(item);
  }
  doc["matrices"] = per;

  if (program.size() > 1) {
    const Vector profile = max_gamma_profile(program);
    Json dyn;
    dyn["gamma_bar"] = to_json(profile);
    dyn["radii"] = to_json(contraction_radii(profile, tol));
    dyn["upper_bounds"] = bounds_json(profile, tol);
    dyn["rate"] = rate_json(convergence_rate(program.gammas()));
    const auto shared = same_gamma_class(program, 1e-9);
    dyn["same_gamma_class"] = shared ? to_json(*shared) : Json(nullptr);
    if (shared && !any_star) dyn["stationary_limit"] = to_json(fixed_point(*shared, tol.fixed_point, tol).x);
    doc["switching"] = dyn;
  } else if (!any_star) {
    const Vector& g = program.gammas().front();
    const auto fp = fixed_point(g, tol.fixed_point, tol);
    Json eq;
    eq["x_star"] = to_json(fp.x);
    eq["issues"] = fp.issues;
    eq["residual"] = fp.residual;
    Json tight = Json::array();
    for (Index i = 0; i < g.size(); ++i) tight.push_back(fp.x(i) * (1.0 - g(i)) / g(i));
    eq["bound_tightness"] = tight;
    eq["contraction"] = to_json(transform_chain(PowerVector::from_values(fp.x), tol));
    doc["equilibrium"] = eq;
  }
  return doc;
}

}  // namespace dfpower
