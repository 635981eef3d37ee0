#include "dfpower/analysis.hpp"

#include "dfpower/error.hpp"

#include <algorithm>
#include <cmath>

namespace dfpower {

namespace {

void require_interior(const Vector& x, const Tolerances& tol, const char* what) {
  for (Index i = 0; i < x.size(); ++i) {
    if (1.0 - x(i) < tol.near_vertex) {
      throw Error(ErrorKind::NearVertex, std::string(what) + ": 1 - x_" + std::to_string(i + 1) +
                                             " < " + format_number(tol.near_vertex));
    }
  }
}

bool is_star_entry(double g, const Tolerances& tol) { return std::abs(g - 0.5) <= tol.star; }

}  // namespace

JacobianPair jacobian(const PowerVector& x_now, const PowerVector& x_next,
                      const Tolerances& tol) {
  if (x_now.is_vertex()) throw Error(ErrorKind::NearVertex, "jacobian at a tagged vertex");
  const Vector& x = x_now.values();
  const Vector& y = x_next.values();
  require_interior(x, tol, "jacobian");
  const Index n = x.size();
  Matrix j(n, n);
  for (Index c = 0; c < n; ++c) {
    const double inv = 1.0 / (1.0 - x(c));
    for (Index r = 0; r < n; ++r) {
      j(r, c) = (r == c) ? y(r) * (1.0 - y(r)) * inv : -y(r) * y(c) * inv;
    }
  }
  return {x, y, std::move(j)};
}

ContractionReport transform_chain(const PowerVector& x_next, const Tolerances& tol) {
  if (x_next.is_vertex()) throw Error(ErrorKind::NearVertex, "transform at a tagged vertex");
  const Vector& x = x_next.values();
  require_interior(x, tol, "transform_chain");
  const Index n = x.size();

  ContractionReport rep;
  rep.tolerances = tol;
  rep.x = x;
  rep.theta = (1.0 - x.array()).inverse().matrix();
  rep.phi = -x * x.transpose();
  rep.phi.diagonal() = (x.array() * (1.0 - x.array())).matrix();
  rep.h = rep.theta.asDiagonal() * rep.phi;
  rep.h_one_norm = rep.h.cwiseAbs().colwise().sum().maxCoeff();
  rep.margin = 1.0 - rep.h_one_norm;
  rep.certified = rep.h_one_norm < 1.0;
  rep.h_trace = rep.h.trace();
  rep.theta_min = rep.theta.minCoeff();
  rep.theta_max = rep.theta.maxCoeff();

  Eigen::SelfAdjointEigenSolver<Matrix> phi_solver(rep.phi, Eigen::EigenvaluesOnly);
  rep.phi_eigs = phi_solver.eigenvalues();

  Eigen::EigenSolver<Matrix> h_solver(rep.h, false);
  const Eigen::VectorXcd ev = h_solver.eigenvalues();
  rep.h_eigs = ev.real();
  std::sort(rep.h_eigs.data(), rep.h_eigs.data() + n);
  rep.h_eigs_max_imag = ev.imag().cwiseAbs().maxCoeff();
  return rep;
}

std::vector<std::string> structure_violations(const ContractionReport& r) {
  const double eps = r.tolerances.structure;
  std::vector<std::string> bad;
  if ((r.phi - r.phi.transpose()).cwiseAbs().maxCoeff() > 0.0) bad.emplace_back("phi_symmetric");
  if (r.phi.rowwise().sum().cwiseAbs().maxCoeff() > eps ||
      r.phi.colwise().sum().cwiseAbs().maxCoeff() > eps) {
    bad.emplace_back("phi_zero_row_col_sums");
  }
  const Index zero_eigs =
      std::count_if(r.phi_eigs.data(), r.phi_eigs.data() + r.phi_eigs.size(),
                    [eps](double v) { return std::abs(v) <= eps; });
  if (r.phi_eigs.minCoeff() < -eps || zero_eigs != 1) bad.emplace_back("phi_psd_single_zero");
  if (r.h.rowwise().sum().cwiseAbs().maxCoeff() > eps) bad.emplace_back("h_zero_row_sums");
  if (r.h_eigs_max_imag > 1e-9) bad.emplace_back("h_real_spectrum");
  if (r.h_eigs.minCoeff() < -eps || r.h_eigs.maxCoeff() >= 1.0) bad.emplace_back("h_spectrum_in_0_1");
  if (std::abs(r.h_trace - 1.0) > eps) bad.emplace_back("h_unit_trace");
  if (!r.certified) bad.emplace_back("h_one_norm_below_1");
  return bad;
}

Vector contraction_radii(const Vector& gamma, const Tolerances& tol) {
  Vector r(gamma.size());
  for (Index j = 0; j < gamma.size(); ++j) {
    r(j) = is_star_entry(gamma(j), tol) ? 0.0 : (1.0 - 2.0 * gamma(j)) / (1.0 - gamma(j));
  }
  return r;
}

Vector equilibrium_upper_bound(const Vector& gamma, const Tolerances& tol) {
  for (Index i = 0; i < gamma.size(); ++i) {
    if (is_star_entry(gamma(i), tol)) {
      throw Error(ErrorKind::StarTopology,
                  "gamma_" + std::to_string(i + 1) + " = 0.5 (star center), no interior bound");
    }
  }
  return (gamma.array() / (1.0 - gamma.array())).matrix();
}

BoundProfile bound_profile(const Vector& gamma, const Tolerances& tol) {
  return {contraction_radii(gamma, tol), equilibrium_upper_bound(gamma, tol),
          convergence_rate({gamma})};
}

std::optional<double> convergence_rate(const std::vector<Vector>& gammas) {
  double beta = 0.0;
  for (const auto& g : gammas) {
    if (g.maxCoeff() >= 1.0 / 3.0) return std::nullopt;
    beta = std::max(beta, (g.array() / (1.0 - g.array())).maxCoeff());
  }
  if (gammas.empty()) return std::nullopt;
  return 2.0 * beta;
}

VertexStability vertex_stability(const Vector& gamma, Index i, const Tolerances& tol) {
  const double g = gamma(i);
  if (is_star_entry(g, tol)) return {VertexStabilityKind::AsymptoticallyStableNotExponential, 1.0};
  // 1/g - 1 rather than (1 - g)/g: same value, and exact for g = 0.4.
  return {VertexStabilityKind::Unstable, 1.0 / g - 1.0};
}

std::string to_string(VertexStabilityKind kind) {
  return kind == VertexStabilityKind::Unstable ? "Unstable" : "AsymptoticallyStableNotExponential";
}

FixedPointResult fixed_point(const Vector& gamma, double step_tol, const Tolerances& tol) {
  if ((gamma.array() - 0.5).abs().minCoeff() <= tol.star) {
    throw Error(ErrorKind::StarTopology, "star topology converges to its center vertex");
  }
  const Index n = gamma.size();
  PowerVector x = PowerVector::from_values(Vector::Constant(n, 1.0 / static_cast<double>(n)));
  for (Index s = 1; s <= tol.max_issues; ++s) {
    PowerVector next = df_map(x, gamma, tol);
    const double step = (next.values() - x.values()).lpNorm<1>();
    x = std::move(next);
    if (step < step_tol) {
      const double residual = (df_map(x, gamma, tol).values() - x.values()).lpNorm<1>();
      return {x.values(), s, residual};
    }
  }
  throw Error(ErrorKind::NoConvergence,
              "fixed point not reached within " + std::to_string(tol.max_issues) + " issues");
}

bool contraction_step_holds(const PowerVector& x, const Vector& gamma, Index j, double r,
                            const Tolerances& tol) {
  if (x[j] > 1.0 - r) return true;  // premise false
  return df_map(x, gamma, tol)[j] < 1.0 - r;
}

std::optional<Index> rate_burn_in(const Trajectory& traj, double beta, double slack) {
  for (Index s = 0; s <= traj.issues(); ++s) {
    if (traj.states[s].values().maxCoeff() <= beta - slack) return s;
  }
  return std::nullopt;
}

}  // namespace dfpower
