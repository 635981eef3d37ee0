#include "dfpower/verify.hpp"

#include "dfpower/degroot.hpp"
#include "dfpower/error.hpp"

#include <cmath>

namespace dfpower {

double StateSampler::uniform() {
  for (;;) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

Index StateSampler::index(Index range) {
  return std::min<Index>(static_cast<Index>(uniform() * static_cast<double>(range)), range - 1);
}

Vector StateSampler::interior(Index n, double min_entry) {
  const bool spiky = (samples_++ % 2) == 1;
  for (;;) {
    Vector w(n);
    for (Index i = 0; i < n; ++i) {
      const double e = -std::log(uniform());
      w(i) = spiky ? e * e * e : e;
    }
    w /= w.sum();
    if (w.minCoeff() >= min_entry && w.maxCoeff() <= 1.0 - min_entry) return w;
  }
}

Matrix finite_difference_jacobian(const Vector& x, const Vector& gamma, double step) {
  const Index n = x.size();
  Matrix j(n, n);
  for (Index c = 0; c < n; ++c) {
    Vector up = x, down = x;
    up(c) += step;
    down(c) -= step;
    const Vector fu = df_map(PowerVector::from_values(up), gamma).values();
    const Vector fd = df_map(PowerVector::from_values(down), gamma).values();
    j.col(c) = (fu - fd) / (2.0 * step);
  }
  return j;
}

bool VerifyReport::passed() const { return first_failure() == nullptr; }

const PropertyCheck* VerifyReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

VerifyReport run_property_suite(const InteractionMatrix& c, const VerifyOptions& opts) {
  const Tolerances& tol = opts.tol;
  const Index n = c.size();
  const Vector gamma = dominant_left_eigenvector(c, tol).gamma;
  const Vector radii = contraction_radii(gamma, tol);
  StateSampler sampler(opts.seed);

  PropertyCheck colsum{"jacobian_column_sums_zero", true, 0.0, tol.structure, ""};
  PropertyCheck fd{"jacobian_finite_difference", true, 0.0, opts.fd_rel_tol, ""};
  PropertyCheck phi{"phi_structure", true, 0.0, tol.structure, ""};
  PropertyCheck h{"h_structure", true, 0.0, 1e-9, ""};
  PropertyCheck norm{"h_one_norm_below_1", true, 0.0, 1.0, ""};
  PropertyCheck eq{"degroot_equivalence", true, 0.0, opts.equivalence_tol, ""};
  PropertyCheck step{"radius_step_property", true, 0.0, 0.0, ""};
  double min_margin = 1.0;

  for (Index k = 0; k < opts.samples; ++k) {
    const PowerVector x = PowerVector::from_values(sampler.interior(n));
    const PowerVector y = df_map(x, gamma, tol);

    const JacobianPair jp = jacobian(x, y, tol);
    colsum.worst = std::max(colsum.worst, jp.j.colwise().sum().cwiseAbs().maxCoeff());

    const Matrix jfd = finite_difference_jacobian(x.values(), gamma, opts.fd_step);
    fd.worst = std::max(fd.worst, (jp.j - jfd).cwiseAbs().maxCoeff() / jp.j.cwiseAbs().maxCoeff());

    const ContractionReport rep = transform_chain(y, tol);
    for (const auto& v : structure_violations(rep)) {
      if (v.rfind("phi_", 0) == 0) {
        phi.passed = false;
        phi.detail = v;
      } else if (v != "h_one_norm_below_1") {
        h.passed = false;
        h.detail = v;
      }
    }
    phi.worst = std::max({phi.worst, rep.phi.rowwise().sum().cwiseAbs().maxCoeff(),
                          -rep.phi_eigs.minCoeff()});
    h.worst = std::max({h.worst, rep.h_eigs_max_imag, std::abs(rep.h_trace - 1.0)});
    norm.worst = std::max(norm.worst, rep.h_one_norm);
    min_margin = std::min(min_margin, rep.margin);

    const PowerVector z = appraisal_step_via_zeta(x, c, tol);
    eq.worst = std::max(eq.worst, (z.values() - y.values()).lpNorm<1>());

    // Put x_j on the boundary of the radius region and spread the rest.
    const Index j = sampler.index(n);
    if (radii(j) > 0.0) {
      const double r = radii(j) * sampler.uniform();
      Vector probe = sampler.interior(n) * r;
      probe(j) = 0.0;
      probe *= r / probe.sum();
      probe(j) = 1.0 - r;
      const PowerVector px = PowerVector::from_values(probe);
      const double fj = df_map(px, gamma, tol)[j];
      // worst = largest F_j(x) - (1 - r); must stay negative
      const double excess = fj - (1.0 - r);
      step.worst = k == 0 ? excess : std::max(step.worst, excess);
      if (!contraction_step_holds(px, gamma, j, r, tol)) step.passed = false;
    }
  }

  colsum.passed = colsum.worst <= colsum.limit;
  fd.passed = fd.worst <= fd.limit;
  norm.passed = norm.worst < 1.0;
  norm.detail = "min margin 1 - ||H||_1 = " + format_number(min_margin);
  eq.passed = eq.worst <= eq.limit;

  VerifyReport report;
  report.checks = {colsum, fd, phi, h, norm, eq, step};

  if (opts.inject_near_vertex) {
    PropertyCheck guard{"near_vertex_guard", false, 0.0, tol.near_vertex, ""};
    Vector x = Vector::Constant(n, 1e-13 / static_cast<double>(n - 1));
    x(0) = 1.0 - 1e-13;
    try {
      const PowerVector px = PowerVector::from_values(x);
      (void)transform_chain(px, tol);
      guard.detail = "near-vertex sample was accepted";
    } catch (const Error& e) {
      guard.passed = e.kind() == ErrorKind::NearVertex;
      guard.detail = e.what();
    }
    report.checks.push_back(guard);
  }
  return report;
}

}  // namespace dfpower
