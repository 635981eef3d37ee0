#pragma once

#include "dfpower/dynamics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dfpower {

// Executable forms of the contraction argument for the reduced map.

/// J_ii = x'_i (1 - x'_i) / (1 - x_i),  J_ij = -x'_i x'_j / (1 - x_j)
/// with x = x_now and x' = x_next = F(x_now). Columns of J sum to zero
/// because F stays on the simplex.
struct JacobianPair {
  Vector x_now;
  Vector x_next;
  Matrix j;
};

JacobianPair jacobian(const PowerVector& x_now, const PowerVector& x_next,
                      const Tolerances& tol = default_tolerances());

/// Theta = diag(1 / (1 - x_i)), Phi (weighted Laplacian), H = Theta Phi
/// evaluated at x_next, with spectra and the ||H||_1 < 1 certificate.
struct ContractionReport {
  Vector x;
  Vector theta;
  Matrix phi;
  Matrix h;
  double h_one_norm = 0.0;
  double margin = 0.0;  // 1 - ||H||_1
  Vector phi_eigs;       // ascending
  Vector h_eigs;         // real parts, ascending
  double h_eigs_max_imag = 0.0;
  double h_trace = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  bool certified = false;
  Tolerances tolerances;
};

ContractionReport transform_chain(const PowerVector& x_next,
                                  const Tolerances& tol = default_tolerances());

/// Names of the structural identities a report violates (empty when all of
/// Phi symmetric / PSD with one zero eigenvalue / zero row sums, H zero row
/// sums / real spectrum in [0, 1) / unit trace, and ||H||_1 < 1 hold).
std::vector<std::string> structure_violations(const ContractionReport& report);

/// r_j = (1 - 2 gamma_j) / (1 - gamma_j), clamped to 0 for the star center.
Vector contraction_radii(const Vector& gamma, const Tolerances& tol = default_tolerances());

/// gamma_i / (1 - gamma_i). Throws StarTopology if any gamma_i is 0.5.
Vector equilibrium_upper_bound(const Vector& gamma,
                               const Tolerances& tol = default_tolerances());

struct BoundProfile {
  Vector radii;
  Vector upper_bounds;
  std::optional<double> rate;
};

BoundProfile bound_profile(const Vector& gamma, const Tolerances& tol = default_tolerances());

/// 2 * max_p max_i gamma_{p,i} / (1 - gamma_{p,i}) when every entry of every
/// gamma is below 1/3; nullopt otherwise.
std::optional<double> convergence_rate(const std::vector<Vector>& gammas);

enum class VertexStabilityKind { Unstable, AsymptoticallyStableNotExponential };

struct VertexStability {
  VertexStabilityKind kind;
  double eigenvalue;  // nonzero eigenvalue of the Jacobian at e_i
};

VertexStability vertex_stability(const Vector& gamma, Index i,
                                 const Tolerances& tol = default_tolerances());

std::string to_string(VertexStabilityKind kind);

struct FixedPointResult {
  Vector x;
  Index issues = 0;
  double residual = 0.0;  // ||F(x*) - x*||_1
};

/// Iterates F from the uniform vector until the step is below `step_tol`.
FixedPointResult fixed_point(const Vector& gamma, double step_tol,
                             const Tolerances& tol = default_tolerances());

/// Lemma-style step check: for x with x_j <= 1 - r, F_j(x) < 1 - r.
bool contraction_step_holds(const PowerVector& x, const Vector& gamma, Index j, double r,
                            const Tolerances& tol = default_tolerances());

/// First issue at which every x_i(s) <= beta - slack, or nullopt.
std::optional<Index> rate_burn_in(const Trajectory& traj, double beta, double slack = 1e-6);

}  // namespace dfpower
