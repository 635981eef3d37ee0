#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace dfpower {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Numerical thresholds shared by every module. Certificates copy the
/// instance they were computed with so a report is self-describing.
struct Tolerances {
  double row_sum = 1e-12;          // row-stochasticity of C and W
  double structural_zero = 1e-15;  // entries at or below are not edges
  double eigenvector = 1e-12;      // ||g^T C - g^T||_1 stopping rule
  long eigenvector_max_iters = 100000;
  double damping = 0.5;            // theta for the damped retry
  double vertex_guard = 1e-14;     // untagged states need 1 - x_i >= this
  double near_vertex = 1e-12;      // Jacobian / H need 1 - x_i >= this
  double fixed_point = 1e-13;      // ||x(s+1) - x(s)||_1 stopping rule
  long max_issues = 10000;
  double star = 1e-9;              // |gamma_i - 0.5| for star detection
  double opinion = 1e-12;          // max_i y_i - min_i y_i for consensus
  long opinion_max_iters = 1000000;
  double zeta = 1e-14;             // ||z^T W - z^T||_1 stopping rule
  double structure = 1e-10;        // Phi / H / J structural identities
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace dfpower
