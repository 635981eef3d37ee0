#pragma once

#include "dfpower/analysis.hpp"
#include "dfpower/topology.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace dfpower {

/// Reproducible interior simplex samples. Half the draws are flat
/// Dirichlet(1); the other half cube the exponential weights, which pushes
/// mass toward faces and vertices.
class StateSampler {
 public:
  explicit StateSampler(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1), 53-bit resolution.
  double uniform();
  Index index(Index range);
  /// Interior point with every entry in [min_entry, 1 - min_entry].
  Vector interior(Index n, double min_entry = 1e-6);

 private:
  std::mt19937_64 engine_;
  std::uint64_t samples_ = 0;
};

/// Central differences of the reduced map, column by column.
Matrix finite_difference_jacobian(const Vector& x, const Vector& gamma, double step);

struct PropertyCheck {
  std::string name;
  bool passed = true;
  double worst = 0.0;  // worst observed value of the checked quantity
  double limit = 0.0;  // threshold it is compared against
  std::string detail;
};

struct VerifyOptions {
  Index samples = 1000;
  std::uint64_t seed = 1;
  double fd_step = 1e-7;
  double fd_rel_tol = 1e-5;
  double equivalence_tol = 1e-10;
  bool inject_near_vertex = false;
  Tolerances tol;
};

struct VerifyReport {
  std::vector<PropertyCheck> checks;
  bool passed() const;
  const PropertyCheck* first_failure() const;
};

/// Jacobian closed form vs finite differences, Jacobian column sums, Phi and
/// H structure, ||H||_1 < 1, reduced map vs full DeGroot route, and the
/// radius step property, all on `samples` random interior states.
VerifyReport run_property_suite(const InteractionMatrix& c, const VerifyOptions& opts);

}  // namespace dfpower
