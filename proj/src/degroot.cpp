#include "dfpower/degroot.hpp"

#include "dfpower/error.hpp"

#include <cmath>

namespace dfpower {

Matrix build_w(const PowerVector& x, const InteractionMatrix& c) {
  const Index n = c.size();
  if (x.size() != n) throw Error(ErrorKind::DimensionMismatch, "x and C differ in size");
  const Vector& v = x.values();
  for (Index i = 0; i < n; ++i) {
    if (v(i) >= 1.0 && !x.is_vertex()) {
      throw Error(ErrorKind::InvalidState, "build_w needs x_i < 1 on untagged states");
    }
  }
  Matrix w = (Vector::Ones(n) - v).asDiagonal() * c.entries();
  w.diagonal() += v;
  return w;
}

ConsensusResult opinion_consensus(const Matrix& w, const Vector& y0, const Tolerances& tol) {
  ConsensusResult out;
  Vector y = y0;
  Vector next(y.size());
  long it = 0;
  for (; y.maxCoeff() - y.minCoeff() > tol.opinion; ++it) {
    if (it >= tol.opinion_max_iters) {
      throw Error(ErrorKind::NoConvergence,
                  "opinions did not reach consensus within " +
                      std::to_string(tol.opinion_max_iters) + " iterations");
    }
    next.noalias() = w * y;
    y.swap(next);
  }
  out.iterations = it;
  out.y_final = y;
  out.consensus_value = y.mean();

  const auto z = power_iterate_left(w, {tol.zeta, tol.opinion_max_iters, 0.0});
  out.zeta = z.gamma;
  out.zeta_iterations = z.iterations;
  out.crosscheck_error = std::abs(out.consensus_value - out.zeta.dot(y0));
  if (out.crosscheck_error > 10.0 * tol.opinion * std::max(1.0, y0.cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::NoConvergence, "consensus value disagrees with zeta^T y0 by " +
                                              format_number(out.crosscheck_error));
  }
  return out;
}

PowerVector appraisal_step_via_zeta(const PowerVector& x, const InteractionMatrix& c,
                                    const Tolerances& tol) {
  if (x.is_vertex()) return x;
  const Matrix w = build_w(x, c);
  const auto z = power_iterate_left(w, {tol.zeta, tol.opinion_max_iters, 0.0});
  return PowerVector::from_values(z.gamma);
}

}  // namespace dfpower
