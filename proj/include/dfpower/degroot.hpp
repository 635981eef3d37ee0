#pragma once

#include "dfpower/dynamics.hpp"
#include "dfpower/topology.hpp"

namespace dfpower {

/// Full-model route to x(s+1): build W(s) = X + (I - X) C, run the opinion
/// iteration to consensus and take the left Perron vector zeta of W.
/// Independent of the reduced map and kept as its oracle.

Matrix build_w(const PowerVector& x, const InteractionMatrix& c);

struct ConsensusResult {
  Vector zeta;
  double consensus_value = 0.0;  // limit of every y_i
  Vector y_final;
  long iterations = 0;           // opinion iterations
  long zeta_iterations = 0;
  double crosscheck_error = 0.0;  // |consensus_value - zeta^T y0|
};

/// Iterates y <- W y until max_i y_i - min_i y_i <= tol.opinion. Throws
/// NoConvergence when W does not mix (e.g. x = 0 on a permutation C) or when
/// the consensus value and zeta^T y0 differ by more than 10 tol.opinion.
ConsensusResult opinion_consensus(const Matrix& w, const Vector& y0,
                                  const Tolerances& tol = default_tolerances());

/// zeta of build_w(x, c); tagged vertices short-circuit to themselves.
PowerVector appraisal_step_via_zeta(const PowerVector& x, const InteractionMatrix& c,
                                    const Tolerances& tol = default_tolerances());

}  // namespace dfpower
