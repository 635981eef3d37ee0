#include "dfpower/topology.hpp"

#include "dfpower/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace dfpower {

namespace {

std::string entry_name(Index i, Index j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

// Lemire's multiply-high reduction of a 64-bit draw onto [0, range).
Index reduce(std::uint64_t draw, Index range) {
  const auto wide = static_cast<unsigned __int128>(draw) *
                    static_cast<unsigned __int128>(range);
  return static_cast<Index>(wide >> 64);
}

}  // namespace

InteractionMatrix InteractionMatrix::validate(const Matrix& raw,
                                              const Tolerances& tol) {
  if (raw.rows() != raw.cols()) {
    throw Error(ErrorKind::NotSquare, "matrix is " + std::to_string(raw.rows()) +
                                          "x" + std::to_string(raw.cols()));
  }
  const Index n = raw.rows();
  if (n < 3) {
    throw Error(ErrorKind::DimensionTooSmall,
                "n = " + std::to_string(n) + ", need n >= 3");
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (!std::isfinite(raw(i, j))) {
        throw Error(ErrorKind::NonFinite, "entry " + entry_name(i, j));
      }
      if (raw(i, j) < 0.0) {
        throw Error(ErrorKind::NegativeEntry, "entry " + entry_name(i, j));
      }
    }
  }
  for (Index i = 0; i < n; ++i) {
    if (raw(i, i) != 0.0) {
      throw Error(ErrorKind::NonzeroDiagonal,
                  "diagonal entry " + entry_name(i, i) + " = " +
                      format_number(raw(i, i)));
    }
  }
  for (Index i = 0; i < n; ++i) {
    const double sum = raw.row(i).sum();
    if (std::abs(sum - 1.0) > tol.row_sum) {
      throw Error(ErrorKind::RowSumError,
                  "row " + std::to_string(i + 1) + " sums to " + format_number(sum));
    }
  }
  if (!is_irreducible(raw, tol.structural_zero)) {
    throw Error(ErrorKind::Reducible, "support graph is not strongly connected");
  }
  return InteractionMatrix(raw);
}

ComponentLabels strongly_connected_components(const Matrix& m,
                                              double structural_zero) {
  const Index n = m.rows();
  // Edge j -> i when i places weight on j. Reversing every edge leaves the
  // components unchanged, so iterate over out-neighbours of j as column j.
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && m(i, j) > structural_zero) out[j].push_back(i);
    }
  }

  // Iterative Tarjan.
  constexpr Index kUnvisited = -1;
  std::vector<Index> order(n, kUnvisited), low(n, 0), next_edge(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Index> stack, call;
  ComponentLabels result;
  result.label.assign(n, kUnvisited);
  Index counter = 0;

  for (Index root = 0; root < n; ++root) {
    if (order[root] != kUnvisited) continue;
    call.push_back(root);
    while (!call.empty()) {
      const Index v = call.back();
      if (order[v] == kUnvisited) {
        order[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      const auto& edges = out[v];
      if (next_edge[v] < static_cast<Index>(edges.size())) {
        const Index w = edges[next_edge[v]++];
        if (order[w] == kUnvisited) {
          call.push_back(w);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      call.pop_back();
      if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
      if (low[v] == order[v]) {
        Index w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          result.label[w] = result.count;
        } while (w != v);
        ++result.count;
      }
    }
  }
  return result;
}

bool is_irreducible(const Matrix& m, double structural_zero) {
  if (m.rows() == 0 || m.rows() != m.cols()) return false;
  return strongly_connected_components(m, structural_zero).count == 1;
}

StarClassification classify_star(const InteractionMatrix& c, const Tolerances& tol) {
  const Matrix& m = c.entries();
  const Index n = c.size();
  std::optional<std::pair<Index, Index>> first;
  for (Index i = 0; i < n && !first; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && m(i, j) > tol.structural_zero) {
        first = {i, j};
        break;
      }
    }
  }
  if (!first) return {};

  // Any center must be an endpoint of the first edge found.
  for (Index candidate : {first->first, first->second}) {
    bool all_touch = true;
    for (Index i = 0; i < n && all_touch; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (i != j && m(i, j) > tol.structural_zero && i != candidate &&
            j != candidate) {
          all_touch = false;
          break;
        }
      }
    }
    if (all_touch) return {true, candidate};
  }
  return {};
}

DominantLeftEigenvector power_iterate_left(const Matrix& m,
                                           const PowerIterationOptions& opts) {
  const Index n = m.rows();
  const double theta = opts.damping;
  Eigen::RowVectorXd g = Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::RowVectorXd next(n);
  for (long it = 0; it <= opts.max_iters; ++it) {
    next.noalias() = g * m;
    const double residual = (next - g).lpNorm<1>();
    if (residual <= opts.tol) {
      DominantLeftEigenvector out;
      out.gamma = g.transpose();
      out.residual = residual;
      out.iterations = it;
      out.damped = theta > 0.0;
      return out;
    }
    if (theta > 0.0) next = (1.0 - theta) * g + theta * next;
    g = next / next.sum();
  }
  throw Error(ErrorKind::NoConvergence,
              "power iteration did not reach " + format_number(opts.tol) +
                  " within " + std::to_string(opts.max_iters) + " iterations");
}

DominantLeftEigenvector dominant_left_eigenvector(const InteractionMatrix& c,
                                                  const Tolerances& tol) {
  PowerIterationOptions opts{tol.eigenvector, tol.eigenvector_max_iters, 0.0};
  try {
    return power_iterate_left(c.entries(), opts);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoConvergence) throw;
  }
  opts.damping = tol.damping;
  return power_iterate_left(c.entries(), opts);
}

Index periodic_phase(Index s, Index period) {
  return s == 0 ? period : ((s - 1) % period) + 1;
}

TopologyProgram::TopologyProgram(std::vector<InteractionMatrix> matrices,
                                 SwitchingSignal signal)
    : matrices_(std::move(matrices)), signal_(std::move(signal)) {
  if (matrices_.empty()) {
    throw Error(ErrorKind::InvalidSignal, "program has no matrices");
  }
  const Index n = matrices_.front().size();
  for (const auto& c : matrices_) {
    if (c.size() != n) {
      throw Error(ErrorKind::DimensionMismatch,
                  "matrices in one program must share n = " + std::to_string(n));
    }
  }
  const Index count = size();
  auto check = [count](Index p) {
    if (p < 0 || p >= count) {
      throw Error(ErrorKind::InvalidSignal,
                  "signal references matrix " + std::to_string(p + 1) + " of " +
                      std::to_string(count));
    }
  };
  std::visit(
      [&](const auto& sig) {
        using T = std::decay_t<decltype(sig)>;
        if constexpr (std::is_same_v<T, ConstantSignal>) {
          check(sig.index);
        } else if constexpr (std::is_same_v<T, PeriodicSignal>) {
          if (sig.order.empty()) throw Error(ErrorKind::InvalidSignal, "empty periodic order");
          for (Index p : sig.order) check(p);
        } else if constexpr (std::is_same_v<T, ScriptedSignal>) {
          if (sig.sequence.empty()) throw Error(ErrorKind::InvalidSignal, "empty scripted sequence");
          for (Index p : sig.sequence) check(p);
        }
      },
      signal_);

  gammas_.reserve(matrices_.size());
  for (const auto& c : matrices_) gammas_.push_back(dominant_left_eigenvector(c).gamma);
}

Index TopologyProgram::index_at(Index s) const {
  return std::visit(
      [&](const auto& sig) -> Index {
        using T = std::decay_t<decltype(sig)>;
        if constexpr (std::is_same_v<T, ConstantSignal>) {
          return sig.index;
        } else if constexpr (std::is_same_v<T, PeriodicSignal>) {
          const auto period = static_cast<Index>(sig.order.size());
          return sig.order[periodic_phase(s, period) - 1];
        } else if constexpr (std::is_same_v<T, ScriptedSignal>) {
          const auto last = static_cast<Index>(sig.sequence.size()) - 1;
          return sig.sequence[std::min(s, last)];
        } else {
          std::mt19937_64 engine(sig.seed);
          engine.discard(static_cast<unsigned long long>(s));
          return reduce(engine(), size());
        }
      },
      signal_);
}

std::vector<Index> TopologyProgram::realize(Index count) const {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(count));
  if (const auto* random = std::get_if<RandomSignal>(&signal_)) {
    std::mt19937_64 engine(random->seed);
    for (Index s = 0; s < count; ++s) out.push_back(reduce(engine(), size()));
    return out;
  }
  for (Index s = 0; s < count; ++s) out.push_back(index_at(s));
  return out;
}

TopologyProgram TopologyProgram::with_signal(SwitchingSignal signal) const {
  return TopologyProgram(matrices_, std::move(signal));
}

Vector max_gamma_profile(const TopologyProgram& program) {
  Vector profile = program.gammas().front();
  for (const auto& g : program.gammas()) profile = profile.cwiseMax(g);
  return profile;
}

}  // namespace dfpower
