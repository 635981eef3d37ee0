#pragma once

#include "dfpower/error.hpp"
#include "dfpower/program_io.hpp"
#include "dfpower/topology.hpp"

#include <Eigen/Eigenvalues>

#include <filesystem>
#include <queue>
#include <string>

namespace testing {

using dfpower::Index;
using dfpower::Matrix;
using dfpower::Vector;

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(DFPOWER_DATA_DIR) / name;
}

inline dfpower::TopologyProgram load(const std::string& name) {
  return dfpower::load_program(data_path(name));
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Vector uniform(Index n) { return Vector::Constant(n, 1.0 / static_cast<double>(n)); }

// 3-node star centred on node 1: the centre splits trust evenly, the others
// trust only the centre.
inline Matrix star3() {
  Matrix c(3, 3);
  c << 0, 0.5, 0.5,
       1, 0, 0,
       1, 0, 0;
  return c;
}

// Directed n-cycle i -> i+1: doubly stochastic and periodic.
inline Matrix cycle(Index n) {
  Matrix c = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) c(i, (i + 1) % n) = 1.0;
  return c;
}

// Off-diagonal uniform (J - I)/(n - 1).
inline Matrix complete(Index n) {
  Matrix c = Matrix::Constant(n, n, 1.0 / static_cast<double>(n - 1));
  c.diagonal().setZero();
  return c;
}

// Oracle for irreducibility: breadth-first reachability from every node.
inline bool reachable_everywhere(const Matrix& m) {
  const Index n = m.rows();
  for (Index src = 0; src < n; ++src) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::queue<Index> q;
    q.push(src);
    seen[static_cast<std::size_t>(src)] = true;
    Index count = 1;
    while (!q.empty()) {
      const Index u = q.front();
      q.pop();
      for (Index v = 0; v < n; ++v) {
        if (u != v && m(u, v) > 1e-15 && !seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          ++count;
          q.push(v);
        }
      }
    }
    if (count != n) return false;
  }
  return true;
}

// Oracle for the left Perron vector: dense eigen-solve of C^T, eigenvalue
// closest to 1, normalised to sum 1.
inline Vector dense_left_perron(const Matrix& c) {
  Eigen::EigenSolver<Matrix> es(c.transpose());
  Index best = 0;
  for (Index k = 1; k < c.rows(); ++k) {
    if (std::abs(es.eigenvalues()(k) - 1.0) < std::abs(es.eigenvalues()(best) - 1.0)) best = k;
  }
  Vector v = es.eigenvectors().col(best).real();
  return v / v.sum();
}

// Reduced map evaluated straight from its definition, without alpha.
inline Vector map_by_definition(const Vector& x, const Vector& gamma) {
  Vector w(x.size());
  for (Index i = 0; i < x.size(); ++i) w(i) = gamma(i) / (1.0 - x(i));
  return w / w.sum();
}

template <class F>
dfpower::ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const dfpower::Error& e) {
    return e.kind();
  }
  throw std::logic_error("expected a dfpower::Error");
}

}  // namespace testing
