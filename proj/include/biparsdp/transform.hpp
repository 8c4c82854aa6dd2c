#pragma once

// Structure-changing transformations of a QCQP:
//
//   * sign splitting: a QCQP whose off-diagonal entries are sign-definite per
//     edge becomes a 2n-variable QCQP with nonnegative off-diagonals by
//     introducing z = -x and the constraint ||x + z||^2 <= 0;
//   * objective perturbations Q^0 + eps P with P a negative graph Laplacian,
//     either over edges that chain the connected components together or over
//     the whole aggregated sparsity graph.

#include <sstream>
#include <string>
#include <vector>

#include "qcqp_model.hpp"
#include "sparsity_graph.hpp"

namespace biparsdp {

struct TransformResult {
  QcqpInstance transformed;  // 2n variables, m + 1 constraints
  double delta = 1.0;
  int original_n = 0;

  /// Variables original_n..2*original_n-1 hold z = -x; the last constraint
  /// is ||x + z||^2 <= 0.
  std::string mapping() const {
    std::ostringstream os;
    os << "variables " << original_n + 1 << ".." << 2 * original_n << " represent z = -x; constraint "
       << transformed.m() << " is ||x + z||^2 <= 0 (rhs 0)";
    return os.str();
  }
};

/// Splits Q^p = D^p + 2N^p_+ - 2N^p_- and assembles
/// [D^p + 2N^p_+, N^p_-; N^p_-, O] with D^p_ii = Q^p_ii + 2 delta and
/// [N^p_-]_ii = delta. Throws on an edge with mixed signs.
inline TransformResult sign_split_transform(const QcqpInstance& inst, double delta = 1.0) {
  if (!(delta > 0.0)) throw Error("delta must be positive");
  const int n = inst.n();
  const SparsityGraph g = build_graph(inst);
  for (const Edge& e : g.edges()) {
    if (edge_sign(inst, e.first, e.second) == 0) {
      throw Error("edge (" + std::to_string(e.first + 1) + "," + std::to_string(e.second + 1) +
                  ") has mixed signs across the data matrices; sign splitting is undefined");
    }
  }

  auto split = [n, delta](const SymMatrix& q) {
    SymMatrix upper_left = SymMatrix::Zero(n, n);
    SymMatrix off = SymMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      upper_left(i, i) = q(i, i) + 2.0 * delta;
      off(i, i) = delta;
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (q(i, j) > 0.0) upper_left(i, j) = q(i, j);
        if (q(i, j) < 0.0) off(i, j) = -0.5 * q(i, j);
      }
    }
    SymMatrix out = SymMatrix::Zero(2 * n, 2 * n);
    out.topLeftCorner(n, n) = upper_left;
    out.topRightCorner(n, n) = off;
    out.bottomLeftCorner(n, n) = off;
    return out;
  };

  TransformResult r;
  r.delta = delta;
  r.original_n = n;
  r.transformed.objective = split(inst.objective);
  for (const auto& c : inst.constraints) r.transformed.constraints.push_back({split(c.matrix), c.rhs});
  SymMatrix coupling(2 * n, 2 * n);
  coupling << SymMatrix::Identity(n, n), SymMatrix::Identity(n, n), SymMatrix::Identity(n, n),
      SymMatrix::Identity(n, n);
  r.transformed.constraints.push_back({coupling, 0.0});
  return r;
}

/// Returns the first half of x_tilde after checking ||x + z|| <= tol (1 + ||x||).
inline Vector recover_from_transformed(const Vector& x_tilde, double tol = 1e-6) {
  if (x_tilde.size() == 0 || x_tilde.size() % 2 != 0) throw Error("transformed vector must have even length 2n");
  const Eigen::Index n = x_tilde.size() / 2;
  const Vector x = x_tilde.head(n);
  const Vector z = x_tilde.tail(n);
  if ((x + z).norm() > tol * (1.0 + x.norm())) throw Error("coupling violated: z != -x");
  return x;
}

enum class PerturbationKind { Connecting, FullGraph };

struct PerturbedInstance {
  QcqpInstance instance;  // objective Q^0 + epsilon P
  double epsilon = 0.0;
  SymMatrix p;
  std::vector<Edge> connecting_edges;  // F; empty for the full-graph variant
  PerturbationKind kind = PerturbationKind::Connecting;
};

/// Negative Laplacian of (V, edges): -deg(i) on the diagonal, +1 on edges.
inline SymMatrix negative_laplacian(int n, const std::vector<Edge>& edges) {
  SymMatrix p = SymMatrix::Zero(n, n);
  for (const Edge& e : edges) {
    p(e.first, e.second) = 1.0;
    p(e.second, e.first) = 1.0;
    p(e.first, e.first) -= 1.0;
    p(e.second, e.second) -= 1.0;
  }
  return p;
}

/// Chains the components through their smallest vertices u_1, ..., u_L with
/// F = {(u_i, u_{i+1})} and perturbs by the negative Laplacian of (V, F).
inline PerturbedInstance build_connecting_perturbation(const QcqpInstance& inst, double epsilon,
                                                       double zero_tol = 0.0) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  const auto comps = connected_components(build_graph(inst, zero_tol));
  if (comps.size() < 2) throw Error("graph has a single connected component; nothing to connect");
  PerturbedInstance out;
  out.kind = PerturbationKind::Connecting;
  out.epsilon = epsilon;
  for (size_t i = 0; i + 1 < comps.size(); ++i) out.connecting_edges.emplace_back(comps[i].front(), comps[i + 1].front());
  out.p = negative_laplacian(inst.n(), out.connecting_edges);
  out.instance = inst;
  out.instance.objective += epsilon * out.p;
  return out;
}

inline PerturbedInstance build_full_graph_perturbation(const QcqpInstance& inst, double epsilon,
                                                       double zero_tol = 0.0) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  const SparsityGraph g = build_graph(inst, zero_tol);
  if (g.edges().empty()) throw Error("no edges to perturb");
  PerturbedInstance out;
  out.kind = PerturbationKind::FullGraph;
  out.epsilon = epsilon;
  out.p = negative_laplacian(inst.n(), g.edges());
  out.instance = inst;
  out.instance.objective += epsilon * out.p;
  return out;
}

}  // namespace biparsdp
