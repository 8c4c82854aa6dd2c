#pragma once

// Shor SDP relaxation of a homogeneous QCQP, numerical rank, and rank-1
// optimizer extraction.

#include <optional>

#include "qcqp_model.hpp"
#include "sdp_solver.hpp"

namespace biparsdp {

inline SdpProblem build_relaxation(const QcqpInstance& inst) {
  SdpProblem prob;
  prob.c = inst.objective;
  prob.b = inst.rhs();
  for (const auto& c : inst.constraints) prob.a.push_back(c.matrix);
  return prob;
}

/// Eigenvalues above rank_tol * max(lambda_max, 1).
inline int numerical_rank(const SymMatrix& x, double rank_tol = 1e-6) {
  if (x.rows() == 0) return 0;
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(x, Eigen::EigenvaluesOnly).eigenvalues();
  const double threshold = rank_tol * std::max(ev.maxCoeff(), 1.0);
  return static_cast<int>((ev.array() > threshold).count());
}

/// sqrt(lambda_1) v_1, signed so the first nonzero coordinate is positive.
/// Throws unless the numerical rank is exactly one.
inline Vector extract_rank1(const SymMatrix& x, double rank_tol = 1e-6) {
  const int rank = numerical_rank(x, rank_tol);
  if (rank != 1) throw Error("rank-1 extraction needs numerical rank 1, got " + std::to_string(rank));
  Eigen::SelfAdjointEigenSolver<Matrix> es(x);
  const Eigen::Index top = x.rows() - 1;
  Vector v = std::sqrt(es.eigenvalues()(top)) * es.eigenvectors().col(top);
  const double cutoff = 1e-12 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > cutoff) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  return v;
}

/// ||X S(y)||_F with S(y) = Q^0 + sum y_p Q^p.
inline double complementarity_residual(const QcqpInstance& inst, const SymMatrix& x, const Vector& y) {
  if (x.rows() != inst.n() || y.size() != inst.m()) throw Error("dimension mismatch in complementarity residual");
  return (x * dual_slack(inst, y)).norm();
}

struct RelaxationResult {
  SolveStatus status = SolveStatus::NumericalLimit;
  SymMatrix x_star;
  Vector y_star;
  SymMatrix s_of_y;
  double primal_value = 0.0;
  double dual_value = 0.0;
  int numeric_rank = 0;
  std::optional<Vector> x;
  /// x'Q^0x - <Q^0, X> (signed); zero unless x was extracted.
  double gap = 0.0;
  Residuals residuals;
  double rank_tol = 1e-6;
  std::string message;
};

inline RelaxationResult solve_relaxation(const QcqpInstance& inst, const SolverSettings& settings = {},
                                         double rank_tol = 1e-6) {
  const SdpSolution sol = solve(build_relaxation(inst), settings);
  RelaxationResult r;
  r.status = sol.status;
  r.x_star = sol.x;
  r.y_star = sol.y;
  r.s_of_y = dual_slack(inst, sol.y);
  r.primal_value = sol.primal_obj;
  r.dual_value = sol.dual_obj;
  r.residuals = sol.residuals;
  r.rank_tol = rank_tol;
  r.message = sol.message;
  if (sol.status != SolveStatus::Optimal) return r;

  r.numeric_rank = numerical_rank(r.x_star, rank_tol);
  if (r.numeric_rank == 1) {
    r.x = extract_rank1(r.x_star, rank_tol);
  } else if (r.numeric_rank == 0) {
    r.x = Vector::Zero(inst.n());
  }
  if (r.x) r.gap = evaluate_quadratic(inst.objective, *r.x) - inst.objective.cwiseProduct(r.x_star).sum();
  return r;
}

}  // namespace biparsdp
