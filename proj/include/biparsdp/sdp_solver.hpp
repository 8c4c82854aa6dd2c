#pragma once

// Dense primal-dual interior-point solver for small SDPs with one PSD block
// and one nonnegative-orthant block.
//
// Standard form (block-diagonal X, Z):
//
//   (primal)  min <C, X>   s.t. <A_i, X> = b_i,  X >= 0
//   (dual)    max b'y      s.t. Z = C - sum_i y_i A_i >= 0
//
// Search direction: HKM (X Z^{-1} scaling) with a Mehrotra predictor-corrector.
// Infeasible start; separate primal and dual step lengths.
//
// Two front ends sit on top:
//   * SdpProblem: inequality form  min <C,X> s.t. <A_p,X> <= b_p, X >= 0,
//     the shape of the Shor relaxation. Constraints that force X onto a proper
//     face (A_p >= 0, b_p = 0) are eliminated before the solve.
//   * LmiProblem: max c'y s.t. F0 + sum y_i F_i >= 0, g0 + G y >= 0, the
//     shape of the dual-cone subproblems (edge functionals, eigenvalue
//     combinations, phase one).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qcqp_model.hpp"

namespace biparsdp {

enum class SolveStatus { Optimal, PrimalInfeasible, DualInfeasible, NumericalLimit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::PrimalInfeasible: return "PrimalInfeasible";
    case SolveStatus::DualInfeasible: return "DualInfeasible";
    case SolveStatus::NumericalLimit: return "NumericalLimit";
  }
  return "Unknown";
}

struct SolverSettings {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  double infeas_tol = 1e-8;
  int max_iterations = 250;
  double step_fraction = 0.95;
};

/// Block pair (dense PSD block, diagonal LP block); either may be empty.
struct BlockMatrix {
  Matrix psd;
  Vector lp;

  static BlockMatrix zero(int n, int k) { return {Matrix::Zero(n, n), Vector::Zero(k)}; }
  static BlockMatrix identity(int n, int k) { return {Matrix::Identity(n, n), Vector::Ones(k)}; }

  double dot(const BlockMatrix& o) const { return psd.cwiseProduct(o.psd).sum() + lp.dot(o.lp); }
  double norm() const { return std::sqrt(psd.squaredNorm() + lp.squaredNorm()); }

  BlockMatrix& operator+=(const BlockMatrix& o) {
    psd += o.psd;
    lp += o.lp;
    return *this;
  }
  friend BlockMatrix operator+(BlockMatrix a, const BlockMatrix& b) { return a += b; }
  friend BlockMatrix operator-(const BlockMatrix& a, const BlockMatrix& b) { return {a.psd - b.psd, a.lp - b.lp}; }
  friend BlockMatrix operator*(double s, const BlockMatrix& a) { return {s * a.psd, s * a.lp}; }
};

struct ConicProblem {
  BlockMatrix c;
  std::vector<BlockMatrix> a;
  Vector b;

  int psd_dim() const { return static_cast<int>(c.psd.rows()); }
  int lp_dim() const { return static_cast<int>(c.lp.size()); }
  int num_constraints() const { return static_cast<int>(a.size()); }
};

struct Residuals {
  double primal = 0.0;           // ||b - A(X)|| / (1 + ||b||)
  double dual = 0.0;             // ||C - A^T y - Z|| / (1 + ||C||)
  double complementarity = 0.0;  // <X, Z>
  double gap = 0.0;              // |pobj - dobj| / (1 + |pobj|)
};

struct ConicSolution {
  SolveStatus status = SolveStatus::NumericalLimit;
  BlockMatrix x;
  Vector y;
  BlockMatrix z;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  Residuals residuals;
  int iterations = 0;
  std::string message;
};

namespace detail {

inline BlockMatrix apply_adjoint(const ConicProblem& prob, const Vector& y) {
  BlockMatrix out = BlockMatrix::zero(prob.psd_dim(), prob.lp_dim());
  for (int i = 0; i < prob.num_constraints(); ++i) {
    if (y(i) != 0.0) out += y(i) * prob.a[static_cast<size_t>(i)];
  }
  return out;
}

inline Vector apply_operator(const ConicProblem& prob, const BlockMatrix& x) {
  Vector out(prob.num_constraints());
  for (int i = 0; i < prob.num_constraints(); ++i) out(i) = prob.a[static_cast<size_t>(i)].dot(x);
  return out;
}

inline Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

/// Largest alpha in (0, inf] with x + alpha*dx >= 0 (returns inf when never
/// blocked). Returns a negative number when x itself is not PD.
inline double max_step(const BlockMatrix& x, const BlockMatrix& dx) {
  double alpha = std::numeric_limits<double>::infinity();
  if (x.psd.rows() > 0) {
    Eigen::LLT<Matrix> llt(x.psd);
    if (llt.info() != Eigen::Success) return -1.0;
    const Matrix l_inv = llt.matrixL().solve(Matrix::Identity(x.psd.rows(), x.psd.cols()));
    const Matrix w = symmetrize(l_inv * dx.psd * l_inv.transpose());
    const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(w, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  for (Eigen::Index i = 0; i < x.lp.size(); ++i) {
    if (x.lp(i) <= 0.0) return -1.0;
    if (dx.lp(i) < 0.0) alpha = std::min(alpha, -x.lp(i) / dx.lp(i));
  }
  return alpha;
}

}  // namespace detail

inline ConicSolution solve_conic(const ConicProblem& prob, const SolverSettings& settings = {}) {
  using detail::apply_adjoint;
  using detail::apply_operator;
  using detail::symmetrize;

  const int n = prob.psd_dim();
  const int k = prob.lp_dim();
  const int m = prob.num_constraints();
  const double dim = static_cast<double>(n + k);

  ConicSolution sol;
  if (n + k == 0) {
    sol.message = "empty cone";
    return sol;
  }

  // Scaled-identity starting point.
  double max_a_norm = 0.0;
  double primal_scale = 0.0;
  for (int i = 0; i < m; ++i) {
    const double an = prob.a[static_cast<size_t>(i)].norm();
    max_a_norm = std::max(max_a_norm, an);
    primal_scale = std::max(primal_scale, (1.0 + std::abs(prob.b(i))) / (1.0 + an));
  }
  const double sqrt_dim = std::sqrt(dim);
  const double xi = std::max({10.0, sqrt_dim, dim * primal_scale});
  const double eta = std::max({10.0, sqrt_dim, prob.c.norm(), max_a_norm});

  BlockMatrix x = xi * BlockMatrix::identity(n, k);
  BlockMatrix z = eta * BlockMatrix::identity(n, k);
  Vector y = Vector::Zero(m);

  const double b_norm = prob.b.norm();
  const double c_norm = prob.c.norm();
  int stalls = 0;

  for (int iter = 0;; ++iter) {
    sol.iterations = iter;
    const Vector rp = prob.b - apply_operator(prob, x);
    const BlockMatrix rd = prob.c - apply_adjoint(prob, y) - z;
    const double xz = x.dot(z);
    const double mu = xz / dim;
    const double pobj = prob.c.dot(x);
    const double dobj = prob.b.dot(y);

    sol.x = x;
    sol.y = y;
    sol.z = z;
    sol.primal_obj = pobj;
    sol.dual_obj = dobj;
    sol.residuals.primal = rp.norm() / (1.0 + b_norm);
    sol.residuals.dual = rd.norm() / (1.0 + c_norm);
    sol.residuals.complementarity = xz;
    sol.residuals.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));

    const bool feasible = sol.residuals.primal <= settings.feas_tol && sol.residuals.dual <= settings.feas_tol;
    const double xz_norm = std::hypot((x.psd * z.psd).norm(), x.lp.cwiseProduct(z.lp).norm());
    const bool gap_closed = sol.residuals.gap <= settings.gap_tol &&
                            xz <= settings.gap_tol * (1.0 + std::abs(pobj) + std::abs(dobj)) &&
                            xz_norm <= settings.gap_tol * (1.0 + std::abs(pobj) + std::abs(dobj));
    if (feasible && gap_closed) {
      sol.status = SolveStatus::Optimal;
      return sol;
    }

    // Infeasibility certificates from diverging iterates.
    if (dobj > 0.0 && (prob.c - rd).norm() / dobj <= settings.infeas_tol) {
      sol.status = SolveStatus::PrimalInfeasible;
      sol.message = "dual improving ray: b'y > 0 with -A^T y approximately PSD";
      return sol;
    }
    if (pobj < 0.0 && (prob.b - rp).norm() / -pobj <= settings.infeas_tol) {
      sol.status = SolveStatus::DualInfeasible;
      sol.message = "primal improving ray: <C,X> < 0 with A(X) approximately 0";
      return sol;
    }

    if (iter >= settings.max_iterations) {
      sol.message = "iteration limit reached";
      return sol;
    }

    // Z^{-1} and the Schur complement M_ij = <A_i, X A_j Z^{-1}>.
    Matrix z_inv;
    if (n > 0) {
      Eigen::LLT<Matrix> zllt(z.psd);
      if (zllt.info() != Eigen::Success) {
        sol.message = "dual slack lost definiteness";
        return sol;
      }
      z_inv = symmetrize(zllt.solve(Matrix::Identity(n, n)));
    } else {
      z_inv = Matrix::Zero(0, 0);
    }
    const Vector z_inv_lp = z.lp.cwiseInverse();

    Matrix schur(m, m);
    std::vector<BlockMatrix> xaz(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
      const BlockMatrix& aj = prob.a[static_cast<size_t>(j)];
      xaz[static_cast<size_t>(j)] = {x.psd * aj.psd * z_inv, x.lp.cwiseProduct(aj.lp).cwiseProduct(z_inv_lp)};
    }
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        const double v = prob.a[static_cast<size_t>(i)].dot(xaz[static_cast<size_t>(j)]);
        schur(i, j) = v;
        schur(j, i) = v;
      }
    }
    Eigen::LLT<Matrix> schur_llt(schur);
    Eigen::LDLT<Matrix> schur_ldlt;
    const bool use_llt = schur_llt.info() == Eigen::Success;
    if (!use_llt) {
      schur_ldlt.compute(schur);
      if (schur_ldlt.info() != Eigen::Success) {
        sol.message = "Schur complement factorization failed";
        return sol;
      }
    }
    auto schur_solve = [&](const Vector& rhs) -> Vector {
      return use_llt ? Vector(schur_llt.solve(rhs)) : Vector(schur_ldlt.solve(rhs));
    };

    // X Rd Z^{-1} term shared by both solves.
    const BlockMatrix x_rd_zinv{x.psd * rd.psd * z_inv, x.lp.cwiseProduct(rd.lp).cwiseProduct(z_inv_lp)};
    const Vector a_x_rd_zinv = apply_operator(prob, x_rd_zinv);

    // Direction for complementarity target rc: dX Z + X dZ = rc.
    // g = rc Z^{-1};  M dy = rp - A(g) + A(X Rd Z^{-1});  dZ = Rd - A^T dy;
    // dX = g - X dZ Z^{-1} (symmetrized).
    auto direction = [&](const BlockMatrix& g, BlockMatrix& dx, Vector& dy, BlockMatrix& dz) {
      dy = schur_solve(rp - apply_operator(prob, g) + a_x_rd_zinv);
      dz = rd - apply_adjoint(prob, dy);
      dx.psd = symmetrize(g.psd - x.psd * dz.psd * z_inv);
      dx.lp = g.lp - x.lp.cwiseProduct(dz.lp).cwiseProduct(z_inv_lp);
    };

    // Predictor (affine scaling): rc = -XZ, so g = -X.
    BlockMatrix dx_aff, dz_aff;
    Vector dy_aff;
    direction(-1.0 * x, dx_aff, dy_aff, dz_aff);
    const double ap_aff = std::min(1.0, detail::max_step(x, dx_aff));
    const double ad_aff = std::min(1.0, detail::max_step(z, dz_aff));
    if (ap_aff < 0.0 || ad_aff < 0.0) {
      sol.message = "iterate left the cone";
      return sol;
    }
    const double mu_aff = (x + ap_aff * dx_aff).dot(z + ad_aff * dz_aff) / dim;
    // Raise the centering floor once ||XZ|| drifts far from mu*sqrt(dim).
    const double off_center = xz_norm / (mu * std::sqrt(dim));
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), off_center > 10.0 ? 0.3 : 0.0, 1.0);

    // Corrector: rc = sigma mu I - XZ - dXa dZa.
    BlockMatrix g;
    if (n > 0) {
      g.psd = sigma * mu * z_inv - x.psd - dx_aff.psd * dz_aff.psd * z_inv;
    } else {
      g.psd = Matrix::Zero(0, 0);
    }
    g.lp = sigma * mu * z_inv_lp - x.lp - dx_aff.lp.cwiseProduct(dz_aff.lp).cwiseProduct(z_inv_lp);
    BlockMatrix dx, dz;
    Vector dy;
    direction(g, dx, dy, dz);

    const double ap_max = detail::max_step(x, dx);
    const double ad_max = detail::max_step(z, dz);
    if (ap_max < 0.0 || ad_max < 0.0) {
      sol.message = "iterate left the cone";
      return sol;
    }
    const double ap = std::min(1.0, settings.step_fraction * ap_max);
    const double ad = std::min(1.0, settings.step_fraction * ad_max);

    if (ap < 1e-10 && ad < 1e-10) {
      if (++stalls >= 3) {
        sol.message = "step sizes collapsed";
        return sol;
      }
    } else {
      stalls = 0;
    }

    x = x + ap * dx;
    x.psd = symmetrize(x.psd);
    y += ad * dy;
    z = z + ad * dz;
    z.psd = symmetrize(z.psd);
  }
}

// ---------------------------------------------------------------------------
// Inequality form: min <C,X> s.t. <A_p,X> <= b_p, X >= 0.

struct SdpProblem {
  SymMatrix c;
  std::vector<SymMatrix> a;
  Vector b;

  int n() const { return static_cast<int>(c.rows()); }
};

struct SdpSolution {
  SolveStatus status = SolveStatus::NumericalLimit;
  SymMatrix x;
  Vector y;      // multipliers, >= 0
  Vector slack;  // b - A(X), >= 0
  SymMatrix s;   // C + sum y_p A_p
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  Residuals residuals;
  int iterations = 0;
  std::string message;
};

namespace detail {

inline SdpSolution solve_inequality_form(const SdpProblem& prob, const SolverSettings& settings) {
  const int n = prob.n();
  const int m = static_cast<int>(prob.a.size());
  if (prob.b.size() != m) throw Error("dimension mismatch: |A| != |b|");
  for (const auto& a : prob.a) detail::check_square(a, n, "SDP constraint matrix");

  // <A_p, X> + s_p = b_p, (X, s) >= 0.  Standard-form dual multipliers are -y.
  ConicProblem conic;
  conic.c = {prob.c, Vector::Zero(m)};
  conic.b = prob.b;
  for (int p = 0; p < m; ++p) {
    Vector e = Vector::Zero(m);
    e(p) = 1.0;
    conic.a.push_back({prob.a[static_cast<size_t>(p)], e});
  }
  const ConicSolution cs = solve_conic(conic, settings);

  SdpSolution sol;
  sol.status = cs.status;
  sol.x = cs.x.psd;
  sol.slack = cs.x.lp;
  sol.y = -cs.y;
  sol.s = prob.c;
  for (int p = 0; p < m; ++p) sol.s += sol.y(p) * prob.a[static_cast<size_t>(p)];
  sol.primal_obj = cs.primal_obj;
  sol.dual_obj = cs.dual_obj;
  sol.residuals = cs.residuals;
  sol.iterations = cs.iterations;
  sol.message = cs.message;
  return sol;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// LMI form: max c'y s.t. F0 + sum_i y_i F_i >= 0,  g0 + G y >= 0.

struct LmiProblem {
  SymMatrix f0;
  std::vector<SymMatrix> f;
  Vector g0;
  Matrix g;  // rows = linear inequalities, cols = variables
  Vector c;

  int num_vars() const { return static_cast<int>(c.size()); }
};

struct LmiSolution {
  SolveStatus status = SolveStatus::NumericalLimit;
  Vector y;
  double value = 0.0;      // c'y at the returned point
  SymMatrix slack_matrix;  // F0 + sum y_i F_i
  Vector slack_linear;     // g0 + G y
  Residuals residuals;
  int iterations = 0;
  std::string message;
};

inline LmiSolution solve(const LmiProblem& prob, const SolverSettings& settings = {}) {
  const int nv = prob.num_vars();
  const int n = static_cast<int>(prob.f0.rows());
  const int k = static_cast<int>(prob.g0.size());
  if (static_cast<int>(prob.f.size()) != nv) throw Error("dimension mismatch: LMI needs one matrix per variable");
  if (k > 0 && (prob.g.rows() != k || prob.g.cols() != nv)) throw Error("dimension mismatch in linear inequalities");

  ConicProblem conic;
  conic.c = {prob.f0, prob.g0};
  conic.b = prob.c;
  for (int i = 0; i < nv; ++i) {
    conic.a.push_back({-prob.f[static_cast<size_t>(i)], k > 0 ? Vector(-prob.g.col(i)) : Vector::Zero(0)});
  }
  const ConicSolution cs = solve_conic(conic, settings);

  LmiSolution sol;
  sol.status = cs.status;
  sol.y = cs.y;
  sol.value = prob.c.dot(cs.y);
  sol.slack_matrix = prob.f0;
  for (int i = 0; i < nv; ++i) sol.slack_matrix += cs.y(i) * prob.f[static_cast<size_t>(i)];
  sol.slack_linear = k > 0 ? Vector(prob.g0 + prob.g * cs.y) : Vector::Zero(0);
  sol.residuals = cs.residuals;
  sol.iterations = cs.iterations;
  sol.message = cs.message;
  return sol;
}

// ---------------------------------------------------------------------------
// Facial reduction for the inequality form.

namespace detail {

struct Face {
  Matrix v;                  // X = V W V^T
  std::vector<bool> dropped;  // constraints implied by the face
};

/// A constraint <A_p, X> <= 0 with A_p >= 0 on the current face forces
/// A_p X = 0, so X lives on the null space of A_p. Repeats until no such
/// constraint remains.
inline Face reduce_face(const SdpProblem& prob) {
  const int m = static_cast<int>(prob.a.size());
  Face f{Matrix::Identity(prob.n(), prob.n()), std::vector<bool>(static_cast<size_t>(m), false)};
  bool changed = true;
  while (changed && f.v.cols() > 0) {
    changed = false;
    for (int p = 0; p < m && f.v.cols() > 0; ++p) {
      if (f.dropped[static_cast<size_t>(p)] || prob.b(p) != 0.0) continue;
      const SymMatrix& a = prob.a[static_cast<size_t>(p)];
      const double scale = 1e-10 * (1.0 + a.cwiseAbs().maxCoeff());
      Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(f.v.transpose() * a * f.v));
      if (es.eigenvalues()(0) < -scale) continue;
      std::vector<Eigen::Index> keep;
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()(i) <= scale) keep.push_back(i);
      }
      Matrix basis(es.eigenvectors().rows(), static_cast<Eigen::Index>(keep.size()));
      for (size_t i = 0; i < keep.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]);
      f.v = f.v * basis;
      f.dropped[static_cast<size_t>(p)] = true;
      changed = true;
    }
  }
  return f;
}

}  // namespace detail

/// Solves min <C,X> s.t. <A_p,X> <= b_p, X >= 0. Constraints that pin X to a
/// proper face are removed first; their multipliers are recovered afterwards
/// as a common value keeping S(y) PSD.
inline SdpSolution solve(const SdpProblem& prob, const SolverSettings& settings = {}) {
  const int n = prob.n();
  const int m = static_cast<int>(prob.a.size());
  if (prob.b.size() != m) throw Error("dimension mismatch: |A| != |b|");
  for (const auto& a : prob.a) detail::check_square(a, n, "SDP constraint matrix");

  const detail::Face face = detail::reduce_face(prob);
  if (face.v.cols() == n) return detail::solve_inequality_form(prob, settings);

  std::vector<int> kept, dropped;
  for (int p = 0; p < m; ++p) (face.dropped[static_cast<size_t>(p)] ? dropped : kept).push_back(p);
  const Matrix& v = face.v;

  SdpSolution sol;
  Vector y_kept = Vector::Zero(static_cast<Eigen::Index>(kept.size()));
  if (v.cols() > 0) {
    SdpProblem red;
    red.c = detail::symmetrize(v.transpose() * prob.c * v);
    red.b = Vector(static_cast<Eigen::Index>(kept.size()));
    for (size_t i = 0; i < kept.size(); ++i) {
      red.a.push_back(detail::symmetrize(v.transpose() * prob.a[static_cast<size_t>(kept[i])] * v));
      red.b(static_cast<Eigen::Index>(i)) = prob.b(kept[i]);
    }
    const SdpSolution rs = detail::solve_inequality_form(red, settings);
    sol.status = rs.status;
    sol.x = detail::symmetrize(v * rs.x * v.transpose());
    sol.primal_obj = rs.primal_obj;
    sol.dual_obj = rs.dual_obj;
    sol.residuals = rs.residuals;
    sol.iterations = rs.iterations;
    sol.message = rs.message;
    y_kept = rs.y;
  } else {
    // Only X = 0 remains.
    bool feasible = true;
    for (int p : kept) feasible = feasible && prob.b(p) >= 0.0;
    sol.status = feasible ? SolveStatus::Optimal : SolveStatus::PrimalInfeasible;
    sol.x = SymMatrix::Zero(n, n);
  }
  sol.y = Vector::Zero(m);
  for (size_t i = 0; i < kept.size(); ++i) sol.y(kept[i]) = y_kept(static_cast<Eigen::Index>(i));

  if (sol.status == SolveStatus::Optimal && !dropped.empty()) {
    // Each dropped A_d is PSD, so lambda_min(S_kept + tau sum A_d) is
    // nondecreasing in tau: bisect for the smallest tau reaching the
    // eigenvalue floor the reduced solve achieved on the face.
    SymMatrix s_kept = prob.c;
    for (int p : kept) s_kept += sol.y(p) * prob.a[static_cast<size_t>(p)];
    SymMatrix a_sum = SymMatrix::Zero(n, n);
    for (int p : dropped) a_sum += prob.a[static_cast<size_t>(p)];
    auto lmin = [](const Matrix& a) {
      return Eigen::SelfAdjointEigenSolver<Matrix>(a, Eigen::EigenvaluesOnly).eigenvalues()(0);
    };
    const double scale = 1.0 + s_kept.cwiseAbs().maxCoeff();
    const double face_floor = v.cols() > 0 ? lmin(detail::symmetrize(v.transpose() * s_kept * v)) : 0.0;
    const double target = std::min(0.0, face_floor) - std::sqrt(settings.feas_tol) * scale;
    const double cap = 1e6 * scale;
    double lo = 0.0, hi = 1.0;
    if (lmin(s_kept) < target) {
      while (hi < cap && lmin(s_kept + hi * a_sum) < target) hi *= 2.0;
      for (int it = 0; it < 100 && hi - lo > 1e-9 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (lmin(s_kept + mid * a_sum) < target ? lo : hi) = mid;
      }
    } else {
      hi = 0.0;
    }
    if (hi >= cap) sol.message += (sol.message.empty() ? "" : "; ") + std::string("face multipliers hit the cap");
    for (int p : dropped) sol.y(p) = hi;
  }

  sol.s = prob.c;
  for (int p = 0; p < m; ++p) sol.s += sol.y(p) * prob.a[static_cast<size_t>(p)];
  sol.slack = prob.b;
  for (int p = 0; p < m; ++p) sol.slack(p) -= prob.a[static_cast<size_t>(p)].cwiseProduct(sol.x).sum();
  return sol;
}

// ---------------------------------------------------------------------------
// Dual-cone subproblems over {y >= 0 : S(y) = Q^0 + sum y_p Q^p >= 0}.

inline SymMatrix dual_slack(const QcqpInstance& inst, const Vector& y) {
  SymMatrix s = inst.objective;
  for (int p = 0; p < inst.m(); ++p) s += y(p) * inst.constraints[static_cast<size_t>(p)].matrix;
  return s;
}

namespace detail {

/// y >= 0 and y <= cap as linear rows.
inline void add_box_rows(LmiProblem& lmi, int m, double cap) {
  lmi.g0 = Vector::Zero(2 * m);
  lmi.g = Matrix::Zero(2 * m, lmi.num_vars());
  for (int p = 0; p < m; ++p) {
    lmi.g(p, p) = 1.0;
    lmi.g0(m + p) = cap;
    lmi.g(m + p, p) = -1.0;
  }
}

}  // namespace detail

/// max t s.t. S(y) - t I >= 0, 0 <= y <= cap, t <= 1. Positive t means the
/// dual feasible set has an interior point inside the box.
struct DualPhaseOne {
  SolveStatus status = SolveStatus::NumericalLimit;
  double t = 0.0;
  Vector y;
};

inline DualPhaseOne dual_phase_one(const QcqpInstance& inst, double y_cap, const SolverSettings& settings = {}) {
  const int m = inst.m();
  const int n = inst.n();
  LmiProblem lmi;
  lmi.f0 = inst.objective;
  for (int p = 0; p < m; ++p) lmi.f.push_back(inst.constraints[static_cast<size_t>(p)].matrix);
  lmi.f.push_back(-SymMatrix::Identity(n, n));
  lmi.c = Vector::Zero(m + 1);
  lmi.c(m) = 1.0;
  detail::add_box_rows(lmi, m, y_cap);
  lmi.g0.conservativeResize(2 * m + 1);
  lmi.g.conservativeResize(2 * m + 1, m + 1);
  lmi.g.row(2 * m).setZero();
  lmi.g(2 * m, m) = -1.0;
  lmi.g0(2 * m) = 1.0;
  const LmiSolution s = solve(lmi, settings);
  return {s.status, s.y(m), s.y.head(m)};
}

enum class EdgeSense { Minimize, Maximize };

enum class EdgeStatus { Solved, DualSideEmpty, SolverFailure };

inline const char* to_string(EdgeStatus s) {
  switch (s) {
    case EdgeStatus::Solved: return "Solved";
    case EdgeStatus::DualSideEmpty: return "DualSideEmpty";
    case EdgeStatus::SolverFailure: return "SolverFailure";
  }
  return "Unknown";
}

struct EdgeFunctionalResult {
  EdgeStatus status = EdgeStatus::SolverFailure;
  double value = 0.0;
  /// False when the box y <= y_cap was active at the optimum; `value` is
  /// then only a bound on the true optimum over the unboxed set.
  bool attained = false;
  /// Bound on the unboxed optimum from a dual certificate W (lower for
  /// Minimize, upper for Maximize). Only computed when the box was active.
  std::optional<double> dual_bound;
  Vector y;
  std::string message;
};

namespace detail {

/// For f(y) = s*S(y)_kl with s = +-1, weak duality gives for any W >= 0 with
/// <Q^p, W> <= s*coeff_p:  f(y) >= s*base - <Q^0, W> on all y >= 0, S(y) >= 0.
inline std::optional<double> edge_dual_bound(const QcqpInstance& inst, const Vector& coeff, double base, double s,
                                             const SolverSettings& settings) {
  SdpProblem sdp;
  sdp.c = inst.objective;
  for (const auto& c : inst.constraints) sdp.a.push_back(c.matrix);
  sdp.b = s * coeff;
  const SdpSolution sol = solve(sdp, settings);
  if (sol.status != SolveStatus::Optimal) return std::nullopt;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(sol.x));
  const Matrix w = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() * es.eigenvectors().transpose();
  for (int p = 0; p < inst.m(); ++p) {
    const double lhs = inst.constraints[static_cast<size_t>(p)].matrix.cwiseProduct(w).sum();
    if (lhs - sdp.b(p) > settings.feas_tol * (1.0 + std::abs(sdp.b(p)) + w.norm())) return std::nullopt;
  }
  return s * (s * base - inst.objective.cwiseProduct(w).sum());
}

}  // namespace detail

/// Optimizes S(y)_{kl} over y >= 0, S(y) >= 0, y <= y_cap.
inline EdgeFunctionalResult optimize_edge_functional(const QcqpInstance& inst, int k, int l, EdgeSense sense,
                                                     double y_cap = 1e6, const SolverSettings& settings = {}) {
  const int m = inst.m();
  if (k < 0 || l < 0 || k >= inst.n() || l >= inst.n() || k == l) throw Error("edge index out of range");
  if (!(y_cap > 0.0)) throw Error("y_cap must be positive");

  EdgeFunctionalResult out;
  // Feasibility scale: the minimum eigenvalue a PSD-but-noisy S(y) may carry.
  const double scale = 1.0 + inst.objective.cwiseAbs().maxCoeff();
  const DualPhaseOne phase = dual_phase_one(inst, y_cap, settings);
  if (phase.status != SolveStatus::Optimal) {
    out.message = std::string("phase one: ") + to_string(phase.status);
    return out;
  }
  if (phase.t < -1e-7 * scale) {
    out.status = EdgeStatus::DualSideEmpty;
    out.message = "no y >= 0 with S(y) PSD (phase-one margin " + std::to_string(phase.t) + ")";
    return out;
  }

  Vector coeff(m);
  for (int p = 0; p < m; ++p) coeff(p) = inst.constraints[static_cast<size_t>(p)].matrix(k, l);
  const double base = inst.objective(k, l);
  if (coeff.cwiseAbs().maxCoeff() == 0.0) {
    out.status = EdgeStatus::Solved;
    out.value = base;
    out.attained = true;
    out.y = phase.y;
    return out;
  }

  LmiProblem lmi;
  lmi.f0 = inst.objective;
  for (int p = 0; p < m; ++p) lmi.f.push_back(inst.constraints[static_cast<size_t>(p)].matrix);
  lmi.c = sense == EdgeSense::Minimize ? Vector(-coeff) : coeff;
  detail::add_box_rows(lmi, m, y_cap);
  const LmiSolution s = solve(lmi, settings);
  const double sign = sense == EdgeSense::Minimize ? 1.0 : -1.0;
  if (s.status != SolveStatus::Optimal) {
    out.message = std::string("edge functional: ") + to_string(s.status) + (s.message.empty() ? "" : " (" + s.message + ")");
    out.y = s.y;
    // The dual certificate alone still pins down the unboxed optimum.
    out.dual_bound = detail::edge_dual_bound(inst, coeff, base, sign, settings);
    if (out.dual_bound) {
      out.status = EdgeStatus::Solved;
      out.value = *out.dual_bound;
      out.message += "; value from dual certificate";
    }
    return out;
  }
  out.status = EdgeStatus::Solved;
  out.y = s.y;
  out.value = base + coeff.dot(s.y);
  out.attained = true;
  for (int p = 0; p < m; ++p) {
    if (y_cap - s.y(p) <= 1e-3 * y_cap) out.attained = false;
  }
  if (!out.attained) {
    out.dual_bound = detail::edge_dual_bound(inst, coeff, base, sign, settings);
  }
  return out;
}

inline EdgeFunctionalResult minimize_linear_functional_over_dual_cone(const QcqpInstance& inst, int k, int l,
                                                                      double y_cap = 1e6,
                                                                      const SolverSettings& settings = {}) {
  return optimize_edge_functional(inst, k, l, EdgeSense::Minimize, y_cap, settings);
}

struct EigenCombination {
  SolveStatus status = SolveStatus::NumericalLimit;
  double t_star = 0.0;
  Vector y;      // maximizer on the simplex
  Vector y_bar;  // y / t_star so that sum y_bar_p Q^p >= I; empty unless t_star > 0
};

/// max t s.t. sum_p y_p Q^p >= t I, y >= 0, sum_p y_p = 1 (p >= 1).
/// The last weight is eliminated as y_m = 1 - sum_{p<m} y_p.
inline EigenCombination max_min_eigen_combination(const QcqpInstance& inst, const SolverSettings& settings = {}) {
  const int m = inst.m();
  const int n = inst.n();
  if (m < 1) throw Error("instance must have m >= 1 constraints");
  const SymMatrix& last = inst.constraints.back().matrix;

  LmiProblem lmi;
  lmi.f0 = last;
  for (int p = 0; p + 1 < m; ++p) lmi.f.push_back(inst.constraints[static_cast<size_t>(p)].matrix - last);
  lmi.f.push_back(-SymMatrix::Identity(n, n));
  const int nv = m;  // m-1 weights plus t
  lmi.c = Vector::Zero(nv);
  lmi.c(nv - 1) = 1.0;
  lmi.g0 = Vector::Zero(m);
  lmi.g = Matrix::Zero(m, nv);
  for (int p = 0; p + 1 < m; ++p) {
    lmi.g(p, p) = 1.0;
    lmi.g(m - 1, p) = -1.0;
  }
  lmi.g0(m - 1) = 1.0;
  const LmiSolution s = solve(lmi, settings);

  EigenCombination out;
  out.status = s.status;
  out.t_star = s.y(nv - 1);
  out.y = Vector::Zero(m);
  out.y.head(m - 1) = s.y.head(m - 1);
  out.y(m - 1) = 1.0 - s.y.head(m - 1).sum();
  if (out.t_star > 0.0) out.y_bar = out.y / out.t_star;
  return out;
}

}  // namespace biparsdp
