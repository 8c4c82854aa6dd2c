#pragma once

// Homogeneous QCQP instances
//
//   min  x' Q^0 x   s.t.  x' Q^p x <= b_p,  p = 1..m
//
// plus the general form with linear terms, homogenization, and the JSON
// instance format used by the command-line tool.

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace biparsdp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense symmetric matrix. Symmetry is enforced where instances are built
/// (see `validate`), not by the type itself.
using SymMatrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadraticConstraint {
  SymMatrix matrix;
  double rhs = 0.0;
};

struct QcqpInstance {
  SymMatrix objective;
  std::vector<QuadraticConstraint> constraints;

  int n() const { return static_cast<int>(objective.rows()); }
  int m() const { return static_cast<int>(constraints.size()); }

  /// Q^p with Q^0 the objective.
  const SymMatrix& data(int p) const {
    return p == 0 ? objective : constraints[static_cast<size_t>(p - 1)].matrix;
  }
  Vector rhs() const {
    Vector b(m());
    for (int p = 0; p < m(); ++p) b(p) = constraints[static_cast<size_t>(p)].rhs;
    return b;
  }
};

/// QCQP with linear terms: min x'Q^0x + q0'x s.t. x'Q^px + qp'x <= b_p.
struct GeneralQcqpInstance {
  QcqpInstance quadratic;
  Vector objective_linear;
  std::vector<Vector> constraint_linear;

  bool has_linear_terms() const {
    if (objective_linear.size() > 0 && objective_linear.cwiseAbs().maxCoeff() > 0.0) return true;
    for (const auto& q : constraint_linear) {
      if (q.size() > 0 && q.cwiseAbs().maxCoeff() > 0.0) return true;
    }
    return false;
  }
};

namespace detail {

inline void check_finite(const Matrix& a, const std::string& what) {
  if (!a.allFinite()) throw Error("non-finite entry in " + what);
}

inline void check_square(const Matrix& a, int n, const std::string& what) {
  if (a.rows() != n || a.cols() != n) {
    throw Error("dimension mismatch in " + what + ": expected " + std::to_string(n) + "x" +
                std::to_string(n) + ", got " + std::to_string(a.rows()) + "x" +
                std::to_string(a.cols()));
  }
}

inline void check_symmetric(const Matrix& a, const std::string& what) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      const double scale = std::max({1.0, std::abs(a(i, j)), std::abs(a(j, i))});
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale) {
        throw Error("asymmetric entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                    ") in " + what);
      }
    }
  }
}

}  // namespace detail

/// Rejects malformed data. Entries that agree to 1e-12 (relative) are
/// averaged so the stored matrices are exactly symmetric.
inline QcqpInstance validate(QcqpInstance inst, bool require_constraints = true) {
  const int n = inst.n();
  if (n < 1) throw Error("instance must have n >= 1");
  if (require_constraints && inst.m() == 0) throw Error("instance must have m >= 1 constraints");
  auto fix = [n](SymMatrix& a, const std::string& what) {
    detail::check_square(a, n, what);
    detail::check_finite(a, what);
    detail::check_symmetric(a, what);
    a = (0.5 * (a + a.transpose())).eval();
  };
  fix(inst.objective, "objective");
  for (int p = 0; p < inst.m(); ++p) {
    auto& c = inst.constraints[static_cast<size_t>(p)];
    fix(c.matrix, "constraint " + std::to_string(p + 1));
    if (!std::isfinite(c.rhs)) throw Error("non-finite entry in rhs of constraint " + std::to_string(p + 1));
  }
  return inst;
}

inline double evaluate_quadratic(const SymMatrix& q, const Vector& x) {
  if (x.size() != q.rows()) {
    throw Error("dimension mismatch: vector of length " + std::to_string(x.size()) +
                " for matrix of order " + std::to_string(q.rows()));
  }
  return x.dot(q * x);
}

/// Largest violation of x'Q^px <= b_p (<= 0 means feasible).
inline double max_constraint_violation(const QcqpInstance& inst, const Vector& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& c : inst.constraints) worst = std::max(worst, evaluate_quadratic(c.matrix, x) - c.rhs);
  return inst.m() == 0 ? 0.0 : worst;
}

/// Adds x0 as variable 0 and borders each matrix with q/2. The constraint
/// x0^2 = 1 is appended as the pair x0^2 <= 1, -x0^2 <= -1.
inline QcqpInstance homogenize(const GeneralQcqpInstance& g) {
  const QcqpInstance& base = g.quadratic;
  const int n = base.n();
  const int m = base.m();
  auto linear_or_zero = [n](const Vector& q) { return q.size() == 0 ? Vector(Vector::Zero(n)) : q; };
  if (g.objective_linear.size() != 0 && g.objective_linear.size() != n) {
    throw Error("dimension mismatch in linear objective term");
  }
  if (!g.constraint_linear.empty() && static_cast<int>(g.constraint_linear.size()) != m) {
    throw Error("dimension mismatch: expected " + std::to_string(m) + " linear constraint terms");
  }
  auto border = [n](const SymMatrix& q, const Vector& lin) {
    if (lin.size() != n) throw Error("dimension mismatch in linear term");
    SymMatrix out = SymMatrix::Zero(n + 1, n + 1);
    out.bottomRightCorner(n, n) = q;
    out.block(1, 0, n, 1) = 0.5 * lin;
    out.block(0, 1, 1, n) = 0.5 * lin.transpose();
    return out;
  };

  QcqpInstance h;
  h.objective = border(base.objective, linear_or_zero(g.objective_linear));
  for (int p = 0; p < m; ++p) {
    const Vector lin = g.constraint_linear.empty() ? Vector(Vector::Zero(n))
                                                   : linear_or_zero(g.constraint_linear[static_cast<size_t>(p)]);
    h.constraints.push_back({border(base.constraints[static_cast<size_t>(p)].matrix, lin),
                             base.constraints[static_cast<size_t>(p)].rhs});
  }
  SymMatrix e00 = SymMatrix::Zero(n + 1, n + 1);
  e00(0, 0) = 1.0;
  h.constraints.push_back({e00, 1.0});
  h.constraints.push_back({-e00, -1.0});
  return h;
}

/// Maps a solution of the homogenized problem back: x = sign(x0) * x[1:].
inline Vector dehomogenize(const Vector& xh) {
  if (xh.size() < 2) throw Error("homogenized vector too short");
  const double s = xh(0) < 0.0 ? -1.0 : 1.0;
  return s * xh.tail(xh.size() - 1);
}

// ---------------------------------------------------------------------------
// JSON instance format
//
//   { "n": int, "m": int,
//     "objective": [[i, j, v], ...],                 1-based, i <= j
//     "constraints": [ { "matrix": [[i, j, v], ...], "rhs": number }, ... ],
//     "linear": { "objective": [...], "constraints": [[...], ...] } }   optional

namespace detail {

using nlohmann::json;

inline double number_or_nonfinite(const json& v, const std::string& what) {
  // nlohmann maps NaN/Inf to null on output; accept strings "nan"/"inf" on
  // input only to reject them with the right message.
  if (v.is_null() || v.is_string()) throw Error("non-finite entry in " + what);
  if (!v.is_number()) throw Error("parse error: " + what + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw Error("non-finite entry in " + what);
  return d;
}

inline SymMatrix parse_triplets(const json& arr, int n, const std::string& what) {
  if (!arr.is_array()) throw Error("parse error: " + what + " must be an array of [i, j, v] triplets");
  SymMatrix a = SymMatrix::Zero(n, n);
  Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(n, n);
  for (const auto& t : arr) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer()) {
      throw Error("parse error: malformed triplet in " + what);
    }
    const long i = t[0].get<long>();
    const long j = t[1].get<long>();
    const double v = number_or_nonfinite(t[2], what);
    if (i < 1 || j < 1 || i > n || j > n) throw Error("dimension mismatch: index out of range in " + what);
    if (i > j) throw Error("parse error: lower-triangle triplet (" + std::to_string(i) + "," + std::to_string(j) + ") in " + what);
    if (!std::isfinite(v)) throw Error("non-finite entry in " + what);
    if (seen(i - 1, j - 1)) throw Error("parse error: duplicate triplet in " + what);
    seen(i - 1, j - 1) = 1;
    a(i - 1, j - 1) = v;
    a(j - 1, i - 1) = v;
  }
  return a;
}

inline Vector parse_vector(const json& arr, int n, const std::string& what) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != n) {
    throw Error("dimension mismatch: " + what + " must have length " + std::to_string(n));
  }
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = number_or_nonfinite(arr[static_cast<size_t>(i)], what);
  return v;
}

inline json triplets(const SymMatrix& a) {
  json out = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i; j < a.cols(); ++j) {
      if (a(i, j) != 0.0) out.push_back({i + 1, j + 1, a(i, j)});
    }
  }
  return out;
}

inline json to_array(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace detail

inline GeneralQcqpInstance general_instance_from_json(const nlohmann::json& j) {
  using detail::json;
  if (!j.is_object()) throw Error("parse error: instance must be a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer()) throw Error("parse error: missing integer field \"n\"");
  if (!j.contains("m") || !j["m"].is_number_integer()) throw Error("parse error: missing integer field \"m\"");
  const int n = j["n"].get<int>();
  const int m = j["m"].get<int>();
  if (n < 1) throw Error("dimension mismatch: n must be >= 1");
  if (m == 0) throw Error("instance must have m >= 1 constraints");
  if (m < 0) throw Error("dimension mismatch: m must be >= 1");
  if (!j.contains("objective")) throw Error("parse error: missing field \"objective\"");
  if (!j.contains("constraints") || !j["constraints"].is_array()) {
    throw Error("parse error: missing array field \"constraints\"");
  }
  if (static_cast<int>(j["constraints"].size()) != m) {
    throw Error("dimension mismatch: m = " + std::to_string(m) + " but " +
                std::to_string(j["constraints"].size()) + " constraints given");
  }

  GeneralQcqpInstance g;
  g.quadratic.objective = detail::parse_triplets(j["objective"], n, "objective");
  int p = 0;
  for (const auto& c : j["constraints"]) {
    ++p;
    const std::string what = "constraint " + std::to_string(p);
    if (!c.is_object() || !c.contains("matrix") || !c.contains("rhs")) {
      throw Error("parse error: " + what + " needs \"matrix\" and \"rhs\"");
    }
    g.quadratic.constraints.push_back(
        {detail::parse_triplets(c["matrix"], n, what), detail::number_or_nonfinite(c["rhs"], "rhs of " + what)});
  }
  g.quadratic = validate(std::move(g.quadratic));

  g.objective_linear = Vector::Zero(n);
  g.constraint_linear.assign(static_cast<size_t>(m), Vector::Zero(n));
  if (j.contains("linear") && !j["linear"].is_null()) {
    const auto& lin = j["linear"];
    if (lin.contains("objective")) g.objective_linear = detail::parse_vector(lin["objective"], n, "linear objective");
    if (lin.contains("constraints")) {
      const auto& cl = lin["constraints"];
      if (!cl.is_array() || static_cast<int>(cl.size()) != m) {
        throw Error("dimension mismatch: linear constraints must have " + std::to_string(m) + " entries");
      }
      for (int q = 0; q < m; ++q) {
        g.constraint_linear[static_cast<size_t>(q)] =
            detail::parse_vector(cl[static_cast<size_t>(q)], n, "linear term of constraint " + std::to_string(q + 1));
      }
    }
  }
  return g;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("file not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline GeneralQcqpInstance load_general_instance(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    // Python's json module writes bare NaN/Infinity tokens.
    static const std::regex nonfinite(R"((^|[\[,:\s-])(NaN|Infinity|nan|inf)\b)");
    if (std::regex_search(read_file(path), nonfinite)) throw Error("non-finite entry in " + path);
    throw Error(std::string("parse error: ") + e.what());
  }
  return general_instance_from_json(j);
}

/// Loads a homogeneous instance. Files carrying nonzero linear terms are
/// rejected here; use `load_general_instance` and `homogenize`.
inline QcqpInstance load_instance(const std::string& path) {
  GeneralQcqpInstance g = load_general_instance(path);
  if (g.has_linear_terms()) throw Error("instance has linear terms; load it as a general instance and homogenize");
  return std::move(g.quadratic);
}

inline nlohmann::json to_json(const QcqpInstance& inst) {
  nlohmann::json j;
  j["n"] = inst.n();
  j["m"] = inst.m();
  j["objective"] = detail::triplets(inst.objective);
  j["constraints"] = nlohmann::json::array();
  for (const auto& c : inst.constraints) j["constraints"].push_back({{"matrix", detail::triplets(c.matrix)}, {"rhs", c.rhs}});
  return j;
}

inline nlohmann::json to_json(const GeneralQcqpInstance& g) {
  nlohmann::json j = to_json(g.quadratic);
  if (g.has_linear_terms()) {
    j["linear"]["objective"] = detail::to_array(g.objective_linear);
    j["linear"]["constraints"] = nlohmann::json::array();
    for (const auto& q : g.constraint_linear) j["linear"]["constraints"].push_back(detail::to_array(q));
  }
  return j;
}

inline void save_instance(const QcqpInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << to_json(inst).dump(2) << '\n';
}

}  // namespace biparsdp
