#pragma once

// JSON views of graphs, relaxation results, certification reports and sweep
// trajectories. Vertex indices are 1-based on output.

#include <string>
#include <vector>

#include "certify.hpp"
#include "epsilon_sweep.hpp"
#include "json.hpp"
#include "relaxation.hpp"
#include "sparsity_graph.hpp"
#include "transform.hpp"

namespace biparsdp {

using ojson = nlohmann::ordered_json;

namespace detail {

inline ojson vertices_1based(const std::vector<int>& vs) {
  ojson out = ojson::array();
  for (int v : vs) out.push_back(v + 1);
  return out;
}

inline ojson edge_json(const Edge& e) { return ojson::array({e.first + 1, e.second + 1}); }

inline std::string edge_key(const Edge& e) { return std::to_string(e.first + 1) + "," + std::to_string(e.second + 1); }

inline ojson vector_json(const Vector& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline ojson matrix_json(const Matrix& a) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) out.push_back(vector_json(a.row(i).transpose()));
  return out;
}

inline ojson signs_json(const EdgeSigns& signs) {
  ojson out = ojson::object();
  for (const auto& [e, s] : signs) out[edge_key(e)] = s;
  return out;
}

inline ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

}  // namespace detail

inline ojson graph_report(const QcqpInstance& inst, double zero_tol = 0.0) {
  const SparsityGraph g = build_graph(inst, zero_tol);
  const BipartitionResult bip = bipartition(g);
  ojson j;
  j["n"] = g.n();
  j["edges"] = ojson::array();
  for (const Edge& e : g.edges()) j["edges"].push_back(detail::edge_json(e));
  j["signs"] = detail::signs_json(edge_signs(inst, g));
  j["bipartite"] = bip.bipartite;
  if (bip.bipartite) {
    j["parts"] = ojson::array({detail::vertices_1based(bip.left), detail::vertices_1based(bip.right)});
  } else {
    j["parts"] = ojson::array();
    j["odd_cycle"] = detail::vertices_1based(bip.odd_cycle);
  }
  j["components"] = ojson::array();
  for (const auto& c : connected_components(g)) j["components"].push_back(detail::vertices_1based(c));
  j["cycle_basis"] = ojson::array();
  for (const Cycle& c : cycle_basis(g)) j["cycle_basis"].push_back(detail::vertices_1based(c.vertices));
  j["forest"] = j["cycle_basis"].empty();
  j["zero_tol"] = zero_tol;
  return j;
}

inline ojson tolerances_json(const CertifyOptions& o) {
  return {{"solver_tol", o.solver.feas_tol}, {"gap_tol", o.solver.gap_tol}, {"cert_tol", o.cert_tol},
          {"rank_tol", o.rank_tol},          {"y_cap", o.y_cap},            {"zero_tol", o.zero_tol},
          {"delta", o.delta}};
}

inline ojson relaxation_report(const RelaxationResult& r) {
  ojson j;
  j["status"] = to_string(r.status);
  j["primal_value"] = r.primal_value;
  j["dual_value"] = r.dual_value;
  j["rank"] = r.numeric_rank;
  j["x"] = r.x ? detail::vector_json(*r.x) : ojson(nullptr);
  j["X"] = detail::matrix_json(r.x_star);
  j["y"] = detail::vector_json(r.y_star);
  j["gap"] = r.gap;
  j["residuals"] = {{"primal", r.residuals.primal},
                    {"dual", r.residuals.dual},
                    {"complementarity", r.residuals.complementarity},
                    {"gap", r.residuals.gap}};
  j["rank_tol"] = r.rank_tol;
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

inline ojson certification_report(const CertificationReport& r) {
  ojson j;
  j["verdict"] = to_string(r.verdict);
  j["applied_rule"] = to_string(r.applied_rule);
  j["structure"] = {{"n", r.n},
                    {"m", r.m},
                    {"bipartite", r.bipartite},
                    {"connected", r.connected},
                    {"forest", r.forest},
                    {"components", r.components}};
  if (r.assumption.evaluated) {
    j["assumption_check"] = {{"status", to_string(r.assumption.status)},
                             {"t_star", r.assumption.t_star},
                             {"holds", r.assumption.holds},
                             {"y_bar", detail::vector_json(r.assumption.y_bar)},
                             {"primal_interior", r.assumption.primal_interior},
                             {"primal_interior_tau", r.assumption.primal_interior_tau}};
  } else {
    j["assumption_check"] = nullptr;
  }
  j["per_edge"] = ojson::array();
  for (const auto& [e, ev] : r.per_edge) {
    ojson pe;
    pe["edge"] = detail::edge_json(e);
    pe["status"] = to_string(ev.status);
    pe["mu"] = ev.mu_min;
    pe["attained"] = ev.min_attained;
    if (ev.min_bound) pe["dual_bound"] = *ev.min_bound;
    if (ev.mu_max) {
      pe["mu_max"] = *ev.mu_max;
      pe["max_attained"] = ev.max_attained;
      if (ev.max_bound) pe["max_dual_bound"] = *ev.max_bound;
    }
    pe["system_infeasible"] = ev.system_infeasible;
    if (!ev.note.empty()) pe["note"] = ev.note;
    j["per_edge"].push_back(pe);
  }
  int pos = 0, neg = 0, zero = 0;
  for (const auto& kv : r.signs) (kv.second > 0 ? pos : kv.second < 0 ? neg : zero)++;
  j["sign_summary"] = {{"positive", pos}, {"negative", neg}, {"zero", zero}, {"signs", detail::signs_json(r.signs)}};
  j["cycle_checks"] = ojson::array();
  for (const auto& c : r.cycle_checks) {
    j["cycle_checks"].push_back({{"cycle", detail::vertices_1based(c.cycle.vertices)},
                                 {"sign_product", c.sign_product},
                                 {"required", c.required},
                                 {"holds", c.holds}});
  }
  j["rules"] = ojson::array();
  for (const auto& ev : r.evidence) {
    j["rules"].push_back(
        {{"rule", to_string(ev.rule)}, {"applicable", ev.applicable}, {"fired", ev.fired}, {"detail", ev.detail}});
  }
  j["notes"] = r.notes;
  if (r.relaxation) j["relaxation"] = relaxation_report(*r.relaxation);
  j["tolerances"] = tolerances_json(r.options);
  return j;
}

inline ojson transform_mapping(const TransformResult& t) {
  return {{"mode", "sign-split"},
          {"original_n", t.original_n},
          {"transformed_n", t.transformed.n()},
          {"delta", t.delta},
          {"z_variables", ojson::array({t.original_n + 1, 2 * t.original_n})},
          {"coupling_constraint", t.transformed.m()},
          {"description", t.mapping()}};
}

inline ojson transform_mapping(const PerturbedInstance& p) {
  ojson f = ojson::array();
  for (const Edge& e : p.connecting_edges) f.push_back(detail::edge_json(e));
  return {{"mode", p.kind == PerturbationKind::Connecting ? "connect" : "full-laplacian"},
          {"epsilon", p.epsilon},
          {"connecting_edges", f},
          {"P", detail::matrix_json(p.p)},
          {"description", "objective replaced by Q^0 + epsilon * P with P a negative graph Laplacian"}};
}

inline ojson sweep_report(const std::vector<SweepEntry>& entries) {
  ojson out = ojson::array();
  for (const auto& e : entries) {
    ojson j{{"epsilon", e.epsilon},
            {"verdict", to_string(e.verdict)},
            {"applied_rule", to_string(e.applied_rule)},
            {"status", to_string(e.status)},
            {"primal_value", e.primal_value},
            {"min_edge_value", detail::number_or_null(e.min_edge_value)},
            {"min_edge_excess", detail::number_or_null(e.min_edge_excess)}};
    if (!e.error.empty()) j["error"] = e.error;
    out.push_back(j);
  }
  return out;
}

}  // namespace biparsdp
