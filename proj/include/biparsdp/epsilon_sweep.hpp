#pragma once

// Empirical check of the perturbation argument: certify and solve
// Q^0 + eps P along a decreasing eps sequence and record the trajectory.
// This is a validation harness; certification of disconnected bipartite
// instances goes through the per-edge rule in certify.hpp.

#include <string>
#include <vector>

#include "certify.hpp"
#include "parallel.hpp"
#include "relaxation.hpp"
#include "transform.hpp"

namespace biparsdp {

struct SweepEntry {
  double epsilon = 0.0;
  Verdict verdict = Verdict::NotCertified;
  Rule applied_rule = Rule::None;
  SolveStatus status = SolveStatus::NumericalLimit;
  double primal_value = 0.0;
  Vector y_star;
  /// min over edges of the perturbed graph of S(y*; eps)_kl.
  double min_edge_value = 0.0;
  /// min over the same edges of S(y*; eps)_kl - eps P_kl.
  double min_edge_excess = 0.0;
  std::string error;
};

inline std::vector<SweepEntry> epsilon_sweep_validation(const QcqpInstance& inst, const std::vector<double>& epsilons,
                                                        PerturbationKind kind = PerturbationKind::Connecting,
                                                        const CertifyOptions& opts = {}) {
  if (epsilons.empty()) throw Error("epsilon sequence is empty");
  for (size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw Error("epsilon values must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) throw Error("epsilon sequence must be strictly decreasing");
  }

  CertifyOptions inner = opts;
  inner.parallel = 1;
  return parallel_map(epsilons.size(), opts.parallel, [&](std::size_t i) {
    SweepEntry entry;
    entry.epsilon = epsilons[i];
    try {
      const PerturbedInstance pert = kind == PerturbationKind::Connecting
                                         ? build_connecting_perturbation(inst, entry.epsilon, opts.zero_tol)
                                         : build_full_graph_perturbation(inst, entry.epsilon, opts.zero_tol);
      const CertificationReport rep = certify(pert.instance, inner);
      entry.verdict = rep.verdict;
      entry.applied_rule = rep.applied_rule;
      const RelaxationResult rel = solve_relaxation(pert.instance, inner.solver, inner.rank_tol);
      entry.status = rel.status;
      entry.primal_value = rel.primal_value;
      entry.y_star = rel.y_star;
      const SparsityGraph g = build_graph(pert.instance, opts.zero_tol);
      entry.min_edge_value = std::numeric_limits<double>::infinity();
      entry.min_edge_excess = std::numeric_limits<double>::infinity();
      for (const Edge& e : g.edges()) {
        const double v = rel.s_of_y(e.first, e.second);
        entry.min_edge_value = std::min(entry.min_edge_value, v);
        entry.min_edge_excess = std::min(entry.min_edge_excess, v - entry.epsilon * pert.p(e.first, e.second));
      }
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    return entry;
  });
}

}  // namespace biparsdp
