#include <gtest/gtest.h>

#include "test_support.hpp"

namespace {

using namespace biparsdp;
using namespace testing_support;

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

TEST(EdgeSystem, FourCycleEdgesInfeasible) {
  const QcqpInstance inst = four_cycle_example();
  const std::vector<std::pair<Edge, double>> table{
      {{0, 1}, 18.58}, {{1, 2}, 12.84}, {{0, 3}, 8.897}, {{2, 3}, 0.3215}};
  for (const auto& [e, mu] : table) {
    const EdgeSystemResult r = check_edge_system_nonpositive(inst, e.first, e.second);
    EXPECT_TRUE(r.infeasible);
    EXPECT_TRUE(r.attained);
    EXPECT_NEAR(r.mu, mu, 5e-3 * std::max(1.0, mu / 10.0));
  }
}

TEST(EdgeSystem, TwoVariableEdge) {
  const EdgeSystemResult r = check_edge_system_nonpositive(two_variable_example(), 0, 1);
  EXPECT_TRUE(r.infeasible);
  EXPECT_NEAR(r.mu, 15.0 + 6.0 * std::sqrt(6.0), 1e-5);
}

TEST(EdgeSystem, IdenticallyZeroFunctional) {
  // (1,3) carries no data in any matrix: S(y)_13 is identically zero.
  const EdgeSystemResult r = check_edge_system_nonpositive(four_cycle_example(), 0, 2);
  EXPECT_EQ(r.status, EdgeStatus::Solved);
  EXPECT_FALSE(r.infeasible);
  EXPECT_EQ(r.mu, 0.0);
}

TEST(CertifyBipartite, FourCycleConnected) {
  const CertificationReport r = certify_bipartite(four_cycle_example());
  EXPECT_EQ(r.verdict, Verdict::CertifiedExact);
  EXPECT_EQ(r.applied_rule, Rule::ConnectedBipartiteSystems);
  EXPECT_TRUE(r.assumption.holds);
  EXPECT_EQ(r.per_edge.size(), 4u);
  for (const auto& kv : r.per_edge) EXPECT_TRUE(kv.second.system_infeasible);
}

TEST(CertifyBipartite, TwoVariable) {
  const CertificationReport r = certify_bipartite(two_variable_example());
  EXPECT_EQ(r.verdict, Verdict::CertifiedExact);
  EXPECT_EQ(r.applied_rule, Rule::ConnectedBipartiteSystems);
}

TEST(CertifyBipartite, BlockDiagonalDoubleUsesDisconnectedRule) {
  const QcqpInstance inst = block_diagonal_double();
  const CertificationReport r = certify_bipartite(inst);
  EXPECT_EQ(r.verdict, Verdict::CertifiedExact);
  EXPECT_EQ(r.applied_rule, Rule::DisconnectedBipartiteSystems);
  EXPECT_EQ(r.components, 2);
  EXPECT_FALSE(r.connected);

  // Blocks decouple: the optimum is twice the single-block grid minimum. The
  // optimal face holds rank-2 block-diagonal points, so the rank-1 optimizer
  // is assembled from the per-block rank-1 factors.
  const double block = polar_grid_minimum(two_variable_example(), 100000);
  const RelaxationResult rel = solve_relaxation(inst);
  ASSERT_EQ(rel.status, SolveStatus::Optimal);
  EXPECT_NEAR(rel.primal_value, 2.0 * block, 1e-5);
  Vector x(4);
  for (int b = 0; b < 2; ++b) {
    const Matrix blk = rel.x_star.block(2 * b, 2 * b, 2, 2);
    Eigen::SelfAdjointEigenSolver<Matrix> es(blk);
    EXPECT_LE(es.eigenvalues()(0), 1e-6 * es.eigenvalues()(1));
    x.segment(2 * b, 2) = std::sqrt(es.eigenvalues()(1)) * es.eigenvectors().col(1);
  }
  EXPECT_NEAR(evaluate_quadratic(inst.objective, x), rel.primal_value, 1e-5 * (1 + std::abs(rel.primal_value)));
  EXPECT_LE(max_constraint_violation(inst, x), 1e-5);
}

TEST(CertifyBipartite, RejectsOddCycle) {
  QcqpInstance inst;
  inst.objective = sym({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  inst.constraints.push_back({SymMatrix::Identity(3, 3), 1.0});
  EXPECT_THROW(certify_bipartite(inst), Error);
}

TEST(CertifyForest, TwoVariable) {
  const CertificationReport r = certify_forest(two_variable_example());
  EXPECT_EQ(r.verdict, Verdict::CertifiedExact);
  EXPECT_EQ(r.applied_rule, Rule::ForestSystems);
  const EdgeEvidence& e = r.per_edge.at(Edge(0, 1));
  EXPECT_NEAR(e.mu_min, 15.0 + 6.0 * std::sqrt(6.0), 1e-5);
  ASSERT_TRUE(e.mu_max.has_value());
  EXPECT_GE(*e.mu_max, e.mu_min);
  EXPECT_TRUE(r.assumption.primal_interior);
}

TEST(CertifyForest, DiagonalVacuous) {
  QcqpInstance inst;
  inst.objective = sym({{-1, 0, 0}, {0, 2, 0}, {0, 0, -3}});
  inst.constraints.push_back({SymMatrix::Identity(3, 3), 1.0});
  const CertificationReport r = certify_forest(inst);
  EXPECT_EQ(r.verdict, Verdict::CertifiedExact);
  EXPECT_TRUE(r.per_edge.empty());
}

TEST(CertifyForest, PathWithZeroAttainable) {
  // Edge (1,2) appears only in Q^1, and y_1 = 0 is dual feasible.
  QcqpInstance inst;
  inst.objective = sym({{-1, 0, 0}, {0, -1, 0.5}, {0, 0.5, -1}});
  inst.constraints.push_back({sym({{1, 0.5, 0}, {0.5, 1, 0}, {0, 0, 1}}), 1.0});
  inst.constraints.push_back({SymMatrix::Identity(3, 3), 2.0});
  const CertificationReport r = certify_forest(inst);
  EXPECT_EQ(r.verdict, Verdict::NotCertified);
  const EdgeEvidence& e = r.per_edge.at(Edge(0, 1));
  EXPECT_LE(e.mu_min, 1e-6);
  ASSERT_TRUE(e.mu_max.has_value());
  EXPECT_GE(*e.mu_max, -1e-6);
}

TEST(CertifySojoudi, PaperNegativeControls) {
  const CertificationReport small = certify_sojoudi(two_variable_example());
  EXPECT_EQ(small.verdict, Verdict::NotCertified);
  ASSERT_EQ(small.evidence.size(), 1u);
  EXPECT_TRUE(contains(small.evidence[0].detail, "sigma(1,2) = 0"));

  const CertificationReport cyc = certify_sojoudi(four_cycle_example());
  EXPECT_EQ(cyc.verdict, Verdict::NotCertified);
  ASSERT_EQ(cyc.cycle_checks.size(), 1u);
  EXPECT_EQ(cyc.cycle_checks[0].sign_product, 0);
  EXPECT_EQ(cyc.cycle_checks[0].required, 1);
  EXPECT_TRUE(contains(cyc.evidence[0].detail, "sign product 0"));
}

TEST(CertifySojoudi, AllNonpositive) {
  QcqpInstance inst;
  inst.objective = sym({{1, -1, -2, -1}, {-1, 0, -1, -1}, {-2, -1, 3, -1}, {-1, -1, -1, 2}});
  inst.constraints.push_back({sym({{1, 0, -1, 0}, {0, 1, 0, 0}, {-1, 0, 2, 0}, {0, 0, 0, 1}}), 1.0});
  const CertificationReport r = certify_sojoudi(inst);
  EXPECT_EQ(r.verdict, Verdict::CertifiedExact);
  EXPECT_EQ(r.applied_rule, Rule::SignAllNegative);
}

TEST(CertifySojoudi, CycleCondition) {
  // Triangle with signs (+,+,-): product -1 = (-1)^3.
  QcqpInstance inst;
  inst.objective = sym({{1, 1, -1}, {1, 1, 1}, {-1, 1, 1}});
  inst.constraints.push_back({SymMatrix::Identity(3, 3), 1.0});
  EXPECT_EQ(certify_sojoudi(inst).applied_rule, Rule::SignCycleCondition);
  inst.objective(0, 2) = inst.objective(2, 0) = 1.0;
  EXPECT_EQ(certify_sojoudi(inst).verdict, Verdict::NotCertified);
}

TEST(CertifySojoudi, ForestAndPositiveBipartiteCases) {
  QcqpInstance path;
  path.objective = sym({{0, 1, 0}, {1, 0, -1}, {0, -1, 0}});
  path.constraints.push_back({SymMatrix::Identity(3, 3), 1.0});
  EXPECT_EQ(certify_sojoudi(path).applied_rule, Rule::SignForest);

  QcqpInstance cyc = four_cycle_example();
  for (int p = 0; p <= 2; ++p) {
    SymMatrix& q = p == 0 ? cyc.objective : cyc.constraints[p - 1].matrix;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) q(i, j) = std::abs(q(i, j));
  }
  EXPECT_EQ(certify_sojoudi(cyc).applied_rule, Rule::SignBipartitePositive);
}

TEST(CertifySojoudi, InvariantUnderDiagonalRescaling) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  std::uniform_int_distribution<int> val(-2, 2);
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 5;
    auto rand_sym = [&] {
      SymMatrix q = SymMatrix::Zero(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) q(i, j) = q(j, i) = val(rng) * (t % 2 ? 1 : std::abs(val(rng)));
      return q;
    };
    QcqpInstance inst;
    inst.objective = rand_sym();
    inst.constraints.push_back({rand_sym(), 1.0});
    const Vector d = Vector::NullaryExpr(n, [&] { return scale(rng); });
    QcqpInstance scaled = inst;
    scaled.objective = d.asDiagonal() * inst.objective * d.asDiagonal();
    scaled.constraints[0].matrix = d.asDiagonal() * inst.constraints[0].matrix * d.asDiagonal();
    const CertificationReport a = certify_sojoudi(inst);
    const CertificationReport b = certify_sojoudi(scaled);
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_EQ(a.applied_rule, b.applied_rule);
    EXPECT_EQ(a.signs, b.signs);
  }
}

TEST(SignCorollaries, NonnegativeBipartite) {
  QcqpInstance inst = four_cycle_example();
  for (int p = 0; p <= 2; ++p) {
    SymMatrix& q = p == 0 ? inst.objective : inst.constraints[p - 1].matrix;
    q = q.cwiseAbs();
  }
  const CertificationReport r = certify_sign_corollaries(inst);
  EXPECT_EQ(r.verdict, Verdict::CertifiedExact);
  EXPECT_EQ(r.applied_rule, Rule::NonnegativeOffDiagonalBipartite);
}

TEST(SignCorollaries, NonpositiveOnCompleteGraph) {
  QcqpInstance inst;
  inst.objective = sym({{1, -1, -2, -1}, {-1, 0, -1, -1}, {-2, -1, 3, -1}, {-1, -1, -1, 2}});
  inst.constraints.push_back({SymMatrix::Identity(4, 4), 1.0});
  const CertificationReport r = certify_sign_corollaries(inst);
  EXPECT_EQ(r.verdict, Verdict::CertifiedExact);
  EXPECT_EQ(r.applied_rule, Rule::NonpositiveOffDiagonal);
}

TEST(SignCorollaries, MixedSignsDoNotFire) {
  const CertificationReport r = certify_sign_corollaries(four_cycle_example());
  EXPECT_EQ(r.verdict, Verdict::NotCertified);
  for (const auto& ev : r.evidence) EXPECT_FALSE(ev.fired);
}

TEST(Pipeline, FourCycle) {
  const CertificationReport r = certify(four_cycle_example());
  EXPECT_EQ(r.verdict, Verdict::CertifiedExact);
  EXPECT_EQ(r.applied_rule, Rule::ConnectedBipartiteSystems);
  for (Rule rule : {Rule::NonnegativeOffDiagonalBipartite, Rule::NonpositiveOffDiagonal}) {
    ASSERT_NE(r.find(rule), nullptr);
    EXPECT_FALSE(r.find(rule)->applicable);
  }
  EXPECT_FALSE(r.fired(Rule::SignCycleCondition));
  EXPECT_FALSE(r.relaxation.has_value());
}

TEST(Pipeline, TwoVariableRecordsForestAndBipartite) {
  const CertificationReport r = certify(two_variable_example());
  EXPECT_EQ(r.verdict, Verdict::CertifiedExact);
  EXPECT_EQ(r.applied_rule, Rule::ForestSystems);
  EXPECT_TRUE(r.fired(Rule::ForestSystems));
  EXPECT_TRUE(r.fired(Rule::ConnectedBipartiteSystems));
}

TEST(Pipeline, DenseRandomFallsBackToRank) {
  std::mt19937 rng(12345);
  std::normal_distribution<double> d;
  QcqpInstance inst;
  Matrix a = Matrix::NullaryExpr(4, 4, [&] { return d(rng); });
  inst.objective = a + a.transpose();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      inst.objective(i, j) = inst.objective(j, i) = (i + j) % 2 ? 1.0 + std::abs(inst.objective(i, j))
                                                                : -1.0 - std::abs(inst.objective(i, j));
    }
  SymMatrix q = SymMatrix::Identity(4, 4) * 3.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) q(i, j) = q(j, i) = -0.5 * inst.objective(i, j) / std::abs(inst.objective(i, j));
  inst.constraints.push_back({q, 2.0});

  const CertificationReport r = certify(inst);
  EXPECT_EQ(r.verdict, Verdict::NumericallyExactOnly);
  EXPECT_EQ(r.applied_rule, Rule::None);
  ASSERT_TRUE(r.relaxation.has_value());
  EXPECT_EQ(r.relaxation->numeric_rank, 1);
  EXPECT_FALSE(r.fired(Rule::NumericalRank));
}

TEST(Pipeline, AssumptionGate) {
  QcqpInstance inst;
  inst.objective = sym({{1, -1}, {-1, 1}});
  inst.constraints.push_back({sym({{1, 0}, {0, -1}}), 1.0});
  const CertificationReport r = certify(inst);
  EXPECT_FALSE(r.assumption.holds);
  EXPECT_NE(r.verdict, Verdict::CertifiedExact);
  bool noted = false;
  for (const auto& n : r.notes) noted |= contains(n, "assumption unverified");
  EXPECT_TRUE(noted);
}

TEST(Pipeline, SignSplitEvidence) {
  const CertificationReport r = certify(sign_split_example());
  EXPECT_EQ(r.verdict, Verdict::CertifiedExact);
  EXPECT_TRUE(r.fired(Rule::SignSplitBipartite));
  EXPECT_TRUE(r.fired(Rule::SignCycleCondition));
}

TEST(Pipeline, ParallelMatchesSerial) {
  CertifyOptions par;
  par.parallel = 4;
  const CertificationReport a = certify(four_cycle_example());
  const CertificationReport b = certify(four_cycle_example(), par);
  ASSERT_EQ(a.per_edge.size(), b.per_edge.size());
  for (const auto& [e, ev] : a.per_edge) EXPECT_EQ(ev.mu_min, b.per_edge.at(e).mu_min);
}

TEST(Properties, TighterMarginNeverCertifiesMore) {
  const std::vector<QcqpInstance> instances{four_cycle_example(), two_variable_example(), block_diagonal_double()};
  for (const auto& inst : instances) {
    bool previous = true;
    for (double tol : {1e-8, 1e-6, 1e-2, 0.5, 5.0, 50.0}) {
      CertifyOptions o;
      o.cert_tol = tol;
      const bool certified = certify_bipartite(inst, o).verdict == Verdict::CertifiedExact;
      EXPECT_FALSE(certified && !previous) << "tol " << tol;
      previous = certified;
    }
  }
  CertifyOptions o;
  o.cert_tol = 1.0;
  EXPECT_EQ(certify_bipartite(four_cycle_example(), o).verdict, Verdict::NotCertified);
}

TEST(Properties, ForestAndBipartiteRulesAgree) {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> pos(0.2, 2.0);
  int compared = 0;
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 4;
    std::vector<Edge> tree;
    for (int v = 1; v < n; ++v) tree.emplace_back(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
    QcqpInstance inst;
    inst.objective = SymMatrix::Zero(n, n);
    SymMatrix q = SymMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) inst.objective(i, i) = -pos(rng);
    for (const Edge& e : tree) {
      inst.objective(e.first, e.second) = inst.objective(e.second, e.first) = (t % 2 ? 1 : -1) * pos(rng);
      q(e.first, e.second) = q(e.second, e.first) = (t % 3 ? 1 : -1) * pos(rng);
    }
    for (int i = 0; i < n; ++i) q(i, i) = q.row(i).cwiseAbs().sum() + pos(rng);
    inst.constraints.push_back({q, 1.0 + pos(rng)});

    const CertificationReport f = certify_forest(inst);
    bool all_positive = true;
    for (const auto& kv : f.per_edge) all_positive &= kv.second.min_attained && kv.second.mu_min > 1e-6;
    if (!all_positive) continue;
    ++compared;
    EXPECT_EQ(f.verdict, certify_bipartite(inst).verdict);
  }
  EXPECT_GT(compared, 0);
}

TEST(Properties, SoundnessOnRandomBipartite) {
  std::mt19937 rng(2718);
  for (int t = 0; t < 25; ++t) {
    const QcqpInstance inst = random_bipartite_nonnegative(rng, 2 + t % 7, 1 + t % 4);
    const CertificationReport r = certify(inst);
    ASSERT_EQ(r.verdict, Verdict::CertifiedExact) << "trial " << t;
    const RelaxationResult rel = solve_relaxation(inst);
    ASSERT_EQ(rel.status, SolveStatus::Optimal);
    EXPECT_EQ(rel.numeric_rank, 1) << "trial " << t;
    EXPECT_LE(std::abs(rel.gap), 1e-5 * (1 + std::abs(rel.primal_value)));

    // Q^0_kl > 0 on every edge and all Q^p_kl >= 0, so S(y)_kl >= Q^0_kl.
    const CertificationReport b = certify_bipartite(inst);
    EXPECT_EQ(b.verdict, Verdict::CertifiedExact);
    for (const auto& [e, ev] : b.per_edge) EXPECT_GE(ev.mu_min, inst.objective(e.first, e.second) - 1e-6);
  }
}

}  // namespace
