#pragma once

// Command-line front end: certify, solve, graph, transform, sweep.
//
// Exit codes for `certify`: 0 CertifiedExact, 2 NotCertified,
// 3 NumericallyExactOnly, 4 InexactObserved. Any error exits with 1.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "biparsdp/certify.hpp"
#include "biparsdp/epsilon_sweep.hpp"
#include "biparsdp/qcqp_model.hpp"
#include "biparsdp/relaxation.hpp"
#include "biparsdp/report_json.hpp"
#include "biparsdp/transform.hpp"

#ifndef BIPARSDP_VERSION
#define BIPARSDP_VERSION "0.0.0"
#endif

namespace biparsdp::cli {

struct CliConfig {
  std::string subcommand;
  std::string input;
  std::string output;  // empty: stdout
  std::string mapping_output;
  double tol = 1e-8;
  double cert_tol = 1e-6;
  double rank_tol = 1e-6;
  double y_cap = 1e6;
  double zero_tol = 0.0;
  double delta = 1.0;
  double epsilon = 1e-3;
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3};
  std::string mode = "sign-split";
  int parallel = 1;
  bool timestamp = true;

  CertifyOptions options() const {
    CertifyOptions o;
    o.solver.feas_tol = tol;
    o.solver.gap_tol = tol;
    o.cert_tol = cert_tol;
    o.rank_tol = rank_tol;
    o.y_cap = y_cap;
    o.zero_tol = zero_tol;
    o.delta = delta;
    o.parallel = parallel;
    return o;
  }
};

inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::CertifiedExact: return 0;
    case Verdict::NotCertified: return 2;
    case Verdict::NumericallyExactOnly: return 3;
    case Verdict::InexactObserved: return 4;
  }
  return 1;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

namespace detail {

inline void write_json(const ojson& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << j.dump(2) << '\n';
}

inline void validate(const CliConfig& c) {
  for (double v : {c.tol, c.cert_tol, c.rank_tol, c.y_cap, c.delta, c.epsilon}) {
    if (!(v > 0.0)) throw Error("tolerances, y-cap, delta and epsilon must be positive");
  }
  if (c.tol > 1e-4) throw Error("--tol must lie in (0, 1e-4]");
  if (c.zero_tol < 0.0) throw Error("--zero-tol must be nonnegative");
  if (c.parallel < 1) throw Error("--parallel must be >= 1");
  std::ifstream probe(c.input);
  if (!probe) throw Error("file not found: " + c.input);
}

/// Homogenizes when the file carries linear terms.
struct Loaded {
  QcqpInstance instance;
  bool homogenized = false;
};

inline Loaded load(const std::string& path) {
  GeneralQcqpInstance g = load_general_instance(path);
  if (g.has_linear_terms()) return {homogenize(g), true};
  return {std::move(g.quadratic), false};
}

inline int run_certify(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const Loaded in = load(c.input);
  const CertificationReport rep = certify(in.instance, c.options());
  ojson j = certification_report(rep);
  if (in.homogenized) j["notes"].push_back("instance had linear terms and was homogenized (x0 is variable 1)");
  j["exit_code"] = exit_code(rep.verdict);
  if (c.timestamp) j["timestamp"] = utc_timestamp();
  write_json(j, c.output, out);
  err << "certify: " << to_string(rep.verdict) << " (" << to_string(rep.applied_rule) << ")\n";
  return exit_code(rep.verdict);
}

inline int run_solve(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const Loaded in = load(c.input);
  const RelaxationResult r = solve_relaxation(in.instance, c.options().solver, c.rank_tol);
  ojson j = relaxation_report(r);
  if (in.homogenized) {
    j["homogenized"] = true;
    j["x_original"] = r.x ? biparsdp::detail::vector_json(dehomogenize(*r.x)) : ojson(nullptr);
  }
  j["tolerances"] = tolerances_json(c.options());
  write_json(j, c.output, out);
  err << "solve: " << to_string(r.status) << ", rank " << r.numeric_rank << ", value " << r.primal_value << '\n';
  return r.status == SolveStatus::Optimal ? 0 : 1;
}

inline int run_graph(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const Loaded in = load(c.input);
  const ojson j = graph_report(in.instance, c.zero_tol);
  write_json(j, c.output, out);
  err << "graph: " << j["edges"].size() << " edges, " << (j["bipartite"].get<bool>() ? "bipartite" : "not bipartite")
      << '\n';
  return 0;
}

inline int run_transform(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const Loaded in = load(c.input);
  QcqpInstance transformed;
  ojson mapping;
  if (c.mode == "sign-split") {
    const TransformResult t = sign_split_transform(in.instance, c.delta);
    transformed = t.transformed;
    mapping = transform_mapping(t);
  } else if (c.mode == "connect" || c.mode == "full-laplacian") {
    const PerturbedInstance p = c.mode == "connect" ? build_connecting_perturbation(in.instance, c.epsilon, c.zero_tol)
                                                    : build_full_graph_perturbation(in.instance, c.epsilon, c.zero_tol);
    transformed = p.instance;
    mapping = transform_mapping(p);
  } else {
    throw Error("unknown --mode " + c.mode);
  }
  const nlohmann::json inst_json = to_json(transformed);
  if (c.output.empty()) {
    out << inst_json.dump(2) << '\n';
  } else {
    std::ofstream f(c.output);
    if (!f) throw Error("cannot write " + c.output);
    f << inst_json.dump(2) << '\n';
  }
  std::string sidecar = c.mapping_output;
  if (sidecar.empty() && !c.output.empty()) sidecar = c.output + ".mapping.json";
  if (!sidecar.empty()) {
    std::ofstream f(sidecar);
    if (!f) throw Error("cannot write " + sidecar);
    f << mapping.dump(2) << '\n';
  }
  err << "transform: " << c.mode << ", " << transformed.n() << " variables, " << transformed.m() << " constraints\n";
  return 0;
}

inline int run_sweep(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const Loaded in = load(c.input);
  const PerturbationKind kind = c.mode == "full-laplacian" ? PerturbationKind::FullGraph : PerturbationKind::Connecting;
  if (c.mode != "connect" && c.mode != "full-laplacian") throw Error("sweep needs --mode connect|full-laplacian");
  const auto entries = epsilon_sweep_validation(in.instance, c.epsilons, kind, c.options());
  ojson j{{"mode", c.mode}, {"trajectory", sweep_report(entries)}, {"tolerances", tolerances_json(c.options())}};
  write_json(j, c.output, out);
  err << "sweep: " << entries.size() << " perturbed instances\n";
  return 0;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CliConfig cfg;
  if (const char* env = std::getenv("BIPARSDP_TOL")) {
    try {
      cfg.tol = std::stod(env);
    } catch (const std::exception&) {
      err << "error: BIPARSDP_TOL is not a number: " << env << '\n';
      return 1;
    }
  }

  CLI::App app{"Exactness certificates for Shor SDP relaxations of QCQPs", "biparsdp"};
  app.set_version_flag("--version", std::string(BIPARSDP_VERSION));
  app.require_subcommand(1);

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("input", cfg.input, "QCQP instance (JSON)")->required();
    sub->add_option("-o,--output", cfg.output, "Write JSON here instead of stdout");
    sub->add_option("--tol", cfg.tol, "Solver feasibility/gap tolerance (env BIPARSDP_TOL)");
    sub->add_option("--zero-tol", cfg.zero_tol, "Entries with |v| <= zero-tol are treated as zero");
  };

  CLI::App* certify_cmd = app.add_subcommand("certify", "Run the exactness certification pipeline");
  add_common(certify_cmd);
  certify_cmd->add_option("--cert-tol", cfg.cert_tol, "Positivity margin for per-edge minima");
  certify_cmd->add_option("--rank-tol", cfg.rank_tol, "Relative eigenvalue threshold for numerical rank");
  certify_cmd->add_option("--y-cap", cfg.y_cap, "Box bound on dual multipliers in edge subproblems");
  certify_cmd->add_option("--delta", cfg.delta, "Diagonal shift used by the sign-splitting route");
  certify_cmd->add_option("--parallel", cfg.parallel, "Concurrent per-edge solves");
  bool no_timestamp = false;
  certify_cmd->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp field");

  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve the SDP relaxation and extract a rank-1 optimizer");
  add_common(solve_cmd);
  solve_cmd->add_option("--rank-tol", cfg.rank_tol, "Relative eigenvalue threshold for numerical rank");

  CLI::App* graph_cmd = app.add_subcommand("graph", "Report the aggregated sparsity pattern graph");
  add_common(graph_cmd);

  CLI::App* transform_cmd = app.add_subcommand("transform", "Sign-split or perturb an instance");
  add_common(transform_cmd);
  transform_cmd->add_option("--mode", cfg.mode, "sign-split | connect | full-laplacian")
      ->check(CLI::IsMember({"sign-split", "connect", "full-laplacian"}));
  transform_cmd->add_option("--delta", cfg.delta, "Diagonal shift for sign splitting");
  transform_cmd->add_option("--epsilon", cfg.epsilon, "Perturbation magnitude");
  transform_cmd->add_option("--mapping", cfg.mapping_output, "Mapping sidecar path (default <output>.mapping.json)");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Certify and solve perturbed instances along an epsilon sequence");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--mode", cfg.mode, "connect | full-laplacian")
      ->check(CLI::IsMember({"connect", "full-laplacian"}));
  sweep_cmd->add_option("--epsilons", cfg.epsilons, "Strictly decreasing positive values")->delimiter(',');
  sweep_cmd->add_option("--cert-tol", cfg.cert_tol, "Positivity margin for per-edge minima");
  sweep_cmd->add_option("--parallel", cfg.parallel, "Concurrent perturbed solves");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version arrive here with exit code 0.
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  if (sweep_cmd->parsed() && cfg.mode == "sign-split") cfg.mode = "connect";
  cfg.timestamp = !no_timestamp;

  try {
    detail::validate(cfg);
    if (certify_cmd->parsed()) return detail::run_certify(cfg, out, err);
    if (solve_cmd->parsed()) return detail::run_solve(cfg, out, err);
    if (graph_cmd->parsed()) return detail::run_graph(cfg, out, err);
    if (transform_cmd->parsed()) return detail::run_transform(cfg, out, err);
    if (sweep_cmd->parsed()) return detail::run_sweep(cfg, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace biparsdp::cli
