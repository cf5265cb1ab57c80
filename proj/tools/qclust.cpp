// Command-line front end for the clustering toolkit: SBM generation,
// distance matrices, QUBO compilation, annealing, exact solving, and the
// benchmark harness.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qclust/anneal.hpp"
#include "qclust/bench.hpp"
#include "qclust/clustering.hpp"
#include "qclust/distances.hpp"
#include "qclust/errors.hpp"
#include "qclust/exact.hpp"
#include "qclust/graph.hpp"
#include "qclust/qubo.hpp"
#include "qclust/sbm.hpp"
#include "qclust/serialize.hpp"
#include "qclust/version.hpp"

namespace {

qclust::Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qclust::Error("cannot open " + path);
  try {
    return qclust::load_edge_list(in);
  } catch (const qclust::ParseError& e) {
    throw qclust::ParseError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qclust::Error("cannot write " + path);
  out << content;
}

qclust::QuboProblem load_qubo_file(const std::string& path) {
  qclust::QuboProblem p;
  qclust::load_json_file(path).get_to(p);
  return p;
}

struct GenerateArgs {
  std::string preset, config, out, labels_out;
  std::optional<std::uint64_t> seed;
};

struct DistancesArgs {
  std::string graph, config, out;
  std::optional<std::uint64_t> seed;
};

struct BuildArgs {
  std::string graph, config, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> k;
  std::optional<int> model;
  std::optional<double> penalty, lambda, u_bar;
  int capacity = 8192;
};

struct AnnealArgs {
  std::string qubo, config, out, trace_out, labels_out, graph, decode = "repair";
  std::optional<std::uint64_t> seed;
  std::optional<double> t_initial, t_final, cooling_ratio, offset_escape, budget;
  std::optional<int> sweeps, replicas;
  bool sequential = false;
};

struct ExactArgs {
  std::string qubo, config, out;
  std::optional<std::uint64_t> seed;
  int cap = 24;
};

struct BenchArgs {
  std::string preset, config, out_dir, format, decode;
  std::optional<std::uint64_t> seed;
  std::optional<double> budget;
  std::optional<int> exact_cap;
};

struct ReportArgs {
  std::string in, config, out, format = "csv";
  std::optional<std::uint64_t> seed;
};

int run_generate(const GenerateArgs& a) {
  qclust::SbmSpec spec;
  if (!a.preset.empty()) {
    spec = qclust::preset_graph(a.preset).sbm;
  } else if (!a.config.empty()) {
    qclust::load_json_file(a.config).get_to(spec);
  } else {
    throw qclust::ValidationError("generate needs --preset or --config");
  }
  if (a.seed) spec.seed = *a.seed;
  auto result = qclust::generate_sbm(spec);
  std::ostringstream edges;
  qclust::save_edge_list(result.graph, edges);
  write_text(a.out, edges.str());
  if (!a.labels_out.empty()) {
    std::ostringstream labels;
    qclust::write_assignment_csv(result.planted, labels);
    write_text(a.labels_out, labels.str());
  }
  if (!a.out.empty() && a.out != "-")
    std::cerr << "generated " << result.graph.n() << " vertices, "
              << result.graph.edge_count() << " edges -> " << a.out << "\n";
  return 0;
}

int run_distances(const DistancesArgs& a) {
  auto g = load_graph_file(a.graph);
  auto d = qclust::distance_matrix(g);
  std::ostringstream csv;
  qclust::write_csv(d, csv);
  write_text(a.out, csv.str());
  return 0;
}

int run_build(const BuildArgs& a) {
  auto g = load_graph_file(a.graph);
  qclust::ModelParams params;
  if (!a.config.empty()) qclust::load_json_file(a.config).get_to(params);
  if (a.k) params.k_clusters = *a.k;
  if (a.model) {
    if (*a.model != 1 && *a.model != 2)
      throw qclust::ValidationError("--model must be 1 or 2");
    params.model = *a.model == 1 ? qclust::Model::m1 : qclust::Model::m2;
  }
  if (a.penalty) params.penalty = *a.penalty;
  if (a.lambda) params.lambda = *a.lambda;
  if (a.u_bar) params.u_bar = *a.u_bar;
  auto d = qclust::distance_matrix(g);
  auto p = qclust::build_qubo(d, params, a.capacity);
  qclust::json j = p;
  j["model_params"] = params;
  write_text(a.out, j.dump(2) + "\n");
  return 0;
}

int run_anneal(const AnnealArgs& a) {
  if (a.qubo.empty()) throw qclust::ValidationError("anneal needs --qubo");
  auto p = load_qubo_file(a.qubo);
  qclust::AnnealSchedule s;
  if (!a.config.empty()) qclust::load_json_file(a.config).get_to(s);
  if (a.seed) s.seed = *a.seed;
  if (a.t_initial) s.t_initial = *a.t_initial;
  if (a.t_final) s.t_final = *a.t_final;
  if (a.cooling_ratio) s.cooling_ratio = *a.cooling_ratio;
  if (a.sweeps) s.sweeps_per_temperature = *a.sweeps;
  if (a.replicas) s.replicas = *a.replicas;
  if (a.offset_escape) s.offset_escape = *a.offset_escape;
  if (a.budget) s.time_budget_s = *a.budget;
  if (a.sequential) s.parallel_trial = false;

  auto res = qclust::anneal(p, s);

  qclust::json j = res;
  j["schedule"] = s;
  j["n_vars"] = p.n_vars;
  write_text(a.out, j.dump(2) + "\n");

  if (!a.trace_out.empty()) {
    std::ostringstream trace;
    trace << "sweep,best_energy\n";
    char buf[64];
    for (const auto& [sweep, e] : res.energy_trace) {
      std::snprintf(buf, sizeof(buf), "%llu,%.17g",
                    static_cast<unsigned long long>(sweep), e);
      trace << buf << "\n";
    }
    write_text(a.trace_out, trace.str());
  }

  if (!a.labels_out.empty()) {
    qclust::DecodePolicy policy = a.decode == "strict" ? qclust::DecodePolicy::strict
                                                       : qclust::DecodePolicy::repair;
    if (a.decode != "strict" && a.decode != "repair")
      throw qclust::ValidationError("--decode must be strict or repair");
    std::optional<qclust::DistanceMatrix> dm;
    if (!a.graph.empty()) dm = qclust::distance_matrix(load_graph_file(a.graph));
    auto labels = qclust::decode(res.best_state, p.n_vertices, p.k_clusters, policy,
                                 dm ? &*dm : nullptr);
    std::ostringstream csv;
    qclust::write_assignment_csv(labels, csv);
    write_text(a.labels_out, csv.str());
  }
  return 0;
}

int run_exact(const ExactArgs& a) {
  if (a.qubo.empty()) throw qclust::ValidationError("exact needs --qubo");
  auto p = load_qubo_file(a.qubo);
  auto res = qclust::solve_exact(p, a.cap);
  qclust::json j = res;
  j["n_vars"] = p.n_vars;
  write_text(a.out, j.dump(2) + "\n");
  return 0;
}

int run_bench(const BenchArgs& a) {
  qclust::BenchConfig cfg;
  if (!a.preset.empty()) {
    cfg = qclust::preset_bench(a.preset);
  } else if (!a.config.empty()) {
    qclust::load_json_file(a.config).get_to(cfg);
  } else {
    throw qclust::ValidationError("bench needs --preset or --config");
  }
  if (a.seed) cfg.schedule.seed = *a.seed;
  if (a.budget) cfg.time_budget_s = *a.budget;
  if (!a.out_dir.empty()) cfg.output_dir = a.out_dir;
  if (a.exact_cap) cfg.exact_cap = *a.exact_cap;
  if (!a.format.empty()) {
    if (a.format == "csv")
      cfg.report_format = qclust::ReportFormat::csv;
    else if (a.format == "json")
      cfg.report_format = qclust::ReportFormat::json;
    else if (a.format == "markdown")
      cfg.report_format = qclust::ReportFormat::markdown;
    else
      throw qclust::ValidationError("--format must be csv, json, or markdown");
  }
  if (!a.decode.empty()) {
    if (a.decode == "strict")
      cfg.decode_policy = qclust::DecodePolicy::strict;
    else if (a.decode == "repair")
      cfg.decode_policy = qclust::DecodePolicy::repair;
    else
      throw qclust::ValidationError("--decode must be strict or repair");
  }

  auto report = qclust::run_bench(cfg);
  auto paths = qclust::write_report(report, cfg.output_dir, cfg.report_format);
  for (const auto& p : paths) std::cout << "wrote " << p << "\n";
  return 0;
}

int run_report(const ReportArgs& a) {
  if (a.in.empty()) throw qclust::ValidationError("report needs --in <report.json>");
  qclust::BenchReport report;
  qclust::load_json_file(a.in).get_to(report);
  std::string rendered;
  if (a.format == "csv")
    rendered = qclust::render_csv(report);
  else if (a.format == "markdown")
    rendered = qclust::render_markdown(report);
  else if (a.format == "json")
    rendered = qclust::json(report).dump(2) + "\n";
  else
    throw qclust::ValidationError("--format must be csv, json, or markdown");
  write_text(a.out, rendered);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph clustering via QUBO compilation and annealing"};
  app.set_version_flag("--version", qclust::kVersion);
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  GenerateArgs gen;
  auto* cmd_gen = app.add_subcommand("generate", "sample a stochastic block model graph");
  auto* gen_src = cmd_gen->add_option_group("source", "where the SBM spec comes from");
  gen_src->add_option("--preset", gen.preset, "graph preset name (L4, L8, H4, H8, VH8, or -s variants)");
  gen_src->add_option("--config", gen.config, "SBM spec JSON file");
  gen_src->require_option(1);
  cmd_gen->add_option("--seed", gen.seed, "override the spec's seed");
  cmd_gen->add_option("--out", gen.out, "edge-list output path (default stdout)");
  cmd_gen->add_option("--labels-out", gen.labels_out, "write planted labels CSV");

  DistancesArgs dist;
  auto* cmd_dist = app.add_subcommand("distances", "compute the pairwise distance matrix");
  cmd_dist->add_option("--graph", dist.graph, "edge-list input")->required();
  cmd_dist->add_option("--config", dist.config, "unused; accepted for uniformity");
  cmd_dist->add_option("--seed", dist.seed, "unused; accepted for uniformity");
  cmd_dist->add_option("--out", dist.out, "CSV output path (default stdout)");

  BuildArgs build;
  auto* cmd_build = app.add_subcommand("build-qubo", "compile a clustering model to QUBO");
  cmd_build->add_option("--graph", build.graph, "edge-list input")->required();
  cmd_build->add_option("--config", build.config, "model params JSON file");
  cmd_build->add_option("--seed", build.seed, "unused; accepted for uniformity");
  cmd_build->add_option("--k", build.k, "number of clusters");
  cmd_build->add_option("--model", build.model, "1 or 2");
  cmd_build->add_option("--penalty", build.penalty, "one-hot penalty weight P");
  cmd_build->add_option("--lambda", build.lambda, "size regularizer weight (model 2)");
  cmd_build->add_option("--u-bar", build.u_bar, "target cluster size (default n/k)");
  cmd_build->add_option("--capacity", build.capacity, "variable-count cap");
  cmd_build->add_option("--out", build.out, "QUBO JSON output path (default stdout)");

  AnnealArgs an;
  auto* cmd_anneal = app.add_subcommand("anneal", "minimize a QUBO by simulated annealing");
  cmd_anneal->add_option("--qubo", an.qubo, "QUBO JSON input")->required();
  cmd_anneal->add_option("--config", an.config, "schedule JSON file");
  cmd_anneal->add_option("--seed", an.seed, "schedule seed");
  cmd_anneal->add_option("--t-initial", an.t_initial, "starting temperature");
  cmd_anneal->add_option("--t-final", an.t_final, "final temperature");
  cmd_anneal->add_option("--cooling-ratio", an.cooling_ratio, "geometric cooling factor");
  cmd_anneal->add_option("--sweeps-per-temp", an.sweeps, "sweeps per temperature step");
  cmd_anneal->add_option("--replicas", an.replicas, "independent chains");
  cmd_anneal->add_option("--offset-escape", an.offset_escape, "escape offset increment");
  cmd_anneal->add_option("--budget", an.budget, "wall-clock cap in seconds");
  cmd_anneal->add_flag("--sequential", an.sequential, "sequential Metropolis instead of parallel trial");
  cmd_anneal->add_option("--out", an.out, "result JSON output path (default stdout)");
  cmd_anneal->add_option("--trace-out", an.trace_out, "write best-energy trace CSV");
  cmd_anneal->add_option("--labels-out", an.labels_out, "decode best state and write labels CSV");
  cmd_anneal->add_option("--decode", an.decode, "strict or repair (default repair)");
  cmd_anneal->add_option("--graph", an.graph, "edge list for repair distances with --labels-out");

  ExactArgs ex;
  auto* cmd_exact = app.add_subcommand("exact", "exhaustive QUBO minimization");
  cmd_exact->add_option("--qubo", ex.qubo, "QUBO JSON input")->required();
  cmd_exact->add_option("--config", ex.config, "unused; accepted for uniformity");
  cmd_exact->add_option("--seed", ex.seed, "unused; accepted for uniformity");
  cmd_exact->add_option("--cap", ex.cap, "variable-count cap (default 24)");
  cmd_exact->add_option("--out", ex.out, "result JSON output path (default stdout)");

  BenchArgs be;
  auto* cmd_bench = app.add_subcommand("bench", "run the benchmark harness");
  auto* bench_src = cmd_bench->add_option_group("source", "where the bench config comes from");
  bench_src->add_option("--preset", be.preset, "full or small");
  bench_src->add_option("--config", be.config, "bench config JSON file");
  bench_src->require_option(1);
  cmd_bench->add_option("--seed", be.seed, "override schedule seed");
  cmd_bench->add_option("--budget", be.budget, "override per-run time budget (s)");
  cmd_bench->add_option("--out,--out-dir", be.out_dir, "report output directory");
  cmd_bench->add_option("--format", be.format, "csv, json, or markdown");
  cmd_bench->add_option("--decode", be.decode, "strict or repair");
  cmd_bench->add_option("--exact-cap", be.exact_cap, "exact-solver variable cap");

  ReportArgs rep;
  auto* cmd_report = app.add_subcommand("report", "re-render a stored JSON report");
  cmd_report->add_option("--in", rep.in, "report.json input")->required();
  cmd_report->add_option("--config", rep.config, "unused; accepted for uniformity");
  cmd_report->add_option("--seed", rep.seed, "unused; accepted for uniformity");
  cmd_report->add_option("--format", rep.format, "csv, json, or markdown (default csv)");
  cmd_report->add_option("--out", rep.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // collapse CLI11's many usage-error codes: 0 stays 0 (--help/--version),
    // anything else is a usage error
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (cmd_gen->parsed()) return run_generate(gen);
    if (cmd_dist->parsed()) return run_distances(dist);
    if (cmd_build->parsed()) return run_build(build);
    if (cmd_anneal->parsed()) return run_anneal(an);
    if (cmd_exact->parsed()) return run_exact(ex);
    if (cmd_bench->parsed()) return run_bench(be);
    if (cmd_report->parsed()) return run_report(rep);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
