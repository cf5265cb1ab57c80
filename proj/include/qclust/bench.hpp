#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qclust/anneal.hpp"
#include "qclust/clustering.hpp"
#include "qclust/distances.hpp"
#include "qclust/errors.hpp"
#include "qclust/exact.hpp"
#include "qclust/qubo.hpp"
#include "qclust/sbm.hpp"
#include "qclust/serialize.hpp"
#include "qclust/version.hpp"

namespace qclust {

struct NamedGraph {
  std::string name;
  SbmSpec sbm;
  // One-hot penalty sized to this graph's distance scale; overrides the
  // model's penalty when set. See the preset notes below for how to size it.
  std::optional<double> penalty;
};

enum class ReportFormat { csv, json, markdown };

struct BenchConfig {
  std::vector<NamedGraph> graphs;
  std::vector<ModelParams> models;  // k_clusters is overridden per graph
  AnnealSchedule schedule;
  double time_budget_s = 3.5;
  std::string output_dir = ".";
  ReportFormat report_format = ReportFormat::csv;
  DecodePolicy decode_policy = DecodePolicy::repair;
  int exact_cap = 24;
};

struct BenchRow {
  std::string name;
  int model = 1;
  std::string solver;    // "anneal", "exact", or "error"
  double time_s = 0.0;   // configured budget for anneal rows; 0 for exact rows
  double best_objective = 0.0;
  bool feasible = false;
  double ari = 0.0;
  bool mega_flag = false;
  int micro_count = 0;
  std::uint64_t seed = 0;
  // provenance beyond the CSV columns (JSON report only)
  double wall_time_s = 0.0;
  double best_energy = 0.0;
  std::vector<int> cluster_sizes;
  Assignment labels;  // decoded clustering the objective was computed from
  std::optional<double> time_to_target_s;
  std::optional<double> exact_optimum;
  std::string error;
};

struct BenchReport {
  std::string version = kVersion;
  BenchConfig config;
  std::vector<BenchRow> rows;
};

namespace detail {

inline void validate_config(const BenchConfig& cfg) {
  std::set<std::string> names;
  for (const auto& g : cfg.graphs) {
    if (g.name.empty()) throw ValidationError("bench: graph with empty name");
    if (g.name.find_first_of(",\n|") != std::string::npos)
      throw ValidationError("bench: graph name '" + g.name + "' contains separator characters");
    if (!names.insert(g.name).second)
      throw ValidationError("bench: duplicate graph name '" + g.name + "'");
    validate(g.sbm);
  }
  if (!(cfg.time_budget_s > 0.0)) throw ValidationError("bench: time budget must be positive");
  if (cfg.exact_cap < 1) throw ValidationError("bench: exact_cap must be >= 1");
}

}  // namespace detail

// Runs every (graph, model) cell of the config: generate the graph, compile
// the model, anneal under the budget, decode, and score. When the problem is
// small enough an exact enumeration row (with the annealer's time-to-target
// against the proven optimum) follows the anneal row. A failing cell turns
// into an error row and the run continues.
//
// Reported values are chosen so reruns of the same config are byte-identical:
// time_s carries the configured budget (anneal rows) or 0 (exact rows);
// measured wall times appear only in the JSON provenance fields. The anneal
// seed of cell (gi, mi) is schedule.seed + gi * |models| + mi; exact rows
// report the graph seed instead.
inline BenchReport run_bench(const BenchConfig& cfg) {
  detail::validate_config(cfg);
  BenchReport report;
  report.config = cfg;

  for (std::size_t gi = 0; gi < cfg.graphs.size(); ++gi) {
    const auto& g = cfg.graphs[gi];
    SbmResult gen{Graph(1, {}), {}};
    DistanceMatrix dm;
    bool graph_ok = true;
    std::string graph_err;
    try {
      gen = generate_sbm(g.sbm);
      dm = distance_matrix(gen.graph);
    } catch (const std::exception& e) {
      graph_ok = false;
      graph_err = e.what();
    }

    for (std::size_t mi = 0; mi < cfg.models.size(); ++mi) {
      ModelParams params = cfg.models[mi];
      params.k_clusters = g.sbm.n_blocks();
      if (g.penalty) params.penalty = *g.penalty;
      const std::uint64_t anneal_seed =
          cfg.schedule.seed + gi * cfg.models.size() + mi;

      BenchRow row;
      row.name = g.name;
      row.model = static_cast<int>(params.model);
      row.seed = anneal_seed;

      if (!graph_ok) {
        row.solver = "error";
        row.error = graph_err;
        report.rows.push_back(row);
        continue;
      }

      QuboProblem qubo;
      try {
        qubo = build_qubo(dm, params);

        AnnealSchedule sched = cfg.schedule;
        sched.seed = anneal_seed;
        sched.time_budget_s = cfg.time_budget_s;

        AnnealResult res = anneal(qubo, sched);
        Assignment a = decode(res.best_state, qubo.n_vertices, qubo.k_clusters,
                              cfg.decode_policy, &dm);
        ClusterMetrics m = compute_metrics(dm, a, qubo.k_clusters, &gen.planted);

        row.solver = "anneal";
        row.time_s = cfg.time_budget_s;
        row.best_objective = m.objective;
        row.feasible = is_one_hot(res.best_state, qubo.n_vertices, qubo.k_clusters);
        row.ari = m.ari_vs_planted.value_or(0.0);
        row.mega_flag = m.mega_cluster_flag;
        row.micro_count = m.micro_cluster_count;
        row.wall_time_s = res.wall_time;
        row.best_energy = res.best_energy;
        row.cluster_sizes = m.cluster_sizes;
        row.labels = a;
      } catch (const std::exception& e) {
        row.solver = "error";
        row.error = e.what();
        report.rows.push_back(row);
        continue;
      }
      report.rows.push_back(row);

      if (qubo.n_vars > cfg.exact_cap) continue;

      BenchRow ex_row;
      ex_row.name = g.name;
      ex_row.model = static_cast<int>(params.model);
      ex_row.seed = g.sbm.seed;
      try {
        ExactResult ex = solve_exact(qubo, cfg.exact_cap);
        Assignment a = decode(ex.optimal_states.front(), qubo.n_vertices, qubo.k_clusters,
                              cfg.decode_policy, &dm);
        ClusterMetrics m = compute_metrics(dm, a, qubo.k_clusters, &gen.planted);

        AnnealSchedule sched = cfg.schedule;
        sched.seed = anneal_seed;
        sched.time_budget_s = cfg.time_budget_s;
        std::optional<double> ttt = time_to_target(qubo, sched, ex.optimal_energy + 1e-9);

        ex_row.solver = "exact";
        ex_row.time_s = 0.0;
        ex_row.best_objective = m.objective;
        ex_row.feasible = is_one_hot(ex.optimal_states.front(), qubo.n_vertices, qubo.k_clusters);
        ex_row.ari = m.ari_vs_planted.value_or(0.0);
        ex_row.mega_flag = m.mega_cluster_flag;
        ex_row.micro_count = m.micro_cluster_count;
        ex_row.best_energy = ex.optimal_energy;
        ex_row.exact_optimum = ex.optimal_energy;
        ex_row.time_to_target_s = ttt;
        ex_row.cluster_sizes = m.cluster_sizes;
        ex_row.labels = a;
      } catch (const std::exception& e) {
        ex_row.solver = "error";
        ex_row.error = e.what();
      }
      report.rows.push_back(ex_row);
    }
  }
  return report;
}

inline const char* format_name(ReportFormat f) {
  switch (f) {
    case ReportFormat::csv: return "csv";
    case ReportFormat::json: return "json";
    case ReportFormat::markdown: return "markdown";
  }
  return "csv";
}

inline std::string render_row_fields(const BenchRow& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d,%s,%.3f,%.9g,%s,%.6f,%s,%d,%llu",
                r.model, r.solver.c_str(), r.time_s, r.best_objective,
                r.feasible ? "true" : "false", r.ari, r.mega_flag ? "true" : "false",
                r.micro_count, static_cast<unsigned long long>(r.seed));
  return r.name + "," + buf;
}

inline std::string render_csv(const BenchReport& report) {
  std::string out = "name,model,solver,time_s,best_objective,feasible,ari,mega_flag,micro_count,seed\n";
  for (const auto& r : report.rows) {
    out += render_row_fields(r);
    out += '\n';
  }
  return out;
}

inline std::string render_markdown(const BenchReport& report) {
  char buf[256];
  std::string out = "# Clustering benchmark\n\n";
  out += "Toolkit version " + std::string(report.version) + ", anneal budget ";
  std::snprintf(buf, sizeof(buf), "%.3f", report.config.time_budget_s);
  out += buf;
  out += " s, base seed " + std::to_string(report.config.schedule.seed) + ".\n\n";

  out += "## Solver runs\n\n";
  out += "| Name | Model | Solver | Time (s) | Best objective | Feasible | ARI | Mega | Micro | Seed |\n";
  out += "|------|-------|--------|----------|----------------|----------|-----|------|-------|------|\n";
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "| %s | %d | %s | %.3f | %.9g | %s | %.6f | %s | %d | %llu |\n",
                  r.name.c_str(), r.model, r.solver.c_str(), r.time_s, r.best_objective,
                  r.feasible ? "true" : "false", r.ari, r.mega_flag ? "true" : "false",
                  r.micro_count, static_cast<unsigned long long>(r.seed));
    out += buf;
  }

  bool any_exact = false;
  for (const auto& r : report.rows)
    if (r.solver == "exact") any_exact = true;
  if (any_exact) {
    out += "\n## Exact comparison\n\n";
    out += "| Name | Model | Exact objective | Annealed objective | Ratio | Time to target (s) |\n";
    out += "|------|-------|-----------------|--------------------|-------|--------------------|\n";
    for (const auto& ex : report.rows) {
      if (ex.solver != "exact") continue;
      const BenchRow* an = nullptr;
      for (const auto& r : report.rows)
        if (r.solver == "anneal" && r.name == ex.name && r.model == ex.model) an = &r;
      if (!an) continue;
      double ratio = ex.best_objective == 0.0
                         ? (an->best_objective == 0.0 ? 1.0 : std::numeric_limits<double>::infinity())
                         : an->best_objective / ex.best_objective;
      std::string ttt = "timeout";
      if (ex.time_to_target_s) {
        std::snprintf(buf, sizeof(buf), "%.6f", *ex.time_to_target_s);
        ttt = buf;
      }
      std::snprintf(buf, sizeof(buf), "| %s | %d | %.9g | %.9g | %.17g | %s |\n",
                    ex.name.c_str(), ex.model, ex.best_objective, an->best_objective,
                    ratio, ttt.c_str());
      out += buf;
    }
  }
  return out;
}

inline void to_json(json& j, const NamedGraph& g) {
  j = json{{"name", g.name}, {"sbm", g.sbm}};
  if (g.penalty) j["penalty"] = *g.penalty;
}

inline void from_json(const json& j, NamedGraph& g) {
  j.at("name").get_to(g.name);
  j.at("sbm").get_to(g.sbm);
  if (j.contains("penalty") && !j.at("penalty").is_null())
    g.penalty = j.at("penalty").get<double>();
  else
    g.penalty.reset();
}

inline void to_json(json& j, const BenchConfig& c) {
  j = json{{"graphs", c.graphs},
           {"models", c.models},
           {"schedule", c.schedule},
           {"time_budget_s", c.time_budget_s},
           {"output_dir", c.output_dir},
           {"report_format", format_name(c.report_format)},
           {"decode_policy", c.decode_policy == DecodePolicy::strict ? "strict" : "repair"},
           {"exact_cap", c.exact_cap}};
}

inline void from_json(const json& j, BenchConfig& c) {
  j.at("graphs").get_to(c.graphs);
  if (j.contains("models")) {
    j.at("models").get_to(c.models);
  } else {
    ModelParams m1, m2;
    m2.model = Model::m2;
    c.models = {m1, m2};
  }
  if (j.contains("schedule")) j.at("schedule").get_to(c.schedule);
  c.time_budget_s = j.value("time_budget_s", 3.5);
  c.output_dir = j.value("output_dir", std::string("."));
  std::string fmt = j.value("report_format", std::string("csv"));
  if (fmt == "csv")
    c.report_format = ReportFormat::csv;
  else if (fmt == "json")
    c.report_format = ReportFormat::json;
  else if (fmt == "markdown")
    c.report_format = ReportFormat::markdown;
  else
    throw ValidationError("bench: unknown report_format '" + fmt + "'");
  std::string pol = j.value("decode_policy", std::string("repair"));
  if (pol == "strict")
    c.decode_policy = DecodePolicy::strict;
  else if (pol == "repair")
    c.decode_policy = DecodePolicy::repair;
  else
    throw ValidationError("bench: unknown decode_policy '" + pol + "'");
  c.exact_cap = j.value("exact_cap", 24);
}

inline void to_json(json& j, const BenchRow& r) {
  j = json{{"name", r.name},
           {"model", r.model},
           {"solver", r.solver},
           {"time_s", r.time_s},
           {"best_objective", r.best_objective},
           {"feasible", r.feasible},
           {"ari", r.ari},
           {"mega_flag", r.mega_flag},
           {"micro_count", r.micro_count},
           {"seed", r.seed},
           {"wall_time_s", r.wall_time_s},
           {"best_energy", r.best_energy},
           {"cluster_sizes", r.cluster_sizes},
           {"labels", r.labels}};
  j["time_to_target_s"] = r.time_to_target_s ? json(*r.time_to_target_s) : json(nullptr);
  j["exact_optimum"] = r.exact_optimum ? json(*r.exact_optimum) : json(nullptr);
  if (!r.error.empty()) j["error"] = r.error;
}

inline void from_json(const json& j, BenchRow& r) {
  r.name = j.value("name", std::string());
  r.model = j.value("model", 1);
  r.solver = j.value("solver", std::string());
  r.time_s = j.value("time_s", 0.0);
  r.best_objective = j.value("best_objective", 0.0);
  r.feasible = j.value("feasible", false);
  r.ari = j.value("ari", 0.0);
  r.mega_flag = j.value("mega_flag", false);
  r.micro_count = j.value("micro_count", 0);
  r.seed = j.value("seed", std::uint64_t{0});
  r.wall_time_s = j.value("wall_time_s", 0.0);
  r.best_energy = j.value("best_energy", 0.0);
  if (j.contains("cluster_sizes")) j.at("cluster_sizes").get_to(r.cluster_sizes);
  if (j.contains("labels")) j.at("labels").get_to(r.labels);
  if (j.contains("time_to_target_s") && !j.at("time_to_target_s").is_null())
    r.time_to_target_s = j.at("time_to_target_s").get<double>();
  if (j.contains("exact_optimum") && !j.at("exact_optimum").is_null())
    r.exact_optimum = j.at("exact_optimum").get<double>();
  r.error = j.value("error", std::string());
}

inline void to_json(json& j, const BenchReport& r) {
  j = json{{"version", r.version}, {"config", r.config}, {"rows", r.rows}};
}

inline void from_json(const json& j, BenchReport& r) {
  r.version = j.value("version", std::string(kVersion));
  if (j.contains("config")) j.at("config").get_to(r.config);
  j.at("rows").get_to(r.rows);
}

// Writes report.json plus report.csv or report.md according to the selected
// format. Returns the written paths.
inline std::vector<std::string> write_report(const BenchReport& report,
                                             const std::string& dir, ReportFormat fmt) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  auto emit = [&](const std::string& fname, const std::string& content) {
    std::string path = (std::filesystem::path(dir) / fname).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
    written.push_back(path);
  };
  emit("report.json", json(report).dump(2) + "\n");
  if (fmt == ReportFormat::csv) emit("report.csv", render_csv(report));
  if (fmt == ReportFormat::markdown) emit("report.md", render_markdown(report));
  return written;
}

// --- Bundled presets -------------------------------------------------------
//
// Graph presets: five SBM families at two scales. The full-scale family uses
// the sizes below; the -s suffixed family scales the same probability ranges
// down to desk-size graphs suited to quick runs and CI.
//
//   name  N    K  intra        inter
//   L4    247  4  U(0.9,1.0)   U(0.0,0.2)
//   L8    120  8  U(0.9,1.0)   U(0.0,0.2)
//   H4    253  4  U(0.7,1.0)   U(0.0,0.4)
//   H8    127  8  U(0.7,1.0)   U(0.0,0.4)
//   VH8   122  8  U(0.7,1.0)   U(0.0,0.55)
//
// Block sizes are near-equal splits (larger blocks first). Each preset
// carries a one-hot penalty sized to its own distance scale, because the
// penalty is boxed in from two sides. Floor: it must exceed every vertex's
// summed intra-cluster distance (escaping a cluster is otherwise profitable
// and the optimum leaves the one-hot manifold). Ceiling: single-bit moves
// between clusters cost ~P in flight, so they freeze once the temperature
// drops well below P; a penalty orders of magnitude above the distance scale
// freezes the partition while the distance signal is still pure noise, and
// the annealer quenches into a scrambled state. Sizing at roughly 1.5-2.5x
// the largest per-vertex intra-cluster distance sum satisfies both. Measured
// maxima over regenerated instances: L4 ~490, H4 ~645 (penalty 1024);
// L8 ~81 (penalty 128); H8/VH8 ~114 (penalty 256); H4s ~58 (penalty 128);
// L4s/L8s/H8s/VH8s ~25-44 (penalty 64).

inline NamedGraph preset_graph(const std::string& name) {
  auto make = [](std::string n, int N, int K, double il, double ih, double el, double eh,
                 std::uint64_t seed, double penalty) {
    SbmSpec s;
    s.block_sizes = near_equal_blocks(N, K);
    s.p_intra_low = il;
    s.p_intra_high = ih;
    s.p_inter_low = el;
    s.p_inter_high = eh;
    s.seed = seed;
    return NamedGraph{std::move(n), std::move(s), penalty};
  };
  if (name == "L4") return make("L4", 247, 4, 0.9, 1.0, 0.0, 0.2, 11, 1024.0);
  if (name == "L8") return make("L8", 120, 8, 0.9, 1.0, 0.0, 0.2, 12, 128.0);
  if (name == "H4") return make("H4", 253, 4, 0.7, 1.0, 0.0, 0.4, 13, 1024.0);
  if (name == "H8") return make("H8", 127, 8, 0.7, 1.0, 0.0, 0.4, 14, 256.0);
  if (name == "VH8") return make("VH8", 122, 8, 0.7, 1.0, 0.0, 0.55, 15, 256.0);
  if (name == "L4s") return make("L4s", 48, 4, 0.9, 1.0, 0.0, 0.2, 21, 64.0);
  if (name == "L8s") return make("L8s", 56, 8, 0.9, 1.0, 0.0, 0.2, 22, 64.0);
  if (name == "H4s") return make("H4s", 52, 4, 0.7, 1.0, 0.0, 0.4, 23, 128.0);
  if (name == "H8s") return make("H8s", 56, 8, 0.7, 1.0, 0.0, 0.4, 24, 64.0);
  if (name == "VH8s") return make("VH8s", 56, 8, 0.7, 1.0, 0.0, 0.55, 25, 64.0);
  throw ValidationError("unknown graph preset '" + name +
                        "' (try L4, L8, H4, H8, VH8 or their -s variants)");
}

inline BenchConfig preset_bench(const std::string& name) {
  BenchConfig cfg;
  ModelParams m1, m2;
  m2.model = Model::m2;
  if (name == "full") {
    for (const char* g : {"L4", "L8", "H4", "H8", "VH8"})
      cfg.graphs.push_back(preset_graph(g));
    cfg.time_budget_s = 60.0;
  } else if (name == "small") {
    for (const char* g : {"L4s", "L8s", "H4s", "H8s", "VH8s"})
      cfg.graphs.push_back(preset_graph(g));
    cfg.time_budget_s = 40.0;
  } else {
    throw ValidationError("unknown bench preset '" + name +
                          "' (try full or small)");
  }
  cfg.models = {m1, m2};  // per-graph penalties override the model default
  // 2000 sweeps per stage is what the 8-block families need to reach their
  // planted optima; the budgets cover a full schedule with ~2x headroom so
  // runs finish deterministically rather than truncating.
  cfg.schedule.sweeps_per_temperature = 2000;
  cfg.schedule.replicas = 8;
  cfg.schedule.seed = 1;
  return cfg;
}

}  // namespace qclust
