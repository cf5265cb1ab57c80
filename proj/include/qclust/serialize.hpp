#pragma once

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "qclust/anneal.hpp"
#include "qclust/clustering.hpp"
#include "qclust/errors.hpp"
#include "qclust/exact.hpp"
#include "qclust/qubo.hpp"
#include "qclust/sbm.hpp"

namespace qclust {

using nlohmann::json;

inline void to_json(json& j, const SbmSpec& s) {
  j = json{{"block_sizes", s.block_sizes},
           {"p_intra", {s.p_intra_low, s.p_intra_high}},
           {"p_inter", {s.p_inter_low, s.p_inter_high}},
           {"seed", s.seed}};
}

inline void from_json(const json& j, SbmSpec& s) {
  j.at("block_sizes").get_to(s.block_sizes);
  auto intra = j.at("p_intra");
  auto inter = j.at("p_inter");
  s.p_intra_low = intra.at(0).get<double>();
  s.p_intra_high = intra.at(1).get<double>();
  s.p_inter_low = inter.at(0).get<double>();
  s.p_inter_high = inter.at(1).get<double>();
  s.seed = j.value("seed", std::uint64_t{0});
}

inline void to_json(json& j, const ModelParams& m) {
  j = json{{"k_clusters", m.k_clusters},
           {"model", static_cast<int>(m.model)},
           {"penalty", m.penalty},
           {"lambda", m.lambda}};
  if (m.u_bar)
    j["u_bar"] = *m.u_bar;
  else
    j["u_bar"] = nullptr;
}

inline void from_json(const json& j, ModelParams& m) {
  m.k_clusters = j.value("k_clusters", 2);
  int model = j.value("model", 1);
  if (model != 1 && model != 2) throw ValidationError("model must be 1 or 2");
  m.model = model == 1 ? Model::m1 : Model::m2;
  m.penalty = j.value("penalty", 16.0);
  m.lambda = j.value("lambda", 0.75);
  if (j.contains("u_bar") && !j.at("u_bar").is_null())
    m.u_bar = j.at("u_bar").get<double>();
  else
    m.u_bar.reset();
}

inline void to_json(json& j, const AnnealSchedule& s) {
  j = json::object();
  if (s.t_initial) j["t_initial"] = *s.t_initial;
  if (s.t_final) j["t_final"] = *s.t_final;
  j["cooling_ratio"] = s.cooling_ratio;
  j["sweeps_per_temperature"] = s.sweeps_per_temperature;
  j["replicas"] = s.replicas;
  j["seed"] = s.seed;
  if (s.offset_escape) j["offset_escape"] = *s.offset_escape;
  if (s.time_budget_s) j["time_budget_s"] = *s.time_budget_s;
  j["parallel_trial"] = s.parallel_trial;
}

inline void from_json(const json& j, AnnealSchedule& s) {
  auto opt = [&](const char* key) -> std::optional<double> {
    if (j.contains(key) && !j.at(key).is_null()) return j.at(key).get<double>();
    return std::nullopt;
  };
  s.t_initial = opt("t_initial");
  s.t_final = opt("t_final");
  s.cooling_ratio = j.value("cooling_ratio", 0.98);
  s.sweeps_per_temperature = j.value("sweeps_per_temperature", 10);
  s.replicas = j.value("replicas", 8);
  s.seed = j.value("seed", std::uint64_t{0});
  s.offset_escape = opt("offset_escape");
  s.time_budget_s = opt("time_budget_s");
  s.parallel_trial = j.value("parallel_trial", true);
}

// Dense row-major container with the index map (variable v = vertex * k +
// cluster) carried alongside so other tools can interpret the coefficients.
inline void to_json(json& j, const QuboProblem& p) {
  j = json{{"n_vars", p.n_vars},
           {"offset", p.offset},
           {"q", p.q},
           {"index_map",
            {{"n_vertices", p.n_vertices},
             {"k_clusters", p.k_clusters},
             {"variable_order", "vertex_major"}}}};
}

inline void from_json(const json& j, QuboProblem& p) {
  j.at("n_vars").get_to(p.n_vars);
  j.at("offset").get_to(p.offset);
  j.at("q").get_to(p.q);
  const auto& im = j.at("index_map");
  im.at("n_vertices").get_to(p.n_vertices);
  im.at("k_clusters").get_to(p.k_clusters);
  if (p.n_vars < 1) throw ValidationError("qubo: n_vars must be >= 1");
  if (p.n_vertices * p.k_clusters != p.n_vars)
    throw ValidationError("qubo: index map does not cover n_vars");
  if (p.q.size() != static_cast<std::size_t>(p.n_vars) * p.n_vars)
    throw ValidationError("qubo: coefficient array must hold n_vars^2 entries");
  for (int u = 0; u < p.n_vars; ++u)
    for (int v = u + 1; v < p.n_vars; ++v)
      if (p.at(u, v) != p.at(v, u)) throw ValidationError("qubo: matrix is not symmetric");
}

inline void to_json(json& j, const AnnealResult& r) {
  json trace = json::array();
  for (const auto& [sweep, e] : r.energy_trace) trace.push_back({sweep, e});
  j = json{{"best_energy", r.best_energy},
           {"best_state", r.best_state},
           {"energy_trace", trace},
           {"wall_time_s", r.wall_time},
           {"replica_id", r.replica_id},
           {"sweeps_executed", r.sweeps_executed}};
}

inline void to_json(json& j, const ExactResult& r) {
  j = json{{"optimal_energy", r.optimal_energy},
           {"optimal_states", r.optimal_states},
           {"states_enumerated", r.states_enumerated}};
}

inline void to_json(json& j, const ClusterMetrics& m) {
  j = json{{"objective", m.objective},
           {"cluster_sizes", m.cluster_sizes},
           {"mega_cluster_flag", m.mega_cluster_flag},
           {"micro_cluster_count", m.micro_cluster_count}};
  if (m.ari_vs_planted)
    j["ari_vs_planted"] = *m.ari_vs_planted;
  else
    j["ari_vs_planted"] = nullptr;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void save_json_file(const json& j, const std::string& path, int indent = 2) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(indent) << "\n";
}

}  // namespace qclust
