#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "qclust/errors.hpp"
#include "qclust/qubo.hpp"
#include "qclust/rng.hpp"

namespace qclust {

struct AnnealSchedule {
  std::optional<double> t_initial;      // default: max |q| coefficient
  std::optional<double> t_final;        // default: 1e-3 * t_initial
  double cooling_ratio = 0.98;
  int sweeps_per_temperature = 10;
  int replicas = 8;
  std::uint64_t seed = 0;
  std::optional<double> offset_escape;  // default: t_initial / 1000
  std::optional<double> time_budget_s;  // wall-clock cap; unset runs the schedule out
  bool parallel_trial = true;           // false: classic sequential Metropolis sweeps
};

struct AnnealResult {
  SpinState best_state;
  double best_energy = 0.0;  // freshly recomputed from best_state
  // (sweep, best-so-far) at each strict improvement. Values are the running
  // incremental energies, so the final entry matches best_energy only within
  // the enforced 1e-9 drift bound, not bitwise.
  std::vector<std::pair<std::uint64_t, double>> energy_trace;
  double wall_time = 0.0;  // seconds, whole call
  int replica_id = 0;      // replica that produced best_state
  std::uint64_t sweeps_executed = 0;  // sweeps run by that replica
};

namespace detail {

// exp(-x) over [0, 40): 1/8-step table plus a short Taylor correction for
// the remainder. Worst-case relative error is the dropped r^5/120 term,
// about 3e-7, far below the resolution that matters for Metropolis
// sampling, and several times cheaper than the libm call in the sweep's
// inner loop.
class NegExp {
 public:
  NegExp() {
    for (int i = 0; i < kTableSize; ++i) table_[i] = std::exp(-0.125 * i);
  }
  double operator()(double x) const {
    int i = static_cast<int>(x * 8.0);
    if (i >= kTableSize) return 0.0;
    double r = x - 0.125 * i;
    double poly = 1.0 + r * (-1.0 + r * (0.5 + r * (-1.0 / 6.0 + r * (1.0 / 24.0))));
    return table_[i] * poly;
  }

 private:
  static constexpr int kTableSize = 321;
  double table_[kTableSize];
};

inline const NegExp& neg_exp() {
  static const NegExp t;
  return t;
}

// Above this multiple of T, exp(-dE/T) is below 2^-53 and the acceptance
// test cannot pass for any generated uniform (u = 0.0 aside, which we treat
// as a reject; that event has probability 2^-53 per draw).
inline constexpr double kAcceptCut = 40.0;

struct ResolvedSchedule {
  double t_initial;
  double t_final;
  double cooling_ratio;
  int sweeps_per_temperature;
  int replicas;
  std::uint64_t seed;
  double offset_escape;
  double budget_s;  // <= 0 means uncapped
  bool parallel_trial;
};

inline ResolvedSchedule resolve(const QuboProblem& p, const AnnealSchedule& s) {
  ResolvedSchedule r;
  double max_q = p.max_abs_coefficient();
  r.t_initial = s.t_initial.value_or(max_q > 0.0 ? max_q : 1.0);
  r.t_final = s.t_final.value_or(1e-3 * r.t_initial);
  r.cooling_ratio = s.cooling_ratio;
  r.sweeps_per_temperature = s.sweeps_per_temperature;
  r.replicas = s.replicas;
  r.seed = s.seed;
  r.offset_escape = s.offset_escape.value_or(r.t_initial / 1000.0);
  r.budget_s = s.time_budget_s.value_or(0.0);
  r.parallel_trial = s.parallel_trial;

  if (!(r.t_initial > 0.0)) throw ValidationError("t_initial must be positive");
  if (!(r.t_final > 0.0)) throw ValidationError("t_final must be positive");
  if (r.t_final > r.t_initial) throw ValidationError("t_final must not exceed t_initial");
  if (!(r.cooling_ratio > 0.0 && r.cooling_ratio < 1.0))
    throw ValidationError("cooling_ratio must lie in (0, 1)");
  if (r.sweeps_per_temperature < 1) throw ValidationError("sweeps_per_temperature must be >= 1");
  if (r.replicas < 1) throw ValidationError("replicas must be >= 1");
  if (r.offset_escape < 0.0) throw ValidationError("offset_escape must be non-negative");
  if (s.time_budget_s && !(*s.time_budget_s > 0.0))
    throw ValidationError("time_budget_s must be positive");
  return r;
}

struct ReplicaOutcome {
  SpinState best_state;
  double best_energy = 0.0;
  std::vector<std::pair<std::uint64_t, double>> trace;
  std::uint64_t sweeps = 0;
  double hit_seconds = -1.0;  // first time best <= target; < 0 if never
};

// One replica's chain. In restart mode the schedule is re-run from fresh
// random states (same generator, never re-seeded) until the target is hit
// or the budget runs out.
class Replica {
 public:
  Replica(const QuboProblem& p, const ResolvedSchedule& rs, int id)
      : p_(p), rs_(rs), rng_(rs.seed + static_cast<std::uint64_t>(id)) {
    const int n = p.n_vars;
    x_.resize(n);
    sgn_.resize(n);
    delta_.resize(n);
    accepters_.reserve(n);
  }

  void run(bool restart_mode, double target, bool has_target,
           std::chrono::steady_clock::time_point t0, std::atomic<bool>* stop,
           ReplicaOutcome& out) {
    const bool has_budget = rs_.budget_s > 0.0;
    bool first_pass = true;
    for (;;) {
      init_state();
      if (first_pass || energy_ < out.best_energy) record_best(out);
      if (first_pass) {
        first_pass = false;
        out.trace.emplace_back(out.sweeps, out.best_energy);
      }
      if (has_target && out.best_energy <= target && out.hit_seconds < 0.0) {
        out.hit_seconds = elapsed(t0);
        if (stop) stop->store(true, std::memory_order_relaxed);
        return;
      }
      bool stopped = run_schedule(target, has_target, t0, stop, out);
      if (!restart_mode || stopped) return;
      if (out.hit_seconds >= 0.0) return;
      if (has_budget && elapsed(t0) >= rs_.budget_s) return;
      if (stop && stop->load(std::memory_order_relaxed)) return;
    }
  }

 private:
  static double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  void init_state() {
    const int n = p_.n_vars;
    for (int v = 0; v < n; ++v) {
      std::uint8_t bit = static_cast<std::uint8_t>(rng_.next() >> 63);
      x_[v] = bit;
      sgn_[v] = bit ? -1.0 : 1.0;
    }
    energy_ = energy(p_, x_);
    for (int v = 0; v < n; ++v) {
      const double* row = p_.row(v);
      double cross = 0.0;
      for (int u = 0; u < n; ++u)
        if (x_[u]) cross += row[u];
      if (x_[v]) cross -= row[v];
      delta_[v] = sgn_[v] * (row[v] + 2.0 * cross);
    }
    e_off_ = 0.0;
  }

  void record_best(ReplicaOutcome& out) const {
    out.best_energy = energy_;
    out.best_state = x_;
  }

  // Returns true if interrupted by budget or stop flag.
  bool run_schedule(double target, bool has_target,
                    std::chrono::steady_clock::time_point t0, std::atomic<bool>* stop,
                    ReplicaOutcome& out) {
    const bool has_budget = rs_.budget_s > 0.0;
    double t = rs_.t_initial;
    for (;;) {
      const double inv_t = 1.0 / t;
      const double cut = kAcceptCut * t;
      for (int sw = 0; sw < rs_.sweeps_per_temperature; ++sw) {
        double before = out.best_energy;
        if (rs_.parallel_trial)
          sweep_parallel(inv_t, cut);
        else
          sweep_sequential(inv_t, cut, out);
        ++out.sweeps;
        if (rs_.parallel_trial && energy_ < out.best_energy) record_best(out);
        if (out.best_energy < before)
          out.trace.emplace_back(out.sweeps, out.best_energy);
        if (has_target && out.best_energy <= target && out.hit_seconds < 0.0) {
          out.hit_seconds = elapsed(t0);
          if (stop) stop->store(true, std::memory_order_relaxed);
        }
        if (stop && stop->load(std::memory_order_relaxed)) return true;
        if (has_budget && elapsed(t0) >= rs_.budget_s) return true;
      }
      if (t <= rs_.t_final) return false;
      t *= rs_.cooling_ratio;
      if (t < rs_.t_final) t = rs_.t_final;
    }
  }

  // DA-style parallel trial: score every candidate flip against the current
  // state, Metropolis-test each, then apply exactly one accepted flip chosen
  // uniformly. A fully rejected sweep raises the escape offset, which is
  // subtracted from every delta in the next tests; any acceptance resets it.
  void sweep_parallel(double inv_t, double cut) {
    const int n = p_.n_vars;
    accepters_.clear();
    const auto& fe = neg_exp();
    for (int v = 0; v < n; ++v) {
      double de = delta_[v] - e_off_;
      if (de <= 0.0) {
        accepters_.push_back(v);
      } else if (de < cut) {
        if (rng_.u01() < fe(de * inv_t)) accepters_.push_back(v);
      }
    }
    if (accepters_.empty()) {
      e_off_ += rs_.offset_escape;
      return;
    }
    std::size_t pick = accepters_.size() == 1
                           ? 0
                           : static_cast<std::size_t>(rng_.below(accepters_.size()));
    flip(accepters_[pick]);
    e_off_ = 0.0;
  }

  // Classic sequential Metropolis: visit variables in order, flipping
  // immediately on acceptance. Kept for comparison runs.
  void sweep_sequential(double inv_t, double cut, ReplicaOutcome& out) {
    const int n = p_.n_vars;
    const auto& fe = neg_exp();
    bool any = false;
    for (int v = 0; v < n; ++v) {
      double de = delta_[v] - e_off_;
      bool accept = de <= 0.0 || (de < cut && rng_.u01() < fe(de * inv_t));
      if (!accept) continue;
      flip(v);
      any = true;
      if (energy_ < out.best_energy) record_best(out);
    }
    if (any)
      e_off_ = 0.0;
    else
      e_off_ += rs_.offset_escape;
  }

  void flip(int v) {
    const int n = p_.n_vars;
    const double dv = delta_[v];
    const double* row = p_.row(v);
    const double c = 2.0 * sgn_[v];
    double* d = delta_.data();
    const double* s = sgn_.data();
    for (int u = 0; u < n; ++u) d[u] += c * row[u] * s[u];
    delta_[v] = -dv;
    sgn_[v] = -sgn_[v];
    x_[v] ^= 1u;
    energy_ += dv;
  }

  const QuboProblem& p_;
  const ResolvedSchedule& rs_;
  Xoshiro256 rng_;
  SpinState x_;
  std::vector<double> sgn_;
  std::vector<double> delta_;
  std::vector<int> accepters_;
  double energy_ = 0.0;
  double e_off_ = 0.0;
};

inline std::vector<ReplicaOutcome> run_replicas(const QuboProblem& p,
                                                const ResolvedSchedule& rs,
                                                bool restart_mode, double target,
                                                bool has_target,
                                                std::chrono::steady_clock::time_point t0,
                                                std::atomic<bool>* stop) {
  std::vector<ReplicaOutcome> outs(rs.replicas);
  if (rs.replicas == 1) {
    Replica(p, rs, 0).run(restart_mode, target, has_target, t0, stop, outs[0]);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(rs.replicas);
    for (int r = 0; r < rs.replicas; ++r)
      threads.emplace_back([&, r] {
        Replica(p, rs, r).run(restart_mode, target, has_target, t0, stop, outs[r]);
      });
    for (auto& th : threads) th.join();
  }
  for (auto& o : outs) {
    double fresh = energy(p, o.best_state);
    // drift scales with the energy magnitude over long chains, so the guard
    // is relative; 1e-9 absolute would trip on large instances
    if (std::abs(fresh - o.best_energy) > 1e-9 * (1.0 + std::abs(fresh)))
      throw std::logic_error("incremental energy drifted from full recomputation");
    o.best_energy = fresh;
  }
  return outs;
}

}  // namespace detail

// Runs `replicas` independent chains and returns the best result found.
// Deterministic given (problem, schedule, seed) as long as no wall-clock
// budget cuts the schedule short.
inline AnnealResult anneal(const QuboProblem& p, const AnnealSchedule& s) {
  if (p.n_vars < 1) throw ValidationError("problem has no variables");
  const auto rs = detail::resolve(p, s);
  const auto t0 = std::chrono::steady_clock::now();
  auto outs = detail::run_replicas(p, rs, false, 0.0, false, t0, nullptr);

  int winner = 0;
  for (int r = 1; r < rs.replicas; ++r)
    if (outs[r].best_energy < outs[winner].best_energy) winner = r;

  AnnealResult res;
  res.best_state = std::move(outs[winner].best_state);
  res.best_energy = outs[winner].best_energy;
  res.energy_trace = std::move(outs[winner].trace);
  res.replica_id = winner;
  res.sweeps_executed = outs[winner].sweeps;
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

// Repeatedly anneals (fresh random restarts, continuous PRNG streams) until
// some replica's best energy reaches `target`, and returns the wall time of
// that first hit. Empty result means the budget expired first. The budget
// comes from the schedule, defaulting to 3.5 s when unset.
inline std::optional<double> time_to_target(const QuboProblem& p, const AnnealSchedule& s,
                                            double target) {
  if (p.n_vars < 1) throw ValidationError("problem has no variables");
  if (std::isnan(target)) throw ValidationError("target must not be NaN");
  AnnealSchedule s2 = s;
  if (!s2.time_budget_s) s2.time_budget_s = 3.5;
  const auto rs = detail::resolve(p, s2);
  const auto t0 = std::chrono::steady_clock::now();
  std::atomic<bool> stop{false};
  auto outs = detail::run_replicas(p, rs, true, target, true, t0, &stop);

  double best_hit = -1.0;
  for (const auto& o : outs)
    if (o.hit_seconds >= 0.0 && (best_hit < 0.0 || o.hit_seconds < best_hit))
      best_hit = o.hit_seconds;
  if (best_hit < 0.0) return std::nullopt;
  return best_hit;
}

}  // namespace qclust
