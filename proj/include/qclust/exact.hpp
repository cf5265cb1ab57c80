#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qclust/errors.hpp"
#include "qclust/qubo.hpp"

namespace qclust {

struct ExactResult {
  double optimal_energy = 0.0;
  std::vector<SpinState> optimal_states;  // all global minimizers, sorted
  std::uint64_t states_enumerated = 0;
};

namespace detail {

// Hard ceiling regardless of the caller's cap: 2^30 steps is already ~10 s.
inline constexpr int kExactHardLimit = 30;

// Argmin lists are capped to keep pathological flat landscapes (e.g. an
// all-zero matrix) from exhausting memory; realistic clustering problems
// have at most a few K! symmetric optima.
inline constexpr std::size_t kMaxStoredMinima = std::size_t(1) << 20;

inline SpinState state_from_code(std::uint64_t code, int n) {
  std::uint64_t gray = code ^ (code >> 1);
  SpinState x(n, 0);
  for (int v = 0; v < n; ++v) x[v] = (gray >> v) & 1u;
  return x;
}

}  // namespace detail

// Exhaustive minimization over all 2^n_vars states. Steps through states in
// Gray-code order so each step is a single maintained-delta update, then
// re-evaluates every candidate minimizer from scratch before reporting.
inline ExactResult solve_exact(const QuboProblem& p, int cap = 24) {
  const int n = p.n_vars;
  if (n < 1) throw ValidationError("problem has no variables");
  if (n > cap || n > detail::kExactHardLimit)
    throw ProblemTooLargeError("exhaustive search over " + std::to_string(n) +
                               " variables exceeds the cap of " +
                               std::to_string(std::min(cap, detail::kExactHardLimit)));

  SpinState x(n, 0);
  std::vector<double> sgn(n, 1.0);   // 1 - 2*x[v]
  std::vector<double> delta(n);
  for (int v = 0; v < n; ++v) delta[v] = p.at(v, v);

  double e = p.offset;
  double best = e;
  std::vector<std::uint64_t> argmin_codes{0};

  // The running energy drifts by accumulated rounding over the walk, so ties
  // are collected with slack here and settled by fresh evaluation below.
  // Only candidates beaten by more than the slack are discarded outright.
  const double slack = 1e-7 * (1.0 + p.max_abs_coefficient());

  const std::uint64_t total = std::uint64_t(1) << n;
  for (std::uint64_t t = 1; t < total; ++t) {
    const int v = __builtin_ctzll(t);
    const double dv = delta[v];
    e += dv;

    const double* row = p.row(v);
    const double c = 2.0 * sgn[v];
    for (int u = 0; u < n; ++u) delta[u] += c * row[u] * sgn[u];
    delta[v] = -dv;
    sgn[v] = -sgn[v];
    x[v] ^= 1u;

    if (e < best - slack) {
      best = e;
      argmin_codes.assign(1, t);
    } else if (e <= best + slack) {
      if (e < best) best = e;
      if (argmin_codes.size() < detail::kMaxStoredMinima) argmin_codes.push_back(t);
    }
  }

  // Fresh evaluation removes any accumulated rounding from the incremental
  // walk before energies are reported or states filtered.
  double fresh_best = 0.0;
  std::vector<SpinState> states;
  states.reserve(argmin_codes.size());
  std::vector<double> fresh(argmin_codes.size());
  for (std::size_t i = 0; i < argmin_codes.size(); ++i) {
    states.push_back(detail::state_from_code(argmin_codes[i], n));
    fresh[i] = energy(p, states.back());
    if (i == 0 || fresh[i] < fresh_best) fresh_best = fresh[i];
  }

  ExactResult r;
  r.optimal_energy = fresh_best;
  r.states_enumerated = total;
  for (std::size_t i = 0; i < states.size(); ++i)
    if (fresh[i] == fresh_best) r.optimal_states.push_back(std::move(states[i]));
  std::sort(r.optimal_states.begin(), r.optimal_states.end());
  return r;
}

// Exhaustive minimization over the K^N one-hot labelings only, evaluating
// the clustering objective directly (plus the size regularizer for model 2).
// Cross-checks the penalty expansion: whenever the unconstrained optimum is
// feasible the two solvers must agree.
inline ExactResult solve_exact_labels(const DistanceMatrix& d, const ModelParams& params,
                                      int cap = 24) {
  const int n = d.n();
  const int k = params.k_clusters;
  if (n < 1) throw ValidationError("distance matrix is empty");
  if (k < 1) throw ValidationError("k_clusters must be >= 1");

  // K^N <= 2^cap, checked in logs to avoid overflow.
  const double bits = n * std::log2(static_cast<double>(k));
  if (bits > std::min(cap, detail::kExactHardLimit) + 1e-9)
    throw ProblemTooLargeError("label search needs " + std::to_string(k) + "^" +
                               std::to_string(n) + " evaluations, over the 2^" +
                               std::to_string(std::min(cap, detail::kExactHardLimit)) +
                               " cap");

  const double u_bar = params.u_bar.value_or(static_cast<double>(n) / k);
  const bool reg = params.model == Model::m2;

  std::vector<int> choice(n, -1);
  std::vector<int> sizes(k, 0);
  std::vector<double> partial(n + 1, 0.0);  // distance objective of the prefix
  std::vector<std::vector<int>> argmins;
  double best = 0.0;
  bool have_best = false;
  std::uint64_t enumerated = 0;

  // Iterative backtracking over labelings, last vertex varying fastest;
  // partial[v] carries the intra-cluster distance sum of vertices 0..v-1 so
  // each leaf costs O(N + K).
  int v = 0;
  while (v >= 0) {
    if (choice[v] >= 0) --sizes[choice[v]];
    int c = choice[v] + 1;
    if (c == k) {
      choice[v] = -1;
      --v;
      continue;
    }
    choice[v] = c;
    ++sizes[c];
    double add = 0.0;
    for (int u = 0; u < v; ++u)
      if (choice[u] == c) add += d(u, v);
    partial[v + 1] = partial[v] + add;
    if (v + 1 < n) {
      ++v;
      continue;
    }
    double val = partial[n];
    if (reg) {
      double sq = 0.0;
      for (int b = 0; b < k; ++b) {
        double dev = sizes[b] - u_bar;
        sq += dev * dev;
      }
      val += params.lambda * sq;
    }
    ++enumerated;
    if (!have_best || val < best) {
      best = val;
      have_best = true;
      argmins.assign(1, choice);
    } else if (val == best && argmins.size() < detail::kMaxStoredMinima) {
      argmins.push_back(choice);
    }
  }

  ExactResult r;
  r.optimal_energy = best;
  r.states_enumerated = enumerated;
  for (const auto& lab : argmins) {
    SpinState s(static_cast<std::size_t>(n) * k, 0);
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i) * k + lab[i]] = 1;
    r.optimal_states.push_back(std::move(s));
  }
  std::sort(r.optimal_states.begin(), r.optimal_states.end());
  return r;
}

}  // namespace qclust
