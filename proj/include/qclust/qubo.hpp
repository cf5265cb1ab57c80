#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qclust/distances.hpp"
#include "qclust/errors.hpp"

namespace qclust {

enum class Model { m1 = 1, m2 = 2 };

struct ModelParams {
  int k_clusters = 2;
  Model model = Model::m1;
  double penalty = 16.0;          // one-hot constraint weight P
  double lambda = 0.75;           // cluster-size regularizer weight (model 2)
  std::optional<double> u_bar;    // target cluster size; defaults to n/k
};

using SpinState = std::vector<std::uint8_t>;

// Symmetric QUBO in minimization form. Variable v = vertex * k + cluster.
// Energy of a state x in {0,1}^n_vars:
//
//   E(x) = offset + sum_v q[v][v] x_v + sum_{u<v} 2 q[u][v] x_u x_v
//
// i.e. off-diagonal couplings are stored halved and counted twice, which
// keeps q symmetric and makes the single-flip delta a plain row scan.
struct QuboProblem {
  int n_vertices = 0;
  int k_clusters = 0;
  int n_vars = 0;
  double offset = 0.0;
  std::vector<double> q;  // row-major n_vars * n_vars

  int var_index(int vertex, int cluster) const { return vertex * k_clusters + cluster; }
  int vertex_of(int var) const { return var / k_clusters; }
  int cluster_of(int var) const { return var % k_clusters; }

  double at(int u, int v) const { return q[static_cast<std::size_t>(u) * n_vars + v]; }
  const double* row(int v) const { return q.data() + static_cast<std::size_t>(v) * n_vars; }

  // Largest |q[u][v]| over all entries; used as the default starting
  // temperature for annealing.
  double max_abs_coefficient() const {
    double m = 0.0;
    for (double c : q) m = std::max(m, std::abs(c));
    return m;
  }
};

inline double energy(const QuboProblem& p, const SpinState& x) {
  if (static_cast<int>(x.size()) != p.n_vars)
    throw DimensionError("state has " + std::to_string(x.size()) + " bits, problem has " +
                         std::to_string(p.n_vars) + " variables");
  double e = p.offset;
  for (int v = 0; v < p.n_vars; ++v) {
    if (!x[v]) continue;
    const double* row = p.row(v);
    e += row[v];
    for (int u = v + 1; u < p.n_vars; ++u)
      if (x[u]) e += 2.0 * row[u];
  }
  return e;
}

// Energy change from flipping bit v in state x.
inline double delta_energy(const QuboProblem& p, const SpinState& x, int v) {
  if (v < 0 || v >= p.n_vars)
    throw IndexError("variable " + std::to_string(v) + " out of range");
  const double* row = p.row(v);
  double cross = 0.0;
  for (int u = 0; u < p.n_vars; ++u)
    if (x[u] && u != v) cross += row[u];
  double sign = x[v] ? -1.0 : 1.0;
  return sign * (row[v] + 2.0 * cross);
}

// Compiles the clustering objective into a QUBO. Model 1 adds the one-hot
// assignment penalty to the intra-cluster distance objective; model 2
// additionally pulls every cluster's size toward u_bar.
inline QuboProblem build_qubo(const DistanceMatrix& d, const ModelParams& params,
                              int capacity = 8192) {
  const int n = d.n();
  const int k = params.k_clusters;
  if (n < 1) throw ValidationError("distance matrix is empty");
  if (k < 1) throw ValidationError("k_clusters must be >= 1");
  if (!(params.penalty > 0.0)) throw ValidationError("penalty must be positive");

  for (int i = 0; i < n; ++i) {
    if (d(i, i) != 0.0) throw ValidationError("distance matrix has a nonzero diagonal");
    for (int j = i + 1; j < n; ++j) {
      if (d(i, j) != d(j, i)) throw ValidationError("distance matrix is not symmetric");
      if (!(d(i, j) >= 0.0)) throw ValidationError("distance matrix has a negative entry");
    }
  }

  const long long nv = static_cast<long long>(n) * k;
  if (nv > capacity)
    throw ProblemTooLargeError("problem needs " + std::to_string(nv) +
                               " variables, capacity is " + std::to_string(capacity));

  double u_bar = params.u_bar.value_or(static_cast<double>(n) / k);
  if (params.model == Model::m2) {
    if (!(params.lambda > 0.0)) throw ValidationError("lambda must be positive");
    if (!(u_bar > 0.0)) throw ValidationError("u_bar must be positive");
  }

  QuboProblem p;
  p.n_vertices = n;
  p.k_clusters = k;
  p.n_vars = static_cast<int>(nv);
  p.q.assign(static_cast<std::size_t>(p.n_vars) * p.n_vars, 0.0);

  auto add = [&](int u, int v, double c) {
    p.q[static_cast<std::size_t>(u) * p.n_vars + v] += c;
    if (u != v) p.q[static_cast<std::size_t>(v) * p.n_vars + u] += c;
  };

  // Intra-cluster distance objective: d_ij per same-cluster pair, stored halved.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double half = 0.5 * d(i, j);
      if (half == 0.0) continue;
      for (int c = 0; c < k; ++c) add(p.var_index(i, c), p.var_index(j, c), half);
    }

  // One-hot penalty P * sum_i (sum_c x_ic - 1)^2, expanded.
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) {
      add(p.var_index(i, c), p.var_index(i, c), -params.penalty);
      for (int c2 = c + 1; c2 < k; ++c2)
        add(p.var_index(i, c), p.var_index(i, c2), params.penalty);
    }
  }
  p.offset += static_cast<double>(n) * params.penalty;

  // Cluster-size regularizer lambda * sum_c (sum_i x_ic - u_bar)^2.
  if (params.model == Model::m2) {
    double diag = params.lambda * (1.0 - 2.0 * u_bar);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < k; ++c) {
        add(p.var_index(i, c), p.var_index(i, c), diag);
        for (int j = i + 1; j < n; ++j)
          add(p.var_index(i, c), p.var_index(j, c), params.lambda);
      }
    p.offset += k * params.lambda * u_bar * u_bar;
  }

  for (int u = 0; u < p.n_vars; ++u)
    for (int v = u + 1; v < p.n_vars; ++v)
      if (p.at(u, v) != p.at(v, u))
        throw std::logic_error("qubo matrix lost symmetry during build");

  return p;
}

}  // namespace qclust
