#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qclust/distances.hpp"
#include "qclust/errors.hpp"
#include "qclust/qubo.hpp"

namespace qclust {

using Assignment = std::vector<int>;  // vertex -> cluster label

enum class DecodePolicy { strict, repair };

inline bool is_one_hot(const SpinState& x, int n, int k) {
  if (static_cast<int>(x.size()) != n * k)
    throw DimensionError("state has " + std::to_string(x.size()) + " bits, expected " +
                         std::to_string(n * k));
  for (int i = 0; i < n; ++i) {
    int bits = 0;
    for (int c = 0; c < k; ++c) bits += x[static_cast<std::size_t>(i) * k + c];
    if (bits != 1) return false;
  }
  return true;
}

// Turns a spin state into vertex labels. Strict mode demands every vertex
// row be exactly one-hot. Repair mode first places the well-formed vertices,
// then fixes violators in ascending vertex order: a multi-bit vertex keeps
// the set cluster with the smallest summed distance to the members assigned
// so far, a zero-bit vertex picks from all clusters by the same rule, and
// ties go to the lowest cluster id. Repair therefore needs the distance
// matrix whenever violations are present.
inline Assignment decode(const SpinState& x, int n, int k,
                         DecodePolicy policy = DecodePolicy::strict,
                         const DistanceMatrix* dist = nullptr) {
  if (n < 1 || k < 1) throw ValidationError("decode needs n >= 1 and k >= 1");
  if (static_cast<int>(x.size()) != n * k)
    throw DimensionError("state has " + std::to_string(x.size()) + " bits, expected " +
                         std::to_string(n * k));

  Assignment a(n, -1);
  std::vector<int> violators;
  for (int i = 0; i < n; ++i) {
    int bits = 0;
    int last = -1;
    for (int c = 0; c < k; ++c)
      if (x[static_cast<std::size_t>(i) * k + c]) {
        ++bits;
        last = c;
      }
    if (bits == 1) {
      a[i] = last;
    } else if (policy == DecodePolicy::strict) {
      throw ConstraintViolationError("vertex " + std::to_string(i) + " has " +
                                         std::to_string(bits) + " set bits",
                                     i);
    } else {
      violators.push_back(i);
    }
  }

  if (!violators.empty() && dist == nullptr)
    throw ValidationError("repair decoding needs a distance matrix");
  if (dist && !violators.empty() && dist->n() != n)
    throw DimensionError("distance matrix size does not match vertex count");

  for (int v : violators) {
    bool zero_row = true;
    for (int c = 0; c < k; ++c)
      if (x[static_cast<std::size_t>(v) * k + c]) {
        zero_row = false;
        break;
      }
    int best_c = -1;
    double best_score = 0.0;
    for (int c = 0; c < k; ++c) {
      // zero-bit rows consider every cluster, multi-bit rows only their set ones
      if (!zero_row && !x[static_cast<std::size_t>(v) * k + c]) continue;
      double score = 0.0;
      for (int u = 0; u < n; ++u)
        if (u != v && a[u] == c) score += (*dist)(v, u);
      if (best_c < 0 || score < best_score) {
        best_c = c;
        best_score = score;
      }
    }
    a[v] = best_c;
  }
  return a;
}

inline SpinState encode(const Assignment& a, int k) {
  if (k < 1) throw ValidationError("encode needs k >= 1");
  SpinState x(a.size() * static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || a[i] >= k)
      throw ValidationError("vertex " + std::to_string(i) + " has label " +
                            std::to_string(a[i]) + " outside [0, " + std::to_string(k) + ")");
    x[i * k + a[i]] = 1;
  }
  return x;
}

// Sum of pairwise distances inside each cluster: the quantity the QUBO's
// distance term compiles, evaluated directly from labels.
inline double objective_value(const DistanceMatrix& d, const Assignment& a) {
  if (d.n() != static_cast<int>(a.size()))
    throw DimensionError("assignment and distance matrix disagree on vertex count");
  double sum = 0.0;
  const int n = d.n();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (a[i] == a[j]) sum += d(i, j);
  return sum;
}

inline std::vector<int> cluster_sizes(const Assignment& a, int k) {
  std::vector<int> sizes(k, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || a[i] >= k)
      throw ValidationError("vertex " + std::to_string(i) + " has label outside [0, " +
                            std::to_string(k) + ")");
    ++sizes[a[i]];
  }
  return sizes;
}

// Chance-corrected pair-counting agreement between two labelings of the
// same vertices. 1 means identical up to label permutation. When the
// correction denominator vanishes (e.g. both partitions put everything in
// one cluster) the partitions' pair structures are identical and 1 is
// returned.
inline double adjusted_rand_index(const Assignment& a, const Assignment& b) {
  if (a.size() != b.size())
    throw DimensionError("partitions label different numbers of vertices");
  if (a.empty()) throw ValidationError("partitions are empty");

  std::map<std::pair<int, int>, long long> cont;
  std::map<int, long long> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++cont[{a[i], b[i]}];
    ++ra[a[i]];
    ++rb[b[i]];
  }
  auto choose2 = [](long long m) { return 0.5 * static_cast<double>(m) * (m - 1); };
  double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [_, c] : cont) sum_ij += choose2(c);
  for (const auto& [_, c] : ra) sum_a += choose2(c);
  for (const auto& [_, c] : rb) sum_b += choose2(c);
  double pairs = choose2(static_cast<long long>(a.size()));
  double expected = sum_a * sum_b / pairs;
  double max_index = 0.5 * (sum_a + sum_b);
  double denom = max_index - expected;
  if (denom == 0.0) return 1.0;
  return (sum_ij - expected) / denom;
}

// Degenerate-solution detectors: a mega-cluster swallows nearly everything,
// micro-clusters are non-empty but nearly empty.
inline std::pair<bool, int> degeneracy_report(const Assignment& a, double mega_threshold = 0.9,
                                              int micro_threshold = 2) {
  if (a.empty()) throw ValidationError("assignment is empty");
  std::map<int, int> sizes;
  for (int label : a) ++sizes[label];
  bool mega = false;
  int micro = 0;
  const double n = static_cast<double>(a.size());
  for (const auto& [_, s] : sizes) {
    if (s >= mega_threshold * n) mega = true;
    if (s <= micro_threshold) ++micro;
  }
  return {mega, micro};
}

inline void write_assignment_csv(const Assignment& a, std::ostream& out) {
  out << "vertex,cluster\n";
  for (std::size_t i = 0; i < a.size(); ++i) out << i << ',' << a[i] << '\n';
}

struct ClusterMetrics {
  double objective = 0.0;
  std::vector<int> cluster_sizes;
  std::optional<double> ari_vs_planted;
  bool mega_cluster_flag = false;
  int micro_cluster_count = 0;
};

inline ClusterMetrics compute_metrics(const DistanceMatrix& d, const Assignment& a, int k,
                                      const Assignment* planted = nullptr) {
  ClusterMetrics m;
  m.objective = objective_value(d, a);
  m.cluster_sizes = cluster_sizes(a, k);
  if (planted) m.ari_vs_planted = adjusted_rand_index(a, *planted);
  auto [mega, micro] = degeneracy_report(a);
  m.mega_cluster_flag = mega;
  m.micro_cluster_count = micro;
  return m;
}

}  // namespace qclust
