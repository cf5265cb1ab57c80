#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "qclust/errors.hpp"
#include "qclust/graph.hpp"
#include "qclust/rng.hpp"

namespace qclust {

// Stochastic block model. Each block pair (a, b) gets a single edge
// probability drawn uniformly from [low, high): the intra range when
// a == b, the inter range otherwise.
struct SbmSpec {
  std::vector<int> block_sizes;
  double p_intra_low = 0.0;
  double p_intra_high = 1.0;
  double p_inter_low = 0.0;
  double p_inter_high = 1.0;
  std::uint64_t seed = 0;

  int n_vertices() const {
    return std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
  }
  int n_blocks() const { return static_cast<int>(block_sizes.size()); }
};

struct SbmResult {
  Graph graph;
  std::vector<int> planted;  // planted[i] = block of vertex i
};

// Splits n vertices into k blocks whose sizes differ by at most one,
// larger blocks first.
inline std::vector<int> near_equal_blocks(int n, int k) {
  if (k < 1 || n < k) throw ValidationError("cannot split " + std::to_string(n) +
                                            " vertices into " + std::to_string(k) + " blocks");
  std::vector<int> sizes(k, n / k);
  for (int i = 0; i < n % k; ++i) ++sizes[i];
  return sizes;
}

inline void validate(const SbmSpec& spec) {
  if (spec.block_sizes.empty()) throw ValidationError("sbm: no blocks");
  for (int b : spec.block_sizes)
    if (b < 1) throw ValidationError("sbm: block size must be >= 1");
  auto check_range = [](double lo, double hi, const char* which) {
    if (!(0.0 <= lo && lo <= hi && hi <= 1.0))
      throw ValidationError(std::string("sbm: bad ") + which + " probability range");
  };
  check_range(spec.p_intra_low, spec.p_intra_high, "intra");
  check_range(spec.p_inter_low, spec.p_inter_high, "inter");
}

// Deterministic given the spec. Draw order is fixed: first one probability
// per unordered block pair (a <= b, row-major), then one uniform per vertex
// pair (i < j, row-major) tested against the pair's block probability.
inline SbmResult generate_sbm(const SbmSpec& spec) {
  validate(spec);
  const int k = spec.n_blocks();
  const int n = spec.n_vertices();

  std::vector<int> planted(n);
  {
    int v = 0;
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < spec.block_sizes[b]; ++c) planted[v++] = b;
  }

  Xoshiro256 rng(spec.seed);
  std::vector<double> prob(static_cast<std::size_t>(k) * k, 0.0);
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      double lo = (a == b) ? spec.p_intra_low : spec.p_inter_low;
      double hi = (a == b) ? spec.p_intra_high : spec.p_inter_high;
      double p = lo + rng.u01() * (hi - lo);
      prob[static_cast<std::size_t>(a) * k + b] = p;
      prob[static_cast<std::size_t>(b) * k + a] = p;
    }

  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double p = prob[static_cast<std::size_t>(planted[i]) * k + planted[j]];
      if (rng.u01() < p) edges.push_back({i, j, 1.0});
    }

  return SbmResult{Graph(n, edges), std::move(planted)};
}

}  // namespace qclust
