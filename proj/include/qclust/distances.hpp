#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "qclust/errors.hpp"
#include "qclust/graph.hpp"

namespace qclust {

// Neighborhood dissimilarity between two vertices: the Euclidean distance
// between their adjacency rows with columns i and j left out of the sum,
// so a shared edge (or its absence) between the pair itself does not
// contribute. Vertices with identical neighborhoods get distance 0.
inline double burt_distance(const Graph& g, int i, int j) {
  const int n = g.n();
  if (i < 0 || i >= n || j < 0 || j >= n)
    throw IndexError("vertex pair (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") out of range for n=" + std::to_string(n));
  if (i == j)
    throw InvalidPairError("distance requires two distinct vertices, got " +
                           std::to_string(i) + " twice");
  const double* ri = g.row(i);
  const double* rj = g.row(j);
  double sum = 0.0;
  for (int l = 0; l < n; ++l) {
    if (l == i || l == j) continue;
    double diff = ri[l] - rj[l];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

class DistanceMatrix {
 public:
  DistanceMatrix() : n_(0) {}
  DistanceMatrix(int n, std::vector<double> data) : n_(n), d_(std::move(data)) {}

  int n() const { return n_; }
  double operator()(int i, int j) const {
    return d_[static_cast<std::size_t>(i) * n_ + j];
  }
  const double* row(int i) const { return d_.data() + static_cast<std::size_t>(i) * n_; }
  const std::vector<double>& data() const { return d_; }

 private:
  int n_;
  std::vector<double> d_;
};

// All-pairs version. Accumulates the full squared row difference in
// ascending column order, then removes the two excluded columns; this keeps
// the inner loop branch-free and agrees with burt_distance up to the usual
// floating-point rounding (well under the 1e-12 the tests allow).
inline DistanceMatrix distance_matrix(const Graph& g) {
  const int n = g.n();
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* ri = g.row(i);
    for (int j = i + 1; j < n; ++j) {
      const double* rj = g.row(j);
      double sum = 0.0;
      for (int l = 0; l < n; ++l) {
        double diff = ri[l] - rj[l];
        sum += diff * diff;
      }
      double w = ri[j];  // == rj[i]; both excluded terms reduce to w^2
      sum -= 2.0 * w * w;
      sum = std::max(sum, 0.0);
      double dist = std::sqrt(sum);
      d[static_cast<std::size_t>(i) * n + j] = dist;
      d[static_cast<std::size_t>(j) * n + i] = dist;
    }
  }
  return DistanceMatrix(n, std::move(d));
}

// Row-major CSV dump, full double precision, no header row.
inline void write_csv(const DistanceMatrix& m, std::ostream& out) {
  char buf[32];
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace qclust
