#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qclust/errors.hpp"

namespace qclust {

struct Edge {
  int u = 0;
  int v = 0;
  double w = 1.0;
};

// Undirected graph over vertices 0..n-1 with a dense symmetric adjacency
// matrix. A[i][j] holds the edge weight, 0 where no edge exists, and the
// diagonal is always 0. Dense storage is deliberate: the distance kernel
// scans whole rows, and the graphs this library targets are small enough
// (a few thousand vertices) that n*n doubles are cheap.
class Graph {
 public:
  Graph(int n, const std::vector<Edge>& edges) : n_(n) {
    if (n < 1) throw ValidationError("graph needs at least one vertex");
    adj_.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (const Edge& e : edges) {
      if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
        throw InvalidEdgeError("edge (" + std::to_string(e.u) + ", " +
                               std::to_string(e.v) + ") out of range for n=" +
                               std::to_string(n));
      if (e.u == e.v)
        throw InvalidEdgeError("self-loop at vertex " + std::to_string(e.u));
      if (!(e.w > 0.0))
        throw InvalidEdgeError("edge (" + std::to_string(e.u) + ", " +
                               std::to_string(e.v) + ") has non-positive weight");
      double& slot = adj_[idx(e.u, e.v)];
      if (slot != 0.0)
        throw DuplicateEdgeError("duplicate edge (" + std::to_string(e.u) +
                                 ", " + std::to_string(e.v) + ")");
      slot = e.w;
      adj_[idx(e.v, e.u)] = e.w;
    }
  }

  int n() const { return n_; }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if (adj_[idx(i, j)] != 0.0) ++m;
    return m;
  }

  double weight(int i, int j) const {
    check_vertex(i);
    check_vertex(j);
    return adj_[idx(i, j)];
  }

  // Unchecked row access for hot loops.
  const double* row(int i) const { return adj_.data() + static_cast<std::size_t>(i) * n_; }

  bool is_weighted() const {
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        double w = adj_[idx(i, j)];
        if (w != 0.0 && w != 1.0) return true;
      }
    return false;
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if (adj_[idx(i, j)] != 0.0) out.push_back({i, j, adj_[idx(i, j)]});
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.adj_ == b.adj_;
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }
  void check_vertex(int i) const {
    if (i < 0 || i >= n_)
      throw IndexError("vertex " + std::to_string(i) + " out of range for n=" +
                       std::to_string(n_));
  }

  int n_;
  std::vector<double> adj_;
};

// Text edge-list format:
//   n <N>
//   <i> <j> [weight]
// one edge per line, '#' starts a comment, blank lines are ignored.
inline Graph load_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  int n = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (n < 0) {
      if (first != "n")
        throw ParseError("expected header 'n <count>', got '" + first + "'", lineno);
      if (!(ls >> n) || n < 1)
        throw ParseError("invalid vertex count in header", lineno);
      std::string extra;
      if (ls >> extra) throw ParseError("trailing tokens after header", lineno);
      continue;
    }
    Edge e;
    std::istringstream es(line);
    if (!(es >> e.u >> e.v))
      throw ParseError("expected '<i> <j> [weight]'", lineno);
    if (!(es >> e.w)) e.w = 1.0;
    std::string extra;
    if (es >> extra) throw ParseError("trailing tokens after edge", lineno);
    edges.push_back(e);
  }
  if (n < 0) throw ParseError("missing 'n <count>' header");
  return Graph(n, edges);
}

inline void save_edge_list(const Graph& g, std::ostream& out) {
  out << "n " << g.n() << "\n";
  const bool weighted = g.is_weighted();
  char buf[64];
  for (const Edge& e : g.edges()) {
    if (weighted) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g", e.u, e.v, e.w);
      out << buf << "\n";
    } else {
      out << e.u << " " << e.v << "\n";
    }
  }
}

}  // namespace qclust
