#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qclust/distances.hpp"
#include "qclust/graph.hpp"

using namespace qclust;

TEST_CASE("triangle vertices have identical neighborhoods") {
  Graph k3(3, {{0, 1}, {0, 2}, {1, 2}});
  CHECK(burt_distance(k3, 0, 1) == 0.0);
  CHECK(burt_distance(k3, 0, 2) == 0.0);
  CHECK(burt_distance(k3, 1, 2) == 0.0);
}

TEST_CASE("path endpoints match, endpoint and midpoint differ") {
  Graph p3(3, {{0, 1}, {1, 2}});
  CHECK(burt_distance(p3, 0, 2) == 0.0);
  CHECK(burt_distance(p3, 0, 1) == 1.0);
  CHECK(burt_distance(p3, 1, 2) == 1.0);
}

TEST_CASE("star leaves are equivalent, the hub is not") {
  Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
  CHECK(burt_distance(star, 1, 2) == 0.0);
  CHECK(burt_distance(star, 1, 3) == 0.0);
  CHECK(burt_distance(star, 2, 3) == 0.0);
  CHECK(burt_distance(star, 0, 1) == Catch::Approx(std::sqrt(2.0)).margin(1e-15));
}

TEST_CASE("the shared edge itself never contributes") {
  // toggling the edge between i and j must leave d(i,j) unchanged
  Graph with(5, {{0, 1}, {0, 2}, {1, 3}, {2, 4}});
  Graph without(5, {{0, 2}, {1, 3}, {2, 4}});
  CHECK(burt_distance(with, 0, 1) == burt_distance(without, 0, 1));

  auto g1 = oracle::random_graph(30, 0.4, 77);
  std::vector<Edge> edges = g1.edges();
  bool had = g1.weight(3, 9) != 0.0;
  if (had) {
    edges.erase(std::remove_if(edges.begin(), edges.end(),
                               [](const Edge& e) {
                                 return (e.u == 3 && e.v == 9) || (e.u == 9 && e.v == 3);
                               }),
                edges.end());
  } else {
    edges.push_back({3, 9, 1.0});
  }
  Graph g2(30, edges);
  CHECK(burt_distance(g1, 3, 9) == Catch::Approx(burt_distance(g2, 3, 9)).margin(1e-12));
}

TEST_CASE("pair arguments are validated") {
  Graph g(3, {{0, 1}});
  CHECK_THROWS_AS(burt_distance(g, 1, 1), InvalidPairError);
  CHECK_THROWS_AS(burt_distance(g, 0, 3), IndexError);
  CHECK_THROWS_AS(burt_distance(g, -1, 0), IndexError);
}

TEST_CASE("matrix agrees with per-pair distances and the naive oracle") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}) {
    int n = 5 + static_cast<int>(seed) * 7;
    bool weighted = seed % 2 == 0;
    Graph g = oracle::random_graph(n, 0.3, seed * 100, weighted);
    DistanceMatrix m = distance_matrix(g);
    auto naive = oracle::distance_matrix(g);
    for (int i = 0; i < n; ++i) {
      REQUIRE(m(i, i) == 0.0);
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        REQUIRE(m(i, j) == m(j, i));
        REQUIRE(m(i, j) == Catch::Approx(naive[i][j]).margin(1e-12));
        REQUIRE(m(i, j) == Catch::Approx(burt_distance(g, i, j)).margin(1e-12));
      }
    }
  }
}

TEST_CASE("csv dump is row-major with full precision") {
  Graph p3(3, {{0, 1}, {1, 2}});
  DistanceMatrix m = distance_matrix(p3);
  std::ostringstream out;
  write_csv(m, out);
  CHECK(out.str() == "0,1,0\n1,0,1\n0,1,0\n");
}
