#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "lqgraph/errors.hpp"
#include "lqgraph/graph.hpp"

using namespace lqg;

namespace {

std::size_t degree_sum(const Graph &g) {
  std::size_t s = 0;
  for (int d : g.degrees())
    s += d;
  return s;
}

Graph path3() { return edge_list_graph(3, {{0, 1}, {1, 2}}); }

} // namespace

TEST(BuildGraph, CompleteDegrees) {
  const Graph g = complete_graph(5);
  EXPECT_EQ(g.n(), 5);
  for (int v = 0; v < 5; ++v)
    EXPECT_EQ(g.degree(v), 4);
  EXPECT_EQ(g.hint(), TransitiveHint::known_transitive);
}

TEST(BuildGraph, CycleEdges) {
  const Graph g = cycle_graph(4);
  const std::vector<std::pair<int, int>> expected = {{0, 1}, {0, 3}, {1, 2}, {2, 3}};
  EXPECT_EQ(g.edges(), expected);
  for (int v = 0; v < 4; ++v)
    EXPECT_EQ(g.degree(v), 2);
}

TEST(BuildGraph, TorusDegreeIsTwiceDimension) {
  const Graph g = torus_graph(3, 2);
  EXPECT_EQ(g.n(), 9);
  for (int v = 0; v < 9; ++v)
    EXPECT_EQ(g.degree(v), 4);
  const Graph g3 = torus_graph(4, 3);
  EXPECT_EQ(g3.n(), 64);
  for (int v = 0; v < 64; ++v)
    EXPECT_EQ(g3.degree(v), 6);
}

TEST(BuildGraph, HandshakeIdentity) {
  for (const Graph &g : {complete_graph(7), cycle_graph(9), torus_graph(5, 2),
                         erdos_renyi_graph(40, 0.2, 3), random_regular_graph(30, 4, 5)})
    EXPECT_EQ(degree_sum(g), 2 * g.edge_count());
}

TEST(BuildGraph, AdjacencySymmetricZeroDiagonal) {
  const Eigen::MatrixXd a = erdos_renyi_graph(30, 0.4, 11).adjacency();
  EXPECT_EQ((a - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(a.diagonal().cwiseAbs().maxCoeff(), 0.0);
}

TEST(BuildGraph, SeedDeterminism) {
  EXPECT_EQ(erdos_renyi_graph(50, 0.3, 7).edges(), erdos_renyi_graph(50, 0.3, 7).edges());
  EXPECT_NE(erdos_renyi_graph(50, 0.3, 7).edges(), erdos_renyi_graph(50, 0.3, 8).edges());
  EXPECT_EQ(random_regular_graph(100, 3, 1).edges(), random_regular_graph(100, 3, 1).edges());
}

TEST(BuildGraph, RandomRegularIsSimpleAndRegular) {
  const Graph g = random_regular_graph(200, 3, 42);
  for (int v = 0; v < g.n(); ++v)
    EXPECT_EQ(g.degree(v), 3);
  std::set<std::pair<int, int>> seen(g.edges().begin(), g.edges().end());
  EXPECT_EQ(seen.size(), g.edge_count());
}

TEST(BuildGraph, ErdosRenyiExtremes) {
  EXPECT_EQ(erdos_renyi_graph(10, 0.0, 1).edge_count(), 0u);
  EXPECT_EQ(erdos_renyi_graph(10, 1.0, 1).edge_count(), 45u);
}

TEST(BuildGraph, ParameterErrors) {
  EXPECT_THROW(complete_graph(1), ParameterError);
  EXPECT_THROW(cycle_graph(2), ParameterError);
  EXPECT_THROW(torus_graph(2, 2), ParameterError);
  EXPECT_THROW(torus_graph(3, 0), ParameterError);
  EXPECT_THROW(erdos_renyi_graph(10, 1.5, 1), ParameterError);
  EXPECT_THROW(random_regular_graph(5, 3, 1), ParameterError); // n*d odd
  EXPECT_THROW(random_regular_graph(4, 4, 1), ParameterError); // d >= n
  EXPECT_THROW(edge_list_graph(3, {{0, 3}}), ParameterError);
  EXPECT_THROW(edge_list_graph(3, {{1, 1}}), ParameterError);
  EXPECT_THROW(edge_list_graph(3, {{0, 1}, {1, 0}}), ParameterError);
}

TEST(BuildGraph, PairingModelRetryCapReported) {
  // For d = 10 a pairing is simple with probability about exp(-(d^2-1)/4),
  // far below 1/1000, so the cap triggers.
  try {
    random_regular_graph(12, 10, 1);
    FAIL() << "expected GenerationError";
  } catch (const GenerationError &e) {
    EXPECT_EQ(e.attempts(), 1000);
    EXPECT_NE(std::string(e.what()).find("1000"), std::string::npos);
  }
}

TEST(BuildGraph, ParseSpecStrings) {
  EXPECT_EQ(build_graph(parse_graph_spec("complete:6")).n(), 6);
  EXPECT_EQ(build_graph(parse_graph_spec("torus:4:2")).n(), 16);
  const GraphSpec er = parse_graph_spec("er:50:0.3:7");
  EXPECT_EQ(er.kind, GraphKind::erdos_renyi);
  EXPECT_DOUBLE_EQ(er.p, 0.3);
  EXPECT_EQ(er.seed, 7u);
  EXPECT_THROW(parse_graph_spec("cycle"), ParameterError);
  EXPECT_THROW(parse_graph_spec("cycle:x"), ParameterError);
  EXPECT_THROW(parse_graph_spec("hypercube:3"), ParameterError);
}

TEST(EdgeList, OneBasedWithCommentsAndIsolatedVertex) {
  std::istringstream in("# two edges and a lone vertex\n1 2\n3 4  # trailing\n\n5\n");
  const Graph g = read_edge_list(in);
  EXPECT_EQ(g.n(), 5);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(2, 3));
  EXPECT_EQ(g.degree(4), 0);
  EXPECT_EQ(g.first_isolated_vertex(), 4);
  std::istringstream bad("0 1\n");
  EXPECT_THROW(read_edge_list(bad), ParameterError);
}

TEST(GraphDistances, Cycle6) {
  EXPECT_EQ(graph_distances(cycle_graph(6), 0), (std::vector<int>{0, 1, 2, 3, 2, 1}));
}

TEST(GraphDistances, Complete4) {
  EXPECT_EQ(graph_distances(complete_graph(4), 1), (std::vector<int>{1, 0, 1, 1}));
}

TEST(GraphDistances, DisconnectedIsInfinite) {
  const Graph g = edge_list_graph(4, {{0, 1}, {2, 3}});
  const auto d = graph_distances(g, 0);
  EXPECT_EQ(d[1], 1);
  EXPECT_EQ(d[2], kInfiniteDistance);
  EXPECT_FALSE(g.is_connected());
  EXPECT_THROW(graph_distances(g, 4), ParameterError);
}

TEST(GraphDistances, TriangleInequalityAndDiameters) {
  const Graph g = erdos_renyi_graph(40, 0.1, 5);
  std::vector<std::vector<int>> d;
  for (int v = 0; v < g.n(); ++v)
    d.push_back(graph_distances(g, v));
  auto add = [](int a, int b) {
    return (a == kInfiniteDistance || b == kInfiniteDistance) ? kInfiniteDistance : a + b;
  };
  for (int u = 0; u < g.n(); u += 3)
    for (int v = 0; v < g.n(); v += 5)
      for (int w = 0; w < g.n(); w += 7)
        EXPECT_LE(d[u][w], add(d[u][v], d[v][w]));

  for (int n : {5, 8, 11}) {
    int diam_c = 0, diam_k = 0;
    for (int v = 0; v < n; ++v) {
      for (int x : graph_distances(cycle_graph(n), v))
        diam_c = std::max(diam_c, x);
      for (int x : graph_distances(complete_graph(n), v))
        diam_k = std::max(diam_k, x);
    }
    EXPECT_EQ(diam_c, n / 2);
    EXPECT_EQ(diam_k, 1);
  }
}

TEST(DegreeStats, Examples) {
  const DegreeStats t = degree_stats(torus_graph(3, 2));
  EXPECT_EQ(t.min_degree, 4);
  EXPECT_EQ(t.max_degree, 4);
  EXPECT_TRUE(t.is_regular);
  EXPECT_EQ(t.common_degree, 4);
  const DegreeStats p = degree_stats(path3());
  EXPECT_EQ(p.min_degree, 1);
  EXPECT_EQ(p.max_degree, 2);
  EXPECT_FALSE(p.is_regular);
  EXPECT_FALSE(p.common_degree.has_value());
  EXPECT_EQ(degree_stats(complete_graph(7)).common_degree, 6);
}

TEST(VerifyTransitive, Examples) {
  EXPECT_EQ(verify_transitive(cycle_graph(8)), TransitiveHint::verified);
  EXPECT_EQ(verify_transitive(path3()), TransitiveHint::not_transitive);
  EXPECT_EQ(verify_transitive(torus_graph(3, 2)), TransitiveHint::verified);
  EXPECT_EQ(verify_transitive(complete_graph(20)), TransitiveHint::known_transitive);
  EXPECT_EQ(verify_transitive(random_regular_graph(30, 3, 1)), TransitiveHint::unknown);
}

TEST(VerifyTransitive, RegularButNotTransitive) {
  // K_4 plus a disjoint K_{3,3}: 3-regular, but only the K_4 vertices lie on
  // triangles, so no automorphism maps one part to the other.
  std::vector<std::pair<int, int>> e = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  for (int u = 4; u < 7; ++u)
    for (int v = 7; v < 10; ++v)
      e.emplace_back(u, v);
  EXPECT_EQ(verify_transitive(edge_list_graph(10, e)), TransitiveHint::not_transitive);
  const Graph cube = edge_list_graph(8, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6}, {6, 7},
                                         {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}});
  EXPECT_EQ(verify_transitive(cube), TransitiveHint::verified);
}

TEST(VerifyTransitive, RandomRegularTenResolvedByBruteForce) {
  const auto hint = verify_transitive(random_regular_graph(10, 3, 1));
  EXPECT_TRUE(hint == TransitiveHint::verified || hint == TransitiveHint::not_transitive);
}
