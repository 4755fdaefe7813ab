#include <random>

#include <gtest/gtest.h>

#include "forge/graph.hpp"
#include "oracles.hpp"

using namespace forge;

TEST(Graph, PetersenBasics) {
  const Graph g = oracle::petersen();
  EXPECT_EQ(g.order(), 10u);
  EXPECT_EQ(g.edge_count(), 15u);
  EXPECT_TRUE(satisfies_invariants(g));
  auto prof = degree_profile(g);
  ASSERT_TRUE(prof.is_regular);
  EXPECT_EQ(*prof.k, 3u);
  EXPECT_EQ(girth(g), Girth::finite(5));
  EXPECT_TRUE(is_connected(g));
  EXPECT_FALSE(is_bipartite(g));
}

TEST(Graph, RejectsBadEdges) {
  std::vector<Edge> loop{{1, 1}};
  EXPECT_THROW(Graph::from_edges(3, loop), GraphError);
  std::vector<Edge> out_of_range{{0, 3}};
  EXPECT_THROW(Graph::from_edges(3, out_of_range), GraphError);
  std::vector<Edge> dup{{0, 1}, {1, 0}};
  EXPECT_THROW(Graph::from_edges(3, dup), GraphError);
}

TEST(Graph, EdgesAreCanonical) {
  std::vector<Edge> e{{2, 0}, {1, 0}, {2, 1}};
  const Graph g = Graph::from_edges(3, e);
  const std::vector<Edge> want{{0, 1}, {0, 2}, {1, 2}};
  EXPECT_EQ(g.edges(), want);
  EXPECT_TRUE(g.has_edge(2, 0));
  EXPECT_FALSE(g.has_edge(0, 0));
}

TEST(Graph, GirthOfForestIsInfinite) {
  std::vector<Edge> path{{0, 1}, {1, 2}, {2, 3}};
  const Girth g = girth(Graph::from_edges(5, path));
  EXPECT_TRUE(g.is_infinite());
  EXPECT_THROW(g.value(), GraphError);
  EXPECT_EQ(g.to_string(), "inf");
  EXPECT_GT(g, Girth::finite(1000));
}

TEST(Graph, GirthSmallFamilies) {
  EXPECT_EQ(girth(oracle::complete(4)), Girth::finite(3));
  EXPECT_EQ(girth(oracle::cycle(7)), Girth::finite(7));
  std::vector<Edge> k33;
  for (Vertex a = 0; a < 3; ++a)
    for (Vertex b = 3; b < 6; ++b) k33.push_back({a, b});
  EXPECT_EQ(girth(Graph::from_edges(6, k33)), Girth::finite(4));
}

TEST(Graph, GirthMatchesExhaustiveCycleSearch) {
  std::mt19937_64 rng(20240611);
  int mismatches = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const Graph g = oracle::random_graph(rng, 12);
    const auto want = oracle::exhaustive_girth(g);
    const Girth got = girth(g);
    const bool same = want ? (!got.is_infinite() && got.value() == static_cast<std::size_t>(*want)) : got.is_infinite();
    if (!same) ++mismatches;
  }
  EXPECT_EQ(mismatches, 0);
}

TEST(Graph, SpheresAndBalls) {
  const Graph g = oracle::petersen();
  EXPECT_EQ(sphere(g, 0, 0), (VertexSet{0}));
  EXPECT_EQ(sphere(g, 0, 1), (VertexSet{1, 4, 5}));
  EXPECT_EQ(sphere(g, 0, 2).size(), 6u);
  EXPECT_EQ(ball(g, 0, 1), (VertexSet{0, 1, 4, 5}));
  EXPECT_EQ(ball(g, 0, 2).size(), 10u);
}

TEST(Graph, BfsRespectsBlockedVertices) {
  const Graph g = oracle::cycle(6);
  std::vector<char> blocked(6, 0);
  blocked[1] = 1;
  auto d = bfs_distances(g, 0, -1, blocked);
  EXPECT_EQ(d[2], 4);
  EXPECT_EQ(d[1], -1);
  EXPECT_THROW(bfs_distances(g, 7), GraphError);
}

TEST(Graph, RemoveEdges) {
  const Graph g = oracle::complete(4);
  std::vector<Edge> m{{0, 1}, {2, 3}};
  const Graph h = remove_edges(g, m);
  EXPECT_EQ(h.edge_count(), 4u);
  EXPECT_EQ(girth(h), Girth::finite(4));
  std::vector<Edge> missing{{0, 1}};
  EXPECT_THROW(remove_edges(h, missing), GraphError);
  std::vector<Edge> twice{{0, 2}, {2, 0}};
  EXPECT_THROW(remove_edges(g, twice), GraphError);
}

TEST(Graph, InducedSubgraphAndTreeVertices) {
  const Graph g = oracle::petersen();
  const Graph ind = induced_subgraph(g, VertexSet{0, 1, 2, 3, 4});
  EXPECT_EQ(ind.edge_count(), 5u);
  std::vector<Edge> extra{{10, 0}, {10, 11}};
  const Graph big = add_tree_vertices(g, 2, extra);
  EXPECT_EQ(big.order(), 12u);
  EXPECT_EQ(big.degree(10), 2u);
  EXPECT_EQ(big.degree(0), 4u);
}

TEST(Graph, VertexSetOps) {
  VertexSet a{5, 1, 3, 3};
  EXPECT_EQ(a.size(), 3u);
  EXPECT_TRUE(a.contains(3));
  EXPECT_EQ(set_union(a, VertexSet{2, 3}), (VertexSet{1, 2, 3, 5}));
  EXPECT_EQ(set_difference(a, VertexSet{1}), (VertexSet{3, 5}));
  EXPECT_TRUE(a.within(6));
  EXPECT_FALSE(a.within(5));
}

TEST(Graph, Bipartiteness) {
  EXPECT_TRUE(is_bipartite(oracle::cycle(6)));
  EXPECT_FALSE(is_bipartite(oracle::cycle(5)));
  std::vector<Edge> two{{0, 1}, {2, 3}};
  EXPECT_FALSE(is_connected(Graph::from_edges(4, two)));
}
