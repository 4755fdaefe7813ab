#pragma once

// Gadget surgery on a (d+1)-regular host H: cut the depth-r ball around a
// root, reroute its leaves through a matching into the next sphere, and cap
// both leaf sets with fresh d-ary trees.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "forge/check.hpp"
#include "forge/errors.hpp"
#include "forge/graph.hpp"
#include "forge/matching.hpp"
#include "forge/random.hpp"

namespace forge {

// Leaves of a d-ary tree of depth r: (d+1) d^(r-1).
inline std::size_t tree_leaf_count(int d, int r) {
  std::size_t leaves = static_cast<std::size_t>(d) + 1;
  for (int l = 1; l < r; ++l) leaves *= static_cast<std::size_t>(d);
  return leaves;
}

// Non-leaf vertices of a d-ary tree of depth r: 1 + sum_{1<=l<=r-1} (d+1) d^(l-1).
inline std::size_t tree_internal_count(int d, int r) {
  std::size_t total = 1;
  for (int l = 1; l <= r - 1; ++l) total += tree_leaf_count(d, l);
  return total;
}

// Girth the leaf pairing of the two glued trees must reach:
// 2 log_{2d-1}((d+1) d^(r-1)).
inline double pairing_girth_bound(int d, int r) {
  return 2.0 * std::log(static_cast<double>(tree_leaf_count(d, r))) / std::log(2.0 * d - 1.0);
}

inline std::size_t pairing_girth_target(int d, int r) {
  return static_cast<std::size_t>(std::ceil(pairing_girth_bound(d, r) - 1e-9));
}

struct BallTree {
  std::vector<Edge> edges;
  VertexSet vertices;
  VertexSet leaves;    // L1 = sphere(u, r)
  VertexSet interior;  // V1 = V(T1) \ L1
};

// The depth-r ball around u, which must induce a d-ary tree.
inline BallTree extract_ball_tree(const Graph& h, Vertex u, int r, std::optional<Girth> host_girth = std::nullopt) {
  if (!h.valid(u)) throw SurgeryError("extract_ball_tree", "root " + std::to_string(u) + " is not a vertex");
  if (r < 1) throw SurgeryError("extract_ball_tree", "radius must be >= 1");
  const auto prof = degree_profile(h);
  if (!prof.is_regular || *prof.k < 3) {
    throw SurgeryError("extract_ball_tree", "host must be (d+1)-regular with d >= 2");
  }
  const int d = static_cast<int>(*prof.k) - 1;
  const Girth g = host_girth ? *host_girth : girth(h);
  if (!g.is_infinite() && g.value() <= static_cast<std::size_t>(4 * r)) {
    throw SurgeryError("extract_ball_tree", "girth(H) = " + g.to_string() + " is not above 4r = " +
                                                std::to_string(4 * r));
  }
  BallTree t;
  t.vertices = ball(h, u, r);
  t.leaves = sphere(h, u, r);
  t.interior = ball(h, u, r - 1);
  Graph induced = induced_subgraph(h, t.vertices);
  if (induced.edge_count() + 1 != t.vertices.size() || !is_connected(induced)) {
    throw SurgeryError("extract_ball_tree", "ball of radius " + std::to_string(r) + " is not a tree");
  }
  if (t.leaves.size() != tree_leaf_count(d, r)) {
    throw SurgeryError("extract_ball_tree", "sphere has " + std::to_string(t.leaves.size()) +
                                                " vertices, expected " + std::to_string(tree_leaf_count(d, r)));
  }
  for (const Edge& e : induced.edges()) t.edges.push_back(make_edge(t.vertices[e.u], t.vertices[e.v]));
  return t;
}

struct LeafPairing {
  VertexSet l2;
  Matching matching;  // M, a subset of E(H) joining L1 to L2
};

// Matches L1 into sphere(u, r+1) along host edges. Among saturating
// matchings it picks the one whose partner sequence (L1 ascending) is
// lexicographically smallest.
inline LeafPairing select_l2_and_matching(const Graph& h, const VertexSet& l1, Vertex u, int r) {
  const VertexSet candidates = sphere(h, u, r + 1);
  std::vector<std::vector<Vertex>> options(l1.size());
  std::vector<Edge> all_edges;
  for (std::size_t i = 0; i < l1.size(); ++i) {
    for (Vertex y : h.neighbors(l1[i])) {
      if (candidates.contains(y)) {
        options[i].push_back(y);
        all_edges.push_back(make_edge(l1[i], y));
      }
    }
  }
  VertexSet violator;
  if (!bipartite_perfect_matching(l1, candidates, all_edges, &violator)) {
    std::string ids;
    for (Vertex v : violator) ids += (ids.empty() ? "" : ",") + std::to_string(v);
    throw SurgeryError("select_l2_and_matching", "no matching saturates L1; Hall-violating set {" + ids + "}");
  }

  std::vector<Vertex> partner(l1.size(), -1);
  auto feasible = [&](std::size_t from) {
    std::vector<Vertex> rest_left(l1.begin() + static_cast<std::ptrdiff_t>(from), l1.end());
    std::vector<Vertex> rest_right;
    std::vector<Edge> rest_edges;
    for (std::size_t i = from; i < l1.size(); ++i) {
      for (Vertex y : options[i]) {
        if (std::find(partner.begin(), partner.end(), y) == partner.end()) {
          rest_edges.push_back(make_edge(l1[i], y));
          rest_right.push_back(y);
        }
      }
    }
    return bipartite_perfect_matching(VertexSet(rest_left), VertexSet(rest_right), rest_edges).has_value();
  };
  for (std::size_t i = 0; i < l1.size(); ++i) {
    bool placed = false;
    for (Vertex y : options[i]) {
      if (std::find(partner.begin(), partner.end(), y) != partner.end()) continue;
      partner[i] = y;
      if (feasible(i + 1)) {
        placed = true;
        break;
      }
      partner[i] = -1;
    }
    if (!placed) throw SurgeryError("select_l2_and_matching", "lexicographic completion failed");
  }
  LeafPairing out;
  out.l2 = VertexSet(partner);
  for (std::size_t i = 0; i < l1.size(); ++i) out.matching.edges.push_back(make_edge(l1[i], partner[i]));
  std::sort(out.matching.edges.begin(), out.matching.edges.end());
  return out;
}

struct PairingSearchState {
  std::size_t attempts = 0;
  std::size_t max_attempts = 1000;
  std::optional<Girth> best_girth_found;
  std::size_t target = 0;
  std::uint64_t seed = 0;
};

struct AttachedTree {
  Graph graph;
  VertexSet tree_vertices;       // fresh internals plus the leaf set
  VertexSet fresh_vertices;
  std::vector<Vertex> leaf_map;  // abstract leaf j -> graph vertex
  std::optional<Girth> union_girth;  // girth of the graph induced on companion and the tree
};

namespace detail {

// Abstract d-ary tree of depth r in BFS order: parent[i] for i >= 1; the
// last leaf_count ids are the leaves.
inline std::vector<std::size_t> dary_tree_parents(int d, int r) {
  std::vector<std::size_t> parent{0};
  std::size_t level_begin = 0, level_end = 1;
  for (int l = 1; l <= r; ++l) {
    for (std::size_t v = level_begin; v < level_end; ++v) {
      const int kids = v == 0 ? d + 1 : d;
      for (int c = 0; c < kids; ++c) parent.push_back(v);
    }
    level_begin = level_end;
    level_end = parent.size();
  }
  return parent;
}

// Edges of the abstract tree with internals mapped to first_fresh + i and
// leaf j mapped to leaf_map[j].
inline std::vector<Edge> realize_tree(int d, int r, Vertex first_fresh, const std::vector<Vertex>& leaf_map) {
  const auto parent = dary_tree_parents(d, r);
  const std::size_t internal = tree_internal_count(d, r);
  auto id = [&](std::size_t local) {
    return local < internal ? first_fresh + static_cast<Vertex>(local) : leaf_map[local - internal];
  };
  std::vector<Edge> edges;
  for (std::size_t v = 1; v < parent.size(); ++v) edges.push_back(make_edge(id(parent[v]), id(v)));
  return edges;
}

}  // namespace detail

// Caps `leaves` with a fresh d-ary tree of depth r using the given leaf
// order (abstract leaf j -> leaves[order[j]]).
inline AttachedTree attach_tree(const Graph& partial, const VertexSet& leaves, int d, int r,
                                const std::vector<std::size_t>& order) {
  if (leaves.size() != tree_leaf_count(d, r)) {
    throw SurgeryError("attach_tree", "leaf set has " + std::to_string(leaves.size()) + " vertices, expected " +
                                          std::to_string(tree_leaf_count(d, r)));
  }
  const std::size_t internal = tree_internal_count(d, r);
  const auto first = static_cast<Vertex>(partial.order());
  AttachedTree out;
  for (std::size_t j : order) out.leaf_map.push_back(leaves[j]);
  auto edges = detail::realize_tree(d, r, first, out.leaf_map);
  out.graph = add_tree_vertices(partial, internal, edges);
  std::vector<Vertex> fresh(internal);
  for (std::size_t i = 0; i < internal; ++i) fresh[i] = first + static_cast<Vertex>(i);
  out.fresh_vertices = VertexSet(fresh);
  out.tree_vertices = set_union(out.fresh_vertices, leaves);
  return out;
}

// Like attach_tree, but searches seeded random leaf bijections until the
// graph induced on companion and the new tree reaches target_girth.
inline AttachedTree attach_tree_with_girth_target(const Graph& partial, const VertexSet& leaves, int d, int r,
                                                  std::size_t target_girth, const VertexSet& companion,
                                                  PairingSearchState& search) {
  if (leaves.size() != tree_leaf_count(d, r)) {
    throw SurgeryError("attach_tree_with_girth_target", "leaf set has wrong size");
  }
  search.target = target_girth;
  const std::size_t internal = tree_internal_count(d, r);
  const auto first = static_cast<Vertex>(partial.order());

  // Local frame: companion-and-leaves first, then the fresh internals.
  const VertexSet base = set_union(companion, leaves);
  const Graph base_graph = induced_subgraph(partial, base);
  const auto base_edges = base_graph.edges();
  auto local_of = [&](Vertex v) {
    if (v >= first) return static_cast<Vertex>(base.size()) + (v - first);
    return static_cast<Vertex>(std::lower_bound(base.begin(), base.end(), v) - base.begin());
  };

  std::mt19937_64 rng(search.seed);
  auto order = iota_vector<std::size_t>(leaves.size());
  std::vector<std::size_t> best_order = order;
  for (search.attempts = 1; search.attempts <= search.max_attempts; ++search.attempts) {
    shuffle_in_place(order, rng);
    std::vector<Vertex> leaf_map;
    for (std::size_t j : order) leaf_map.push_back(leaves[j]);
    auto edges = base_edges;
    for (const Edge& e : detail::realize_tree(d, r, first, leaf_map)) {
      edges.push_back(make_edge(local_of(e.u), local_of(e.v)));
    }
    const Girth g = girth(Graph::from_edges(base.size() + internal, edges));
    if (!search.best_girth_found || g > *search.best_girth_found) {
      search.best_girth_found = g;
      best_order = order;
    }
    if (g.is_infinite() || g.value() >= target_girth) {
      auto out = attach_tree(partial, leaves, d, r, order);
      out.union_girth = g;
      return out;
    }
  }
  search.attempts = search.max_attempts;
  std::string bij;
  for (std::size_t j : best_order) bij += (bij.empty() ? "" : ",") + std::to_string(leaves[j]);
  throw SurgeryError("attach_T2", "pairing search exhausted after " + std::to_string(search.max_attempts) +
                                      " attempts; best girth " + search.best_girth_found->to_string() +
                                      " < target " + std::to_string(target_girth) + "; best bijection [" + bij + "]");
}

struct SurgeryOptions {
  std::uint64_t seed = 0;
  std::size_t max_attempts = 1000;
};

struct SurgeryResult {
  Graph graph;
  Vertex root = 0;
  int radius = 0;
  int d = 0;
  std::size_t host_order = 0;  // n
  Girth host_girth = Girth::infinite();
  double alpha_effective = 0.0;  // r / log_d(n)
  VertexSet l1, l2, v1;
  Matching matching;
  VertexSet t1_vertices, t2_vertices, t3_vertices;
  VertexSet t2_fresh, t3_fresh;
  VertexSet s_gadget;
  std::vector<Edge> t1_edges;
  std::vector<Vertex> t2_leaf_map, t3_leaf_map;
  PairingSearchState search;
  std::optional<Girth> pairing_girth;  // girth of the graph induced on V(T1) and V(T2)

  std::size_t order() const { return graph.order(); }  // m
};

inline SurgeryResult construct(const Graph& h, Vertex u, int r, const SurgeryOptions& opts = {}) {
  const auto prof = degree_profile(h);
  if (!prof.is_regular || *prof.k < 3) throw SurgeryError("construct", "host must be (d+1)-regular with d >= 2");
  SurgeryResult res;
  res.root = u;
  res.radius = r;
  res.d = static_cast<int>(*prof.k) - 1;
  res.host_order = h.order();
  res.host_girth = girth(h);
  res.alpha_effective = static_cast<double>(r) * std::log(static_cast<double>(res.d)) /
                        std::log(static_cast<double>(h.order()));

  BallTree t1 = extract_ball_tree(h, u, r, res.host_girth);
  res.l1 = t1.leaves;
  res.v1 = t1.interior;
  res.t1_vertices = t1.vertices;
  res.t1_edges = t1.edges;

  LeafPairing pairing = select_l2_and_matching(h, res.l1, u, r);
  res.l2 = pairing.l2;
  res.matching = pairing.matching;

  Graph cut = remove_edges(h, res.matching.edges);

  res.search.seed = opts.seed;
  res.search.max_attempts = opts.max_attempts;
  AttachedTree t2 = attach_tree_with_girth_target(cut, res.l1, res.d, r, pairing_girth_target(res.d, r),
                                                  res.t1_vertices, res.search);
  res.t2_vertices = t2.tree_vertices;
  res.t2_fresh = t2.fresh_vertices;
  res.t2_leaf_map = t2.leaf_map;
  res.pairing_girth = t2.union_girth;

  AttachedTree t3 = attach_tree(t2.graph, res.l2, res.d, r, iota_vector<std::size_t>(res.l2.size()));
  res.t3_vertices = t3.tree_vertices;
  res.t3_fresh = t3.fresh_vertices;
  res.t3_leaf_map = t3.leaf_map;
  res.graph = std::move(t3.graph);

  res.s_gadget = set_union(set_union(res.t1_vertices, res.t2_vertices), set_union(res.t3_vertices, res.l2));

  const auto out_prof = degree_profile(res.graph);
  if (!out_prof.is_regular || *out_prof.k != static_cast<std::size_t>(res.d) + 1) {
    throw SurgeryError("construct", "result is not " + std::to_string(res.d + 1) + "-regular");
  }
  return res;
}

namespace detail {

// Smallest pairwise distance inside `set` in h with `blocked` removed;
// nullopt when no two members are connected.
inline std::optional<int> min_pairwise_distance(const Graph& h, const VertexSet& set, const VertexSet& blocked) {
  std::vector<char> mask(h.order(), 0);
  for (Vertex v : blocked) mask[v] = 1;
  std::optional<int> best;
  for (Vertex s : set) {
    auto dist = bfs_distances(h, s, -1, mask);
    for (Vertex t : set) {
      if (t != s && dist[t] > 0 && (!best || dist[t] < *best)) best = dist[t];
    }
  }
  return best;
}

inline std::optional<double> girth_value(const Girth& g) {
  return g.is_infinite() ? std::nullopt : std::optional<double>(static_cast<double>(g.value()));
}

}  // namespace detail

struct GirthBoundReport {
  Girth girth = Girth::infinite();
  std::vector<Check> checks;
};

// Exact girth of the surgered graph against the pairing-tree bound and its
// corollary in terms of m.
inline GirthBoundReport check_girth_bound(const SurgeryResult& res) {
  GirthBoundReport rep;
  rep.girth = girth(res.graph);
  const double base = 2.0 * res.d - 1.0;
  const double eq12 = pairing_girth_bound(res.d, res.radius);
  rep.checks.push_back(make_check("surgery.pairing_girth", "girth(G_{1,2}) >= 2 log_{2d-1}((d+1) d^(r-1))",
                                  CheckKind::kExact,
                                  res.pairing_girth ? detail::girth_value(*res.pairing_girth) : std::optional<double>(0.0),
                                  Relation::kGreaterEqual, eq12, 1e-12));
  rep.checks.push_back(make_check("surgery.girth_eq12", "girth(G) >= 2 log_{2d-1}((d+1) d^(r-1))",
                                  CheckKind::kAsymptotic, detail::girth_value(rep.girth), Relation::kGreaterEqual,
                                  eq12, 1e-12));
  rep.checks.push_back(make_check("surgery.girth_corollary", "girth(G) >= 2 alpha log_{2d-1}(m)",
                                  CheckKind::kAsymptotic, detail::girth_value(rep.girth), Relation::kGreaterEqual,
                                  2.0 * res.alpha_effective * std::log(static_cast<double>(res.order())) / std::log(base),
                                  1e-12));
  return rep;
}

// Structural bookkeeping of a surgery run against its host.
inline std::vector<Check> check_surgery_structure(const Graph& h, const SurgeryResult& res) {
  std::vector<Check> out;
  const int d = res.d, r = res.radius;
  const std::size_t fresh = tree_internal_count(d, r);
  out.push_back(make_check("surgery.host_girth", "girth(H) > 4r", CheckKind::kHypothesis,
                           detail::girth_value(res.host_girth), Relation::kGreater, 4.0 * r));
  out.push_back(make_check("surgery.vertex_count", "m = n + 2 (1 + sum_{1<=l<=r-1} (d+1) d^(l-1))",
                           CheckKind::kExact, static_cast<double>(res.order()), Relation::kEqual,
                           static_cast<double>(res.host_order + 2 * fresh)));
  const auto prof = degree_profile(res.graph);
  out.push_back(make_flag_check("surgery.regular", "G is (d+1)-regular", CheckKind::kExact,
                                prof.is_regular && *prof.k == static_cast<std::size_t>(d) + 1));
  out.push_back(make_check("surgery.leaf_count", "|L1| = |L2| = (d+1) d^(r-1)", CheckKind::kExact,
                           static_cast<double>(std::min(res.l1.size(), res.l2.size())), Relation::kEqual,
                           static_cast<double>(tree_leaf_count(d, r))));
  bool in_host = true, removed = true, pairs = true;
  for (const Edge& e : res.matching.edges) {
    in_host = in_host && h.has_edge(e.u, e.v);
    removed = removed && !res.graph.has_edge(e.u, e.v);
    pairs = pairs && ((res.l1.contains(e.u) && res.l2.contains(e.v)) || (res.l1.contains(e.v) && res.l2.contains(e.u)));
  }
  pairs = pairs && res.matching.size() == res.l1.size() && is_valid_matching(h, res.matching);
  out.push_back(make_flag_check("surgery.matching_in_host", "M is a subset of E(H)", CheckKind::kExact, in_host));
  out.push_back(make_flag_check("surgery.matching_removed", "M and E(G) are disjoint", CheckKind::kExact, removed));
  out.push_back(make_flag_check("surgery.matching_perfect", "M is a perfect matching between L1 and L2",
                                CheckKind::kExact, pairs));
  const bool fresh_ok = std::all_of(res.t2_fresh.begin(), res.t2_fresh.end(),
                                    [&](Vertex v) { return static_cast<std::size_t>(v) >= res.host_order; }) &&
                        std::all_of(res.t3_fresh.begin(), res.t3_fresh.end(),
                                    [&](Vertex v) { return static_cast<std::size_t>(v) >= res.host_order; }) &&
                        set_difference(res.t2_vertices, res.t3_vertices).size() == res.t2_vertices.size();
  out.push_back(make_flag_check("surgery.fresh_trees", "T2, T3 internals are fresh and T2, T3 are disjoint",
                                CheckKind::kExact, fresh_ok));
  const double s_cap = 4.0 * static_cast<double>(tree_leaf_count(d, r)) + 2.0 * static_cast<double>(fresh);
  out.push_back(make_check("surgery.gadget_size", "|S| <= 4 (d+1) d^(r-1) + 2 (fresh internal count)",
                           CheckKind::kExact, static_cast<double>(res.s_gadget.size()), Relation::kLessEqual, s_cap));

  auto l1_dist = detail::min_pairwise_distance(h, res.l1, res.v1);
  out.push_back(make_check("surgery.l1_separation", "distinct L1 vertices are more than 2r apart in H \\ V1",
                           CheckKind::kExact, l1_dist ? std::optional<double>(*l1_dist) : std::nullopt,
                           Relation::kGreater, 2.0 * r));
  auto l2_dist = detail::min_pairwise_distance(h, res.l2, res.v1);
  auto l2 = make_check("surgery.l2_separation", "distinct L2 vertices are more than 2r apart in H \\ V1",
                       CheckKind::kExact, l2_dist ? std::optional<double>(*l2_dist) : std::nullopt,
                       Relation::kGreater, 2.0 * r, 0.0, false);
  l2.note = "not implied by girth(H) > 4r for vertices at distance r+1; recorded only";
  out.push_back(std::move(l2));
  return out;
}

}  // namespace forge
