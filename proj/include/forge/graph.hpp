#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "forge/errors.hpp"

namespace forge {

using Vertex = std::int32_t;

// Undirected edge stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(Vertex a, Vertex b) noexcept {
  return a < b ? Edge{a, b} : Edge{b, a};
}

// Sorted, duplicate-free list of vertex ids.
class VertexSet {
 public:
  VertexSet() = default;

  explicit VertexSet(std::vector<Vertex> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  VertexSet(std::initializer_list<Vertex> ids) : VertexSet(std::vector<Vertex>(ids)) {}

  bool contains(Vertex v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }
  Vertex operator[](std::size_t i) const { return ids_[i]; }
  const std::vector<Vertex>& ids() const noexcept { return ids_; }

  // Every id lies in [0, n).
  bool within(std::size_t n) const noexcept {
    return ids_.empty() || (ids_.front() >= 0 && static_cast<std::size_t>(ids_.back()) < n);
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

  friend VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    std::vector<Vertex> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return VertexSet(std::move(out));
  }

  friend VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
    std::vector<Vertex> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return VertexSet(std::move(out));
  }

 private:
  std::vector<Vertex> ids_;
};

// Immutable simple undirected graph in compressed adjacency form. Neighbor
// lists are sorted ascending.
class Graph {
 public:
  Graph() = default;

  static Graph from_edges(std::size_t n, std::span<const Edge> edges) {
    if (n > static_cast<std::size_t>(std::numeric_limits<Vertex>::max())) {
      throw GraphError("vertex count " + std::to_string(n) + " exceeds id range");
    }
    std::vector<std::size_t> deg(n, 0);
    for (const Edge& e : edges) {
      if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n ||
          static_cast<std::size_t>(e.v) >= n) {
        throw GraphError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                         ") out of range for n=" + std::to_string(n));
      }
      if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
      ++deg[e.u];
      ++deg[e.v];
    }
    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
    g.targets_.resize(g.offsets_[n]);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge& e : edges) {
      g.targets_[fill[e.u]++] = e.v;
      g.targets_[fill[e.v]++] = e.u;
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto first = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]);
      auto last = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]);
      std::sort(first, last);
      if (auto dup = std::adjacent_find(first, last); dup != last) {
        throw GraphError("duplicate edge (" + std::to_string(std::min<Vertex>(i, *dup)) + "," +
                         std::to_string(std::max<Vertex>(i, *dup)) + ")");
      }
    }
    g.edge_count_ = edges.size();
    return g;
  }

  std::size_t order() const noexcept { return offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return edge_count_; }

  bool valid(Vertex v) const noexcept {
    return v >= 0 && static_cast<std::size_t>(v) < order();
  }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(Vertex a, Vertex b) const {
    if (!valid(a) || !valid(b)) return false;
    auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  // Canonical edge list: u < v, ascending lexicographic.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::size_t u = 0; u < order(); ++u) {
      for (Vertex v : neighbors(static_cast<Vertex>(u))) {
        if (static_cast<Vertex>(u) < v) out.push_back({static_cast<Vertex>(u), v});
      }
    }
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> targets_;
  std::size_t edge_count_ = 0;
};

inline Graph build_graph(std::size_t n, std::span<const Edge> edges) {
  return Graph::from_edges(n, edges);
}

// Full scan of the simple/symmetric/handshake invariants.
inline bool satisfies_invariants(const Graph& g) {
  std::size_t degree_sum = 0;
  for (std::size_t u = 0; u < g.order(); ++u) {
    auto nb = g.neighbors(static_cast<Vertex>(u));
    degree_sum += nb.size();
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (!g.valid(nb[i]) || nb[i] == static_cast<Vertex>(u)) return false;
      if (i > 0 && nb[i - 1] >= nb[i]) return false;
      if (!g.has_edge(nb[i], static_cast<Vertex>(u))) return false;
    }
  }
  return degree_sum == 2 * g.edge_count();
}

struct DegreeProfile {
  std::size_t min_degree = 0;
  std::size_t max_degree = 0;
  bool is_regular = true;
  std::optional<std::size_t> k;  // set iff regular
};

inline DegreeProfile degree_profile(const Graph& g) {
  DegreeProfile p;
  if (g.order() == 0) {
    p.k = 0;
    return p;
  }
  p.min_degree = std::numeric_limits<std::size_t>::max();
  for (std::size_t u = 0; u < g.order(); ++u) {
    std::size_t d = g.degree(static_cast<Vertex>(u));
    p.min_degree = std::min(p.min_degree, d);
    p.max_degree = std::max(p.max_degree, d);
  }
  p.is_regular = p.min_degree == p.max_degree;
  if (p.is_regular) p.k = p.min_degree;
  return p;
}

// Length of the shortest cycle. Forests have infinite girth, which is a
// distinct state: asking for its value throws.
class Girth {
 public:
  static Girth infinite() noexcept { return Girth(); }
  static Girth finite(std::size_t length) noexcept { return Girth(length); }

  bool is_infinite() const noexcept { return !length_.has_value(); }

  std::size_t value() const {
    if (!length_) throw GraphError("girth is infinite (graph is a forest)");
    return *length_;
  }

  friend bool operator==(const Girth&, const Girth&) = default;
  friend std::strong_ordering operator<=>(const Girth& a, const Girth& b) {
    if (a.is_infinite() || b.is_infinite()) {
      return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
    }
    return *a.length_ <=> *b.length_;
  }

  std::string to_string() const { return length_ ? std::to_string(*length_) : "inf"; }

 private:
  Girth() = default;
  explicit Girth(std::size_t length) : length_(length) {}
  std::optional<std::size_t> length_;
};

// BFS from every root. A non-tree edge (x,w) seen from a root witnesses a
// closed walk of length dist(x)+dist(w)+1 containing a cycle no longer than
// that, and the root lying on a shortest cycle reports it exactly.
inline Girth girth(const Graph& g) {
  const std::size_t n = g.order();
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<int> dist(n, -1);
  std::vector<Vertex> parent(n, -1);
  std::vector<Vertex> queue;
  queue.reserve(n);
  for (std::size_t root = 0; root < n && best > 3; ++root) {
    queue.clear();
    queue.push_back(static_cast<Vertex>(root));
    dist[root] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Vertex x = queue[head];
      if (2 * static_cast<std::size_t>(dist[x]) >= best) break;
      for (Vertex w : g.neighbors(x)) {
        if (dist[w] < 0) {
          dist[w] = dist[x] + 1;
          parent[w] = x;
          queue.push_back(w);
        } else if (w != parent[x]) {
          best = std::min(best, static_cast<std::size_t>(dist[x] + dist[w] + 1));
        }
      }
    }
    for (Vertex v : queue) {
      dist[v] = -1;
      parent[v] = -1;
    }
  }
  return best == std::numeric_limits<std::size_t>::max() ? Girth::infinite() : Girth::finite(best);
}

// Distances from source, -1 for unreachable. Vertices flagged in `blocked`
// are never entered; the source itself is always entered.
inline std::vector<int> bfs_distances(const Graph& g, Vertex source, int max_depth = -1,
                                      std::span<const char> blocked = {}) {
  if (!g.valid(source)) throw GraphError("invalid source vertex " + std::to_string(source));
  std::vector<int> dist(g.order(), -1);
  std::deque<Vertex> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    Vertex x = queue.front();
    queue.pop_front();
    if (max_depth >= 0 && dist[x] >= max_depth) continue;
    for (Vertex w : g.neighbors(x)) {
      if (dist[w] >= 0 || (!blocked.empty() && blocked[w])) continue;
      dist[w] = dist[x] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

inline VertexSet sphere(const Graph& g, Vertex u, int r) {
  auto dist = bfs_distances(g, u, r);
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (dist[v] == r) out.push_back(static_cast<Vertex>(v));
  }
  return VertexSet(std::move(out));
}

inline VertexSet ball(const Graph& g, Vertex u, int r) {
  auto dist = bfs_distances(g, u, r);
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (dist[v] >= 0) out.push_back(static_cast<Vertex>(v));
  }
  return VertexSet(std::move(out));
}

inline bool is_connected(const Graph& g) {
  if (g.order() == 0) return true;
  auto dist = bfs_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

inline bool is_bipartite(const Graph& g) {
  std::vector<int> color(g.order(), -1);
  for (std::size_t s = 0; s < g.order(); ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    std::deque<Vertex> queue{static_cast<Vertex>(s)};
    while (!queue.empty()) {
      Vertex x = queue.front();
      queue.pop_front();
      for (Vertex w : g.neighbors(x)) {
        if (color[w] < 0) {
          color[w] = 1 - color[x];
          queue.push_back(w);
        } else if (color[w] == color[x]) {
          return false;
        }
      }
    }
  }
  return true;
}

inline Graph remove_edges(const Graph& g, std::span<const Edge> removed) {
  std::vector<Edge> drop;
  drop.reserve(removed.size());
  for (const Edge& e : removed) {
    if (!g.has_edge(e.u, e.v)) {
      throw GraphError("cannot remove missing edge (" + std::to_string(e.u) + "," +
                       std::to_string(e.v) + ")");
    }
    drop.push_back(make_edge(e.u, e.v));
  }
  std::sort(drop.begin(), drop.end());
  if (std::adjacent_find(drop.begin(), drop.end()) != drop.end()) {
    throw GraphError("edge listed twice for removal");
  }
  std::vector<Edge> kept;
  kept.reserve(g.edge_count() - drop.size());
  for (const Edge& e : g.edges()) {
    if (!std::binary_search(drop.begin(), drop.end(), e)) kept.push_back(e);
  }
  return Graph::from_edges(g.order(), kept);
}

// Appends `new_count` fresh vertices with ids order()..order()+new_count-1
// and the given edges, which may touch old and fresh ids.
inline Graph add_tree_vertices(const Graph& g, std::size_t new_count,
                               std::span<const Edge> new_edges) {
  auto all = g.edges();
  all.insert(all.end(), new_edges.begin(), new_edges.end());
  return Graph::from_edges(g.order() + new_count, all);
}

// Subgraph induced on `keep`; vertex i of the result is keep[i].
inline Graph induced_subgraph(const Graph& g, const VertexSet& keep) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (Vertex w : g.neighbors(keep[i])) {
      auto it = std::lower_bound(keep.begin(), keep.end(), w);
      if (it == keep.end() || *it != w) continue;
      auto j = static_cast<Vertex>(it - keep.begin());
      if (static_cast<Vertex>(i) < j) edges.push_back({static_cast<Vertex>(i), j});
    }
  }
  return Graph::from_edges(keep.size(), edges);
}

}  // namespace forge
