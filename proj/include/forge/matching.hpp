#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "forge/errors.hpp"
#include "forge/graph.hpp"
#include "forge/random.hpp"

namespace forge {

struct Matching {
  std::vector<Edge> edges;  // u < v, ascending

  std::size_t size() const noexcept { return edges.size(); }
  friend bool operator==(const Matching&, const Matching&) = default;
};

// Pairwise vertex-disjoint edges, all present in g.
inline bool is_valid_matching(const Graph& g, const Matching& m) {
  std::vector<char> used(g.order(), 0);
  for (const Edge& e : m.edges) {
    if (e.u >= e.v || !g.has_edge(e.u, e.v)) return false;
    if (used[e.u] || used[e.v]) return false;
    used[e.u] = used[e.v] = 1;
  }
  return true;
}

inline bool is_perfect_matching(const Graph& g, const Matching& m) {
  return is_valid_matching(g, m) && 2 * m.size() == g.order();
}

namespace detail {

// Edmonds' blossom-contraction search for augmenting paths.
class BlossomMatcher {
 public:
  explicit BlossomMatcher(const Graph& g)
      : g_(g), n_(g.order()), match_(n_, -1), parent_(n_), base_(n_), used_(n_), blossom_(n_),
        lca_mark_(n_) {}

  void greedy(std::span<const Vertex> order) {
    for (Vertex v : order) {
      if (match_[v] != -1) continue;
      for (Vertex w : g_.neighbors(v)) {
        if (match_[w] == -1) {
          match_[v] = w;
          match_[w] = v;
          break;
        }
      }
    }
  }

  // Augments from an exposed root; false when no augmenting path exists,
  // in which case the root stays exposed in every maximum matching.
  bool augment_from(Vertex root) {
    Vertex v = find_path(root);
    if (v == -1) return false;
    while (v != -1) {
      Vertex pv = parent_[v];
      Vertex ppv = match_[pv];
      match_[v] = pv;
      match_[pv] = v;
      v = ppv;
    }
    return true;
  }

  bool exposed(Vertex v) const { return match_[v] == -1; }

  Matching result() const {
    Matching m;
    for (std::size_t v = 0; v < n_; ++v) {
      if (match_[v] > static_cast<Vertex>(v)) m.edges.push_back({static_cast<Vertex>(v), match_[v]});
    }
    return m;
  }

 private:
  Vertex lca(Vertex a, Vertex b) {
    std::fill(lca_mark_.begin(), lca_mark_.end(), 0);
    for (;;) {
      a = base_[a];
      lca_mark_[a] = 1;
      if (match_[a] == -1) break;
      a = parent_[match_[a]];
    }
    for (;;) {
      b = base_[b];
      if (lca_mark_[b]) return b;
      b = parent_[match_[b]];
    }
  }

  void mark_path(Vertex v, Vertex b, Vertex child) {
    while (base_[v] != b) {
      blossom_[base_[v]] = blossom_[base_[match_[v]]] = 1;
      parent_[v] = child;
      child = match_[v];
      v = parent_[match_[v]];
    }
  }

  Vertex find_path(Vertex root) {
    std::fill(used_.begin(), used_.end(), 0);
    std::fill(parent_.begin(), parent_.end(), -1);
    for (std::size_t i = 0; i < n_; ++i) base_[i] = static_cast<Vertex>(i);
    used_[root] = 1;
    std::vector<Vertex> queue{root};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Vertex v = queue[head];
      for (Vertex to : g_.neighbors(v)) {
        if (base_[v] == base_[to] || match_[v] == to) continue;
        if (to == root || (match_[to] != -1 && parent_[match_[to]] != -1)) {
          Vertex cur = lca(v, to);
          std::fill(blossom_.begin(), blossom_.end(), 0);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (std::size_t i = 0; i < n_; ++i) {
            if (blossom_[base_[i]]) {
              base_[i] = cur;
              if (!used_[i]) {
                used_[i] = 1;
                queue.push_back(static_cast<Vertex>(i));
              }
            }
          }
        } else if (parent_[to] == -1) {
          parent_[to] = v;
          if (match_[to] == -1) return to;
          used_[match_[to]] = 1;
          queue.push_back(match_[to]);
        }
      }
    }
    return -1;
  }

  const Graph& g_;
  std::size_t n_;
  std::vector<Vertex> match_, parent_, base_;
  std::vector<char> used_, blossom_, lca_mark_;
};

}  // namespace detail

// Vertex scan order for matching searches: ascending ids, or a seeded
// permutation to sample different 1-factors.
inline std::vector<Vertex> scan_order(std::size_t n, std::optional<std::uint64_t> seed) {
  auto order = iota_vector<Vertex>(n);
  if (seed) {
    std::mt19937_64 rng(*seed);
    shuffle_in_place(order, rng);
  }
  return order;
}

// A perfect matching of g, or nullopt when none exists.
inline std::optional<Matching> perfect_matching(const Graph& g,
                                                std::optional<std::uint64_t> seed = std::nullopt) {
  if (g.order() % 2 != 0) return std::nullopt;
  const auto order = scan_order(g.order(), seed);
  detail::BlossomMatcher matcher(g);
  matcher.greedy(order);
  for (Vertex v : order) {
    if (matcher.exposed(v) && !matcher.augment_from(v)) return std::nullopt;
  }
  return matcher.result();
}

// Hopcroft-Karp. Returns a matching saturating `left`, or nullopt; on
// failure `hall_violator` (if given) receives a set Z of left vertices with
// |N(Z)| < |Z|.
inline std::optional<Matching> bipartite_perfect_matching(const VertexSet& left,
                                                          const VertexSet& right,
                                                          std::span<const Edge> edges,
                                                          VertexSet* hall_violator = nullptr) {
  const std::size_t nl = left.size(), nr = right.size();
  auto local = [](const VertexSet& s, Vertex v) -> int {
    auto it = std::lower_bound(s.begin(), s.end(), v);
    return (it != s.end() && *it == v) ? static_cast<int>(it - s.begin()) : -1;
  };
  std::vector<std::vector<int>> adj(nl);
  for (const Edge& e : edges) {
    int lu = local(left, e.u), rv = local(right, e.v);
    if (lu < 0 || rv < 0) {
      lu = local(left, e.v);
      rv = local(right, e.u);
    }
    if (lu < 0 || rv < 0) {
      throw GraphError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ") does not join left to right");
    }
    adj[lu].push_back(rv);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }

  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> match_l(nl, -1), match_r(nr, -1), layer(nl);

  auto bfs = [&]() {
    std::deque<int> queue;
    bool found = false;
    for (std::size_t l = 0; l < nl; ++l) {
      if (match_l[l] == -1) {
        layer[l] = 0;
        queue.push_back(static_cast<int>(l));
      } else {
        layer[l] = kInf;
      }
    }
    while (!queue.empty()) {
      int l = queue.front();
      queue.pop_front();
      for (int r : adj[l]) {
        int next = match_r[r];
        if (next == -1) {
          found = true;
        } else if (layer[next] == kInf) {
          layer[next] = layer[l] + 1;
          queue.push_back(next);
        }
      }
    }
    return found;
  };

  auto dfs = [&](auto&& self, int l) -> bool {
    for (int r : adj[l]) {
      int next = match_r[r];
      if (next == -1 || (layer[next] == layer[l] + 1 && self(self, next))) {
        match_l[l] = r;
        match_r[r] = l;
        return true;
      }
    }
    layer[l] = kInf;
    return false;
  };

  std::size_t size = 0;
  while (bfs()) {
    for (std::size_t l = 0; l < nl; ++l) {
      if (match_l[l] == -1 && dfs(dfs, static_cast<int>(l))) ++size;
    }
  }

  if (size < nl) {
    if (hall_violator) {
      // Left vertices reachable by alternating paths from an exposed one.
      std::vector<char> seen(nl, 0);
      std::deque<int> queue;
      for (std::size_t l = 0; l < nl; ++l) {
        if (match_l[l] == -1) {
          seen[l] = 1;
          queue.push_back(static_cast<int>(l));
        }
      }
      while (!queue.empty()) {
        int l = queue.front();
        queue.pop_front();
        for (int r : adj[l]) {
          int next = match_r[r];
          if (next != -1 && !seen[next]) {
            seen[next] = 1;
            queue.push_back(next);
          }
        }
      }
      std::vector<Vertex> z;
      for (std::size_t l = 0; l < nl; ++l) {
        if (seen[l]) z.push_back(left[l]);
      }
      *hall_violator = VertexSet(std::move(z));
    }
    return std::nullopt;
  }

  Matching m;
  for (std::size_t l = 0; l < nl; ++l) m.edges.push_back(make_edge(left[l], right[match_l[l]]));
  std::sort(m.edges.begin(), m.edges.end());
  return m;
}

}  // namespace forge
