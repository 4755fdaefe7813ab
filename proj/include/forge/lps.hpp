#pragma once

// Lubotzky-Phillips-Sarnak Ramanujan graphs X^{p,q}: Cayley graphs of
// PSL(2, F_q) with the p+1 generators coming from integral quaternions of
// norm p. Only the non-bipartite case (p a square mod q) with p, q = 1 mod 4
// is supported.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/graph.hpp"

namespace forge {

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::int64_t k = 3; k * k <= n; k += 2) {
    if (n % k == 0) return false;
  }
  return true;
}

inline std::int64_t next_prime(std::int64_t n) {
  std::int64_t k = n + 1;
  while (!is_prime(k)) ++k;
  return k;
}

inline std::int64_t mod(std::int64_t a, std::int64_t q) {
  std::int64_t r = a % q;
  return r < 0 ? r + q : r;
}

inline std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t q) {
  std::int64_t result = 1 % q;
  base = mod(base, q);
  while (exp > 0) {
    if (exp & 1) result = result * base % q;
    base = base * base % q;
    exp >>= 1;
  }
  return result;
}

// Legendre symbol by Euler's criterion.
inline int legendre(std::int64_t a, std::int64_t q) {
  if (q <= 2 || !is_prime(q)) throw ParameterError("legendre: " + std::to_string(q) + " is not an odd prime");
  std::int64_t e = pow_mod(a, (q - 1) / 2, q);
  if (e == 0) return 0;
  return e == 1 ? 1 : -1;
}

// Smallest x in [1, q) with x^2 = -1 (mod q).
inline std::int64_t sqrt_minus_one(std::int64_t q) {
  if (!is_prime(q) || q % 4 != 1) {
    throw ParameterError("sqrt_minus_one: q=" + std::to_string(q) + " must be a prime = 1 mod 4");
  }
  for (std::int64_t x = 1; x < q; ++x) {
    if (x * x % q == q - 1) return x;
  }
  throw Error("sqrt_minus_one: no root found for prime q=" + std::to_string(q));
}

struct QuaternionGenerator {
  std::array<std::int64_t, 4> a{};

  std::int64_t norm() const { return a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]; }
  QuaternionGenerator conjugate() const { return {{a[0], -a[1], -a[2], -a[3]}}; }

  friend auto operator<=>(const QuaternionGenerator&, const QuaternionGenerator&) = default;
};

// All (a0,a1,a2,a3) with a0 > 0 odd, a1..a3 even and norm p; there are
// exactly p+1 of them. Returned in ascending lexicographic order.
inline std::vector<QuaternionGenerator> enumerate_generators(std::int64_t p) {
  if (!is_prime(p) || p % 4 != 1) {
    throw ParameterError("generators: p=" + std::to_string(p) + " must be a prime = 1 mod 4");
  }
  auto bound = static_cast<std::int64_t>(std::sqrt(static_cast<double>(p)));
  while ((bound + 1) * (bound + 1) <= p) ++bound;
  std::vector<QuaternionGenerator> out;
  for (std::int64_t a0 = 1; a0 <= bound; a0 += 2) {
    for (std::int64_t a1 = -bound; a1 <= bound; ++a1) {
      if (a1 % 2 != 0) continue;
      for (std::int64_t a2 = -bound; a2 <= bound; ++a2) {
        if (a2 % 2 != 0) continue;
        for (std::int64_t a3 = -bound; a3 <= bound; ++a3) {
          if (a3 % 2 != 0) continue;
          QuaternionGenerator g{{a0, a1, a2, a3}};
          if (g.norm() == p) out.push_back(g);
        }
      }
    }
  }
  if (out.size() != static_cast<std::size_t>(p + 1)) {
    throw Error("generators: found " + std::to_string(out.size()) + " tuples for p=" +
                std::to_string(p) + ", expected p+1");
  }
  return out;
}

struct LpsParams {
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::int64_t i_sqrt = 0;

  static LpsParams make(std::int64_t p, std::int64_t q) {
    auto fail = [&](const std::string& why) {
      throw ParameterError("LPS(p=" + std::to_string(p) + ", q=" + std::to_string(q) + "): " + why);
    };
    if (!is_prime(p) || p % 4 != 1) fail("p must be a prime = 1 mod 4");
    if (!is_prime(q) || q % 4 != 1) fail("q must be a prime = 1 mod 4");
    if (p == q) fail("p and q must differ");
    if (q >= (1 << 15)) fail("q must be below 2^15");
    if (q * q <= 4 * p) fail("q must exceed 2*sqrt(p)");
    if (legendre(p, q) != 1) fail("p is not a square mod q (bipartite case is not supported)");
    return {p, q, sqrt_minus_one(q)};
  }

  std::int64_t vertex_count() const { return q * (q * q - 1) / 2; }
};

// 2x2 matrix over F_q, entries (a, b; c, d), scaled so the first nonzero
// entry is 1. Two matrices represent the same projective element iff their
// canonical forms are equal.
struct ProjectiveMatrix {
  std::array<std::int64_t, 4> e{};

  static ProjectiveMatrix canonical(std::array<std::int64_t, 4> m, std::int64_t q) {
    for (auto& x : m) x = mod(x, q);
    std::size_t lead = 0;
    while (lead < 4 && m[lead] == 0) ++lead;
    if (lead == 4) throw Error("zero matrix has no projective class");
    std::int64_t inv = pow_mod(m[lead], q - 2, q);
    for (auto& x : m) x = x * inv % q;
    return {m};
  }

  std::int64_t det(std::int64_t q) const { return mod(e[0] * e[3] - e[1] * e[2], q); }

  ProjectiveMatrix times(const ProjectiveMatrix& o, std::int64_t q) const {
    return canonical({e[0] * o.e[0] + e[1] * o.e[2], e[0] * o.e[1] + e[1] * o.e[3],
                      e[2] * o.e[0] + e[3] * o.e[2], e[2] * o.e[1] + e[3] * o.e[3]},
                     q);
  }

  std::uint64_t key() const {
    return (static_cast<std::uint64_t>(e[0]) << 45) | (static_cast<std::uint64_t>(e[1]) << 30) |
           (static_cast<std::uint64_t>(e[2]) << 15) | static_cast<std::uint64_t>(e[3]);
  }

  friend bool operator==(const ProjectiveMatrix&, const ProjectiveMatrix&) = default;
};

inline ProjectiveMatrix generator_image(const QuaternionGenerator& g, const LpsParams& params) {
  const std::int64_t i = params.i_sqrt;
  const auto& a = g.a;
  return ProjectiveMatrix::canonical(
      {a[0] + i * a[1], a[2] + i * a[3], -a[2] + i * a[3], a[0] - i * a[1]}, params.q);
}

inline std::vector<bool> square_table(std::int64_t q) {
  std::vector<bool> sq(static_cast<std::size_t>(q), false);
  for (std::int64_t x = 1; x < q; ++x) sq[static_cast<std::size_t>(x * x % q)] = true;
  return sq;
}

// PSL(2,q) elements as canonical projective matrices with square determinant,
// in ascending lexicographic order of (a, b, c, d).
inline std::vector<ProjectiveMatrix> enumerate_psl(std::int64_t q) {
  const auto sq = square_table(q);
  std::vector<ProjectiveMatrix> out;
  out.reserve(static_cast<std::size_t>(q * (q * q - 1) / 2));
  // Leading entry zero: (0, 1; c, d), det = -c.
  for (std::int64_t c = 0; c < q; ++c) {
    if (!sq[static_cast<std::size_t>(mod(-c, q))]) continue;
    for (std::int64_t d = 0; d < q; ++d) out.push_back({{0, 1, c, d}});
  }
  for (std::int64_t b = 0; b < q; ++b) {
    for (std::int64_t c = 0; c < q; ++c) {
      for (std::int64_t d = 0; d < q; ++d) {
        if (sq[static_cast<std::size_t>(mod(d - b * c, q))]) out.push_back({{1, b, c, d}});
      }
    }
  }
  return out;
}

// X^{p,q}: vertex ids follow the lexicographic order of enumerate_psl; g is
// joined to g*s for every generator image s.
inline Graph build_lps_graph(const LpsParams& params, std::size_t max_vertices = 2'000'000) {
  const LpsParams checked = LpsParams::make(params.p, params.q);
  const std::int64_t p = checked.p;
  const std::int64_t q = checked.q;
  if (static_cast<std::size_t>(checked.vertex_count()) > max_vertices) {
    throw ParameterError("LPS(p=" + std::to_string(p) + ", q=" + std::to_string(q) + ") has " +
                         std::to_string(checked.vertex_count()) + " vertices, above the cap of " +
                         std::to_string(max_vertices));
  }
  const auto sq = square_table(q);
  const ProjectiveMatrix identity{{1, 0, 0, 1}};

  std::vector<ProjectiveMatrix> images;
  for (const auto& g : enumerate_generators(p)) {
    auto s = generator_image(g, checked);
    if (s.det(q) == 0 || !sq[static_cast<std::size_t>(s.det(q))]) {
      throw Error("generator image of (" + std::to_string(g.a[0]) + "," + std::to_string(g.a[1]) +
                  "," + std::to_string(g.a[2]) + "," + std::to_string(g.a[3]) +
                  ") is not in PSL(2," + std::to_string(q) + ")");
    }
    if (s == identity) throw ParameterError("a generator maps to the identity mod q");
    images.push_back(s);
  }
  {
    std::vector<std::uint64_t> keys;
    for (const auto& s : images) keys.push_back(s.key());
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
      throw ParameterError("generator images are not distinct mod q=" + std::to_string(q));
    }
  }

  const auto vertices = enumerate_psl(q);
  if (static_cast<std::int64_t>(vertices.size()) != checked.vertex_count()) {
    throw Error("PSL enumeration produced " + std::to_string(vertices.size()) + " elements");
  }
  std::vector<std::uint64_t> keys(vertices.size());
  for (std::size_t k = 0; k < vertices.size(); ++k) keys[k] = vertices[k].key();

  auto index_of = [&](const ProjectiveMatrix& m) {
    auto it = std::lower_bound(keys.begin(), keys.end(), m.key());
    if (it == keys.end() || *it != m.key()) throw Error("product left PSL(2,q)");
    return static_cast<Vertex>(it - keys.begin());
  };

  std::vector<Edge> edges;
  edges.reserve(vertices.size() * images.size() / 2);
  std::vector<std::vector<Vertex>> lists(vertices.size());
  for (std::size_t u = 0; u < vertices.size(); ++u) {
    auto& nb = lists[u];
    for (const auto& s : images) nb.push_back(index_of(vertices[u].times(s, q)));
    std::sort(nb.begin(), nb.end());
    for (Vertex v : nb) {
      if (v == static_cast<Vertex>(u)) throw Error("Cayley graph has a self-loop");
      if (static_cast<Vertex>(u) < v) edges.push_back({static_cast<Vertex>(u), v});
    }
  }
  Graph g = Graph::from_edges(vertices.size(), edges);
  for (std::size_t u = 0; u < vertices.size(); ++u) {
    auto nb = g.neighbors(static_cast<Vertex>(u));
    if (!std::equal(nb.begin(), nb.end(), lists[u].begin(), lists[u].end())) {
      throw Error("generator set is not closed under inverses; adjacency is asymmetric");
    }
  }
  if (!is_connected(g)) throw Error("LPS graph is disconnected");
  if (is_bipartite(g)) throw Error("LPS graph is bipartite");
  return g;
}

}  // namespace forge
