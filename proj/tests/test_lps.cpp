#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "forge/lps.hpp"

using namespace forge;

TEST(Lps, NumberTheory) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(13));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(91));
  EXPECT_EQ(next_prime(13), 17);
  EXPECT_EQ(legendre(13, 17), 1);
  EXPECT_EQ(legendre(5, 13), -1);
  EXPECT_EQ(legendre(17, 13), 1);
  EXPECT_THROW(legendre(3, 15), ParameterError);
  EXPECT_EQ(sqrt_minus_one(13), 5);
  EXPECT_EQ(sqrt_minus_one(17), 4);
  EXPECT_THROW(sqrt_minus_one(7), ParameterError);
}

TEST(Lps, GeneratorCountsAndConjugation) {
  for (std::int64_t p : {5, 13, 17, 29}) {
    const auto gens = enumerate_generators(p);
    EXPECT_EQ(gens.size(), static_cast<std::size_t>(p + 1)) << p;
    std::set<std::array<std::int64_t, 4>> all;
    for (const auto& g : gens) {
      EXPECT_GT(g.a[0], 0);
      EXPECT_EQ(g.a[0] % 2, 1);
      EXPECT_EQ(g.norm(), p);
      all.insert(g.a);
    }
    for (const auto& g : gens) EXPECT_TRUE(all.count(g.conjugate().a)) << p;
  }
}

TEST(Lps, ParameterValidation) {
  EXPECT_THROW(LpsParams::make(5, 13), ParameterError);   // 5 is not a square mod 13
  EXPECT_THROW(LpsParams::make(7, 13), ParameterError);   // 7 = 3 mod 4
  EXPECT_THROW(LpsParams::make(13, 13), ParameterError);
  EXPECT_THROW(LpsParams::make(13, 3), ParameterError);
  const auto prm = LpsParams::make(13, 17);
  EXPECT_EQ(prm.vertex_count(), 2448);
  EXPECT_EQ(prm.i_sqrt, 4);
}

TEST(Lps, ProjectiveGroupEnumeration) {
  for (std::int64_t q : {5, 13, 17}) {
    const auto psl = enumerate_psl(q);
    EXPECT_EQ(static_cast<std::int64_t>(psl.size()), q * (q * q - 1) / 2);
    EXPECT_TRUE(std::is_sorted(psl.begin(), psl.end(), [](const auto& a, const auto& b) { return a.e < b.e; }));
    const auto sq = square_table(q);
    for (const auto& m : psl) EXPECT_TRUE(m.det(q) != 0 && sq[static_cast<std::size_t>(m.det(q))]);
  }
}

TEST(Lps, X17_13) {
  const Graph g = build_lps_graph(LpsParams::make(17, 13));
  EXPECT_EQ(g.order(), 1092u);
  const auto prof = degree_profile(g);
  ASSERT_TRUE(prof.is_regular);
  EXPECT_EQ(*prof.k, 18u);
  EXPECT_TRUE(is_connected(g));
  EXPECT_FALSE(is_bipartite(g));
  EXPECT_TRUE(satisfies_invariants(g));
}

TEST(Lps, X13_17) {
  const Graph g = build_lps_graph(LpsParams::make(13, 17));
  EXPECT_EQ(g.order(), 2448u);
  EXPECT_EQ(*degree_profile(g).k, 14u);
  EXPECT_EQ(girth(g), Girth::finite(6));
  EXPECT_TRUE(is_connected(g));
  EXPECT_FALSE(is_bipartite(g));
}

TEST(Lps, BuildIsDeterministic) {
  const auto prm = LpsParams::make(5, 29);
  EXPECT_EQ(build_lps_graph(prm).edges(), build_lps_graph(prm).edges());
}
