#include <cmath>

#include <gtest/gtest.h>

#include "forge/spectral.hpp"
#include "oracles.hpp"

using namespace forge;

namespace {

void expect_spectrum(const EigenSystem& es, std::vector<double> want, double tol) {
  ASSERT_EQ(es.size(), want.size());
  std::sort(want.begin(), want.end());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(es.values[static_cast<Eigen::Index>(i)], want[i], tol);
}

}  // namespace

TEST(Spectral, SmallGraphs) {
  expect_spectrum(eigensystem(oracle::complete(3)), {-1, -1, 2}, 1e-12);
  expect_spectrum(eigensystem(oracle::cycle(4)), {-2, 0, 0, 2}, 1e-12);
  expect_spectrum(eigensystem(oracle::petersen()), {-2, -2, -2, -2, 1, 1, 1, 1, 1, 3}, 1e-8);
}

TEST(Spectral, PetersenGroupsAndInvariants) {
  const auto es = eigensystem(oracle::petersen());
  ASSERT_EQ(es.groups.size(), 3u);
  EXPECT_EQ(es.groups[0].count, 4u);
  EXPECT_EQ(es.groups[1].count, 5u);
  EXPECT_EQ(es.groups[2].count, 1u);
  EXPECT_LT(es.residual_bound, 1e-12);
  EXPECT_LT(orthonormality_error(es), 1e-12);
  EXPECT_NEAR(lambda_second(es, 3.0), 2.0, 1e-12);
  EXPECT_NEAR(lambda_third(es), 2.0, 1e-12);
  const auto pc = perron_check(es, 3.0);
  EXPECT_TRUE(pc.top_matches && pc.simple && pc.constant_sign);
}

TEST(Spectral, BackendsAgree) {
  SpectralOptions eigen_only;
  eigen_only.backend = EigenBackend::kEigen;
  const auto a = eigensystem(oracle::petersen());
  const auto b = eigensystem(oracle::petersen(), eigen_only);
  EXPECT_LT((a.values - b.values).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(b.backend, "eigen");
  SpectralOptions values_only;
  values_only.compute_vectors = false;
  const auto c = eigensystem(oracle::petersen(), values_only);
  EXPECT_FALSE(c.has_vectors());
  EXPECT_LT((a.values - c.values).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Spectral, CapIsEnforced) {
  SpectralOptions tiny;
  tiny.cap = 5;
  EXPECT_THROW(eigensystem(oracle::petersen(), tiny), SpectralError);
}

TEST(Spectral, LambdaExamples) {
  // K4: spectrum {-1,-1,-1,3}; C5: 2, 2cos(2pi/5) x2, 2cos(4pi/5) x2.
  const auto k4 = eigensystem(oracle::complete(4));
  EXPECT_NEAR(lambda_second(k4, 3.0), 1.0, 1e-12);
  const auto c5 = eigensystem(oracle::cycle(5));
  EXPECT_NEAR(lambda_second(c5, 2.0), 2.0 * std::cos(M_PI / 5.0), 1e-12);
  EXPECT_NEAR(lambda_third(c5), 2.0 * std::cos(M_PI / 5.0), 1e-12);
}

TEST(Spectral, SubspaceMassIsBasisInvariant) {
  const auto es = eigensystem(oracle::petersen());
  const auto& grp = es.groups[1];  // eigenvalue 1, dimension 5
  Eigen::MatrixXd basis = es.vectors.middleCols(static_cast<Eigen::Index>(grp.first), 5);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Random(5, 5));
  Eigen::MatrixXd rot = qr.householderQ();
  const VertexSet s{0, 1, 2};
  const auto a = subspace_mass(basis, s);
  const auto b = subspace_mass(basis * rot, s);
  EXPECT_NEAR(a.max_mass, b.max_mass, 1e-12);
  EXPECT_NEAR(a.min_mass, b.min_mass, 1e-12);
  EXPECT_NEAR(a.witness.norm(), 1.0, 1e-12);
  double on_s = 0.0;
  for (Vertex v : s) on_s += a.witness[v] * a.witness[v];
  EXPECT_NEAR(on_s, a.max_mass, 1e-12);
}

TEST(Spectral, SimpleEigenvalueMassIsSquaredNorm) {
  const auto es = eigensystem(oracle::cycle(5));
  auto v = es.vectors.col(4);  // Perron vector, entries 1/sqrt(5)
  const VertexSet s{0, 2};
  EXPECT_NEAR(subspace_mass(es.vectors.middleCols(4, 1), s).max_mass, v[0] * v[0] + v[2] * v[2], 1e-12);
  EXPECT_NEAR(subspace_mass(es.vectors.middleCols(4, 1), s).max_mass, 0.4, 1e-12);
}

TEST(Spectral, CensusValidatesInput) {
  const auto es = eigensystem(oracle::petersen());
  EXPECT_THROW(localization_census(es, VertexSet{0}, 0.0), ParameterError);
  EXPECT_THROW(localization_census(es, VertexSet{0}, 1.0), ParameterError);
  EXPECT_THROW(localization_census(es, VertexSet{}, 0.5), ParameterError);
  EXPECT_THROW(localization_census(es, VertexSet{10}, 0.5), ParameterError);
  SpectralOptions values_only;
  values_only.compute_vectors = false;
  EXPECT_THROW(localization_census(eigensystem(oracle::petersen(), values_only), VertexSet{0}, 0.5), SpectralError);
  const auto all = localization_census(es, VertexSet{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, 0.5);
  EXPECT_EQ(all.size(), 3u);
  for (const auto& r : all) EXPECT_NEAR(r.mass, 1.0, 1e-12);
}

TEST(Spectral, GsBound) {
  const auto b = gs_bound_check(0.5, 2, 8, 3);
  EXPECT_NEAR(b.rhs, 0.5 * std::pow(2.0, 1.0) / 8.0, 1e-15);
  EXPECT_TRUE(b.pass);
  EXPECT_FALSE(gs_bound_check(0.9, 13, 400, 10).pass);
}

TEST(Spectral, TreeOracle) {
  const auto t = tree_spectrum_oracle(2, 1);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_NEAR(t[0], -std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(t[1], std::sqrt(3.0), 1e-12);
  // Depth 2, d = 2: eigenvalues 0 and +-sqrt(5).
  const auto t2 = tree_spectrum_oracle(2, 2);
  EXPECT_NEAR(t2[2], std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(t2[1], 0.0, 1e-12);
  EXPECT_THROW(tree_spectrum_oracle(1, 1), ParameterError);
}
