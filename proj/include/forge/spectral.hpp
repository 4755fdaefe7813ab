#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "forge/errors.hpp"
#include "forge/graph.hpp"

namespace forge {

inline constexpr std::size_t kDefaultEigenCap = 15'000;

// FORGE_EIG_CAP overrides the largest order accepted by eigensystem().
inline std::size_t default_eigen_cap() {
  if (const char* env = std::getenv("FORGE_EIG_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultEigenCap;
}

enum class EigenBackend { kAuto, kEigen };

// FORGE_EIG_BACKEND=eigen skips the LAPACK attempt.
inline EigenBackend default_eigen_backend() {
  const char* env = std::getenv("FORGE_EIG_BACKEND");
  return env && std::string(env) == "eigen" ? EigenBackend::kEigen : EigenBackend::kAuto;
}

struct SpectralOptions {
  bool compute_vectors = true;
  EigenBackend backend = default_eigen_backend();
  // Eigenvalues closer than factor * max_degree (chained) share an eigenspace.
  double group_tolerance_factor = 1e-6;
  std::size_t cap = default_eigen_cap();
};

struct EigenGroup {
  std::size_t first = 0;  // index into the ascending eigenvalue list
  std::size_t count = 0;
  double value = 0.0;  // mean of the grouped eigenvalues
};

// Full spectrum of an adjacency matrix. `vectors` is empty when only
// eigenvalues were requested; otherwise column k belongs to values[k].
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  double residual_bound = 0.0;  // max_k ||A v_k - l_k v_k||_inf
  double group_tolerance = 0.0;
  std::string backend;  // solver that produced the accepted result
  std::vector<EigenGroup> groups;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.size()); }
  bool has_vectors() const noexcept { return vectors.size() > 0; }
};

inline Eigen::MatrixXd adjacency_matrix(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.order());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Vertex v : g.neighbors(static_cast<Vertex>(u))) a(u, v) = 1.0;
  }
  return a;
}

inline std::vector<EigenGroup> group_eigenvalues(const Eigen::VectorXd& values, double tol) {
  std::vector<EigenGroup> groups;
  const auto n = static_cast<std::size_t>(values.size());
  std::size_t start = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k == n || values[static_cast<Eigen::Index>(k)] - values[static_cast<Eigen::Index>(k - 1)] > tol) {
      double sum = 0.0;
      for (std::size_t j = start; j < k; ++j) sum += values[static_cast<Eigen::Index>(j)];
      groups.push_back({start, k - start, sum / static_cast<double>(k - start)});
      start = k;
    }
  }
  return groups;
}

// max_k ||A v_k - l_k v_k||_inf using the sparse adjacency of g.
inline double eigen_residual(const Graph& g, const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors) {
  double worst = 0.0;
  const auto n = static_cast<Eigen::Index>(g.order());
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    const double* col = vectors.col(k).data();
    for (Eigen::Index u = 0; u < n; ++u) {
      double acc = -values[k] * col[u];
      for (Vertex w : g.neighbors(static_cast<Vertex>(u))) acc += col[w];
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

namespace detail {

// LAPACK dsyevd; the linked BLAS may be wrong on some CPUs, so the caller
// validates the result.
inline bool lapack_eigensystem(Eigen::MatrixXd& a, Eigen::VectorXd& values) {
  const auto n = static_cast<lapack_int>(a.rows());
  return LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, values.data()) == 0;
}

inline void eigen_eigensystem(const Graph& g, EigenSystem& es, bool vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency_matrix(g),
                                                        vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw SpectralError("eigensolver failed to converge");
  es.values = solver.eigenvalues();
  if (vectors) es.vectors = solver.eigenvectors();
}

}  // namespace detail

// Dense symmetric eigendecomposition. With vectors, the LAPACK result is
// accepted only if its residual and trace identities hold; otherwise the
// spectrum is recomputed with Eigen's solver.
inline EigenSystem eigensystem(const Graph& g, const SpectralOptions& opts = {}) {
  const std::size_t n = g.order();
  if (n > opts.cap) {
    throw SpectralError("graph order " + std::to_string(n) + " exceeds eigensolver cap " +
                        std::to_string(opts.cap) + " (set FORGE_EIG_CAP to raise it)");
  }
  EigenSystem es;
  es.values.resize(static_cast<Eigen::Index>(n));
  if (n == 0) return es;
  const auto profile = degree_profile(g);
  const double top = std::max<double>(1.0, static_cast<double>(profile.max_degree));
  const double edges = static_cast<double>(g.edge_count());
  es.backend = "eigen";
  if (opts.compute_vectors && opts.backend == EigenBackend::kAuto) {
    Eigen::MatrixXd a = adjacency_matrix(g);
    if (detail::lapack_eigensystem(a, es.values)) {
      const double res = eigen_residual(g, es.values, a);
      const bool ok = res <= 1e-10 * top && std::abs(es.values.sum()) <= 1e-8 * top &&
                      std::abs(es.values.squaredNorm() - 2.0 * edges) <= 1e-8 * std::max(1.0, edges);
      if (ok) {
        es.vectors = std::move(a);
        es.residual_bound = res;
        es.backend = "lapack";
      } else {
        es.backend = "eigen (lapack result rejected, residual " + std::to_string(res) + ")";
      }
    } else {
      es.backend = "eigen (lapack failed)";
    }
  }
  if (es.vectors.size() == 0) {
    detail::eigen_eigensystem(g, es, opts.compute_vectors);
    if (opts.compute_vectors) es.residual_bound = eigen_residual(g, es.values, es.vectors);
  }
  es.group_tolerance = opts.group_tolerance_factor * top;
  es.groups = group_eigenvalues(es.values, es.group_tolerance);
  return es;
}

// max |V^T V - I|; O(n^3), intended for checks rather than hot paths.
inline double orthonormality_error(const EigenSystem& es) {
  if (!es.has_vectors()) throw SpectralError("eigensystem has no eigenvectors");
  Eigen::MatrixXd gram = es.vectors.transpose() * es.vectors;
  gram.diagonal().array() -= 1.0;
  return gram.cwiseAbs().maxCoeff();
}

// Largest |eigenvalue| after removing one copy of the Perron eigenvalue.
inline double lambda_second(const EigenSystem& es, double expected_top, double tol = 1e-6) {
  const auto n = static_cast<Eigen::Index>(es.size());
  if (n < 2) throw SpectralError("lambda needs at least 2 eigenvalues");
  const double top = es.values[n - 1];
  if (std::abs(top - expected_top) > tol) {
    throw SpectralError("top eigenvalue " + std::to_string(top) + " differs from expected " +
                        std::to_string(expected_top) + " (graph not regular of that degree)");
  }
  return std::max(std::abs(es.values[0]), std::abs(es.values[n - 2]));
}

// Third largest |eigenvalue|, multiplicities counted.
inline double lambda_third(const EigenSystem& es) {
  if (es.size() < 3) throw SpectralError("lambda_3 needs at least 3 eigenvalues");
  std::vector<double> mags(es.size());
  for (std::size_t k = 0; k < es.size(); ++k) mags[k] = std::abs(es.values[static_cast<Eigen::Index>(k)]);
  std::nth_element(mags.begin(), mags.begin() + 2, mags.end(), std::greater<>());
  return mags[2];
}

struct PerronCheck {
  double top = 0.0;
  bool top_matches = false;
  bool simple = false;        // top eigenvalue has its own group
  bool constant_sign = false;
};

inline PerronCheck perron_check(const EigenSystem& es, double expected_top, double tol = 1e-8) {
  PerronCheck pc;
  if (es.size() == 0 || !es.has_vectors()) return pc;
  const auto n = static_cast<Eigen::Index>(es.size());
  pc.top = es.values[n - 1];
  pc.top_matches = std::abs(pc.top - expected_top) <= tol;
  pc.simple = !es.groups.empty() && es.groups.back().count == 1;
  auto v = es.vectors.col(n - 1);
  pc.constant_sign = (v.array() > 0.0).all() || (v.array() < 0.0).all();
  return pc;
}

struct SubspaceMass {
  double max_mass = 0.0;
  double min_mass = 0.0;
  Eigen::VectorXd witness;  // unit vector in the subspace attaining max_mass
};

// For an orthonormal basis B (n x k), the extreme values of ||x_S||^2 over
// unit vectors x in span(B) are the extreme eigenvalues of B_S^T B_S.
inline SubspaceMass subspace_mass(const Eigen::Ref<const Eigen::MatrixXd>& basis, const VertexSet& s) {
  const Eigen::Index k = basis.cols();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(s.size()), k);
  for (std::size_t i = 0; i < s.size(); ++i) rows.row(static_cast<Eigen::Index>(i)) = basis.row(s[i]);
  Eigen::MatrixXd gram = rows.transpose() * rows;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  SubspaceMass out;
  out.max_mass = std::clamp(solver.eigenvalues()[k - 1], 0.0, 1.0);
  out.min_mass = std::clamp(solver.eigenvalues()[0], 0.0, 1.0);
  out.witness = basis * solver.eigenvectors().col(k - 1);
  out.witness.normalize();
  return out;
}

struct LocalizationRecord {
  double eigenvalue = 0.0;
  std::size_t eigenspace_dim = 0;
  double mass = 0.0;
  std::size_t group_index = 0;
  Eigen::VectorXd witness;
};

// Eigenspaces whose best unit vector puts at least `epsilon` of its squared
// norm on S, sorted by mass descending.
inline std::vector<LocalizationRecord> localization_census(const EigenSystem& es, const VertexSet& s,
                                                           double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
  if (s.empty()) throw ParameterError("localization set S must be nonempty");
  if (!s.within(es.size())) throw ParameterError("localization set S has ids outside the graph");
  if (!es.has_vectors()) throw SpectralError("localization census needs eigenvectors");
  std::vector<LocalizationRecord> out;
  for (std::size_t gi = 0; gi < es.groups.size(); ++gi) {
    const auto& grp = es.groups[gi];
    auto basis = es.vectors.middleCols(static_cast<Eigen::Index>(grp.first), static_cast<Eigen::Index>(grp.count));
    auto sm = subspace_mass(basis, s);
    if (sm.max_mass >= epsilon) {
      out.push_back({grp.value, grp.count, sm.max_mass, gi, std::move(sm.witness)});
    }
  }
  std::sort(out.begin(), out.end(), [](const LocalizationRecord& a, const LocalizationRecord& b) {
    if (a.mass != b.mass) return a.mass > b.mass;
    return a.eigenvalue < b.eigenvalue;
  });
  return out;
}

struct GsBound {
  double lhs = 0.0;  // |S|
  double rhs = 0.0;  // eps * d^(eps*girth/4) / (2 d^2)
  double margin = 0.0;
  bool pass = false;
};

// Lower bound on the support size of any eigenvector placing mass eps on S
// in a (d+1)-regular graph of the given girth.
inline GsBound gs_bound_check(double epsilon, int d, std::size_t girth_value, std::size_t s_size) {
  GsBound b;
  const double dd = static_cast<double>(d);
  b.lhs = static_cast<double>(s_size);
  b.rhs = epsilon * std::pow(dd, epsilon / 4.0 * static_cast<double>(girth_value)) / (2.0 * dd * dd);
  b.margin = b.lhs - b.rhs;
  b.pass = b.lhs >= b.rhs;
  return b;
}

// Spectrum of the radial quotient of a depth-r tree whose root has d+1
// children and other internal vertices d children: tridiagonal, zero
// diagonal, couplings sqrt(d+1) at the root and sqrt(d) below.
inline std::vector<double> tree_spectrum_oracle(int d, int r) {
  if (d < 2 || r < 1) throw ParameterError("tree_spectrum_oracle needs d >= 2 and r >= 1");
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(r + 1, r + 1);
  for (int i = 0; i < r; ++i) {
    double c = std::sqrt(static_cast<double>(i == 0 ? d + 1 : d));
    t(i, i + 1) = t(i + 1, i) = c;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t, Eigen::EigenvaluesOnly);
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + r + 1);
  return out;
}

}  // namespace forge
