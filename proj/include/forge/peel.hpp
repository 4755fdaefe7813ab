#pragma once

// Iterated removal of perfect matchings (1-factors) from a regular graph,
// recording the spectral certificate and the Weyl-step evidence per factor.

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
#include "forge/spectral.hpp"

namespace forge {

// Largest lambda_3 (third largest |eigenvalue|) that still guarantees a
// 1-factor in a (d+1)-regular graph of even order.
inline double cgh_threshold(int d) {
  if (d < 2) throw ParameterError("cgh_threshold needs d >= 2");
  const double x = d;
  if (d == 2) return 2.85577;
  if (d % 2 == 1) return (x - 1.0 + std::sqrt((x + 1.0) * (x + 1.0) + 12.0)) / 2.0;
  return (x - 2.0 + std::sqrt((x + 2.0) * (x + 2.0) + 16.0)) / 2.0;
}

struct PeelStep {
  std::size_t degree_before = 0;
  Matching matching;
  double lambda_before = 0.0;
  double lambda_after = 0.0;
  double lambda3_before = 0.0;
  double lambda3_after = 0.0;
  std::optional<double> threshold;  // unset when degree_before < 3
  bool certificate_ok = false;
  Girth girth_before = Girth::infinite();
  Girth girth_after = Girth::infinite();
};

struct PeelTrace {
  std::vector<PeelStep> steps;
};

class PeelError : public MatchingError {
 public:
  PeelError(const std::string& what, PeelTrace partial)
      : MatchingError(what), partial_(std::move(partial)) {}

  const PeelTrace& partial_trace() const noexcept { return partial_; }

 private:
  PeelTrace partial_;
};

struct OneFactorPeel {
  Graph graph;
  PeelStep step;
  EigenSystem spectrum_after;  // eigenvalues only
};

namespace detail {

inline EigenSystem peel_spectrum(const Graph& g) {
  SpectralOptions opts;
  opts.compute_vectors = false;
  return eigensystem(g, opts);
}

inline std::size_t regular_degree(const Graph& g, const char* who) {
  auto prof = degree_profile(g);
  if (!prof.is_regular) throw ParameterError(std::string(who) + ": graph is not regular");
  return *prof.k;
}

}  // namespace detail

// Removes one perfect matching from a regular graph of even order. The
// lambda_3 certificate is recorded but a found matching is authoritative.
inline OneFactorPeel peel_one_factor(const Graph& g, std::optional<std::uint64_t> seed = std::nullopt,
                                     const EigenSystem* spectrum_before = nullptr) {
  const std::size_t k = detail::regular_degree(g, "peel_one_factor");
  if (g.order() % 2 != 0) throw ParameterError("peel_one_factor: odd vertex count");
  if (k == 0) throw ParameterError("peel_one_factor: graph has no edges");

  EigenSystem local;
  if (!spectrum_before) {
    local = detail::peel_spectrum(g);
    spectrum_before = &local;
  }
  PeelStep step;
  step.degree_before = k;
  step.lambda_before = lambda_second(*spectrum_before, static_cast<double>(k));
  step.lambda3_before = lambda_third(*spectrum_before);
  if (k >= 3) {
    step.threshold = cgh_threshold(static_cast<int>(k) - 1);
    step.certificate_ok = step.lambda3_before <= *step.threshold;
  }
  step.girth_before = girth(g);

  auto m = perfect_matching(g, seed);
  if (!m) {
    std::string why = "no perfect matching in the " + std::to_string(k) + "-regular graph; lambda_3 = " +
                      std::to_string(step.lambda3_before);
    if (step.threshold) {
      why += step.certificate_ok ? " <= threshold " + std::to_string(*step.threshold) +
                                       " (certificate held: inconsistent with the 1-factor theorem)"
                                 : " > threshold " + std::to_string(*step.threshold) +
                                       " (certificate hypothesis also failed)";
    }
    throw PeelError(why, {});
  }
  step.matching = std::move(*m);

  OneFactorPeel out;
  out.graph = remove_edges(g, step.matching.edges);
  out.spectrum_after = detail::peel_spectrum(out.graph);
  step.lambda_after = lambda_second(out.spectrum_after, static_cast<double>(k - 1));
  if (out.graph.order() >= 3) step.lambda3_after = lambda_third(out.spectrum_after);
  step.girth_after = girth(out.graph);
  out.step = std::move(step);
  return out;
}

struct PeelResult {
  Graph graph;
  PeelTrace trace;
};

// Peels 1-factors until the graph is (target_d + 1)-regular. With a seed,
// each step draws its own scan-order seed from one stream.
inline PeelResult peel_to_degree(const Graph& g, int target_d,
                                 std::optional<std::uint64_t> seed = std::nullopt) {
  const std::size_t k = detail::regular_degree(g, "peel_to_degree");
  if (target_d < 0 || static_cast<std::size_t>(target_d) + 1 > k) {
    throw ParameterError("peel_to_degree: target degree " + std::to_string(target_d + 1) +
                         " exceeds current degree " + std::to_string(k));
  }
  PeelResult res{g, {}};
  if (static_cast<std::size_t>(target_d) + 1 == k) return res;
  if (g.order() % 2 != 0) throw ParameterError("peel_to_degree: odd vertex count");

  std::optional<std::mt19937_64> stream;
  if (seed) stream.emplace(*seed);
  EigenSystem spectrum = detail::peel_spectrum(g);
  while (degree_profile(res.graph).max_degree > static_cast<std::size_t>(target_d) + 1) {
    std::optional<std::uint64_t> step_seed;
    if (stream) step_seed = (*stream)();
    try {
      auto step = peel_one_factor(res.graph, step_seed, &spectrum);
      res.graph = std::move(step.graph);
      spectrum = std::move(step.spectrum_after);
      res.trace.steps.push_back(std::move(step.step));
    } catch (const PeelError& e) {
      throw PeelError(std::string("after ") + std::to_string(res.trace.steps.size()) +
                          " factors: " + e.what(),
                      res.trace);
    }
  }
  return res;
}

// Per-step evidence: perfect matching, exact degree drop, Weyl steps on
// lambda and lambda_3, and girth monotonicity.
inline std::vector<Check> peel_trace_checks(const PeelTrace& trace, std::size_t order) {
  std::vector<Check> out;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    const std::string tag = "peel[" + std::to_string(i) + "].";
    const double tol = 1e-8 * static_cast<double>(s.degree_before);
    out.push_back(make_check(tag + "matching_perfect", "removed matching covers every vertex",
                             CheckKind::kExact, 2.0 * static_cast<double>(s.matching.size()),
                             Relation::kEqual, static_cast<double>(order)));
    out.push_back(make_check(tag + "weyl_lambda", "lambda(G - M) <= lambda(G) + 1", CheckKind::kBound,
                             s.lambda_after, Relation::kLessEqual, s.lambda_before + 1.0, tol));
    out.push_back(make_check(tag + "weyl_lambda3", "lambda_3(G - M) <= lambda_3(G) + 1",
                             CheckKind::kBound, s.lambda3_after, Relation::kLessEqual,
                             s.lambda3_before + 1.0, tol));
    out.push_back(make_check(
        tag + "girth_monotone", "girth(G - M) >= girth(G)", CheckKind::kExact,
        s.girth_after.is_infinite() ? std::nullopt : std::optional<double>(s.girth_after.value()),
        Relation::kGreaterEqual,
        s.girth_before.is_infinite() ? 1e300 : static_cast<double>(s.girth_before.value())));
    if (s.threshold) {
      auto c = make_check(tag + "cgh_certificate", "lambda_3(G) <= 1-factor threshold(d)",
                          CheckKind::kCertificate, s.lambda3_before, Relation::kLessEqual, *s.threshold);
      c.note = "sufficient condition only; the found matching is authoritative";
      out.push_back(std::move(c));
    }
  }
  return out;
}

enum class TheoremMode { kThm12, kThm14, kFreeform };

NLOHMANN_JSON_SERIALIZE_ENUM(TheoremMode, {{TheoremMode::kThm12, "thm12"},
                                           {TheoremMode::kThm14, "thm14"},
                                           {TheoremMode::kFreeform, "freeform"}})

struct SeedExpanderParams {
  int d = 0;
  // thm12: consecutive primes p_j < p_j1
  std::int64_t p_j = 0;
  std::int64_t p_j1 = 0;
  // thm14: prime p and lower anchor t
  std::int64_t p = 0;
  std::int64_t t = 0;
};

// 5/(2 sqrt 6) - 1, the admissible gap constant for the near-prime degrees.
inline double thm14_gap_constant() { return 5.0 / (2.0 * std::sqrt(6.0)) - 1.0; }

// Spectral bound on the peeled seed graph H plus the arithmetic hypothesis
// that justifies it, for the chosen theorem.
inline std::vector<Check> check_prop_lambda_bounds(double lambda_h, TheoremMode mode,
                                                   const SeedExpanderParams& prm) {
  std::vector<Check> out;
  const double d = prm.d;
  const double tol = 1e-8 * (d + 1.0);
  if (mode == TheoremMode::kThm12) {
    out.push_back(make_check("prop_thm12.gap", "p_{j+1} - p_j < p_j / 5", CheckKind::kHypothesis,
                             static_cast<double>(prm.p_j1 - prm.p_j), Relation::kLess,
                             static_cast<double>(prm.p_j) / 5.0));
    out.push_back(make_check("prop_thm12.lambda", "lambda(H) <= (2/5) d + 2 sqrt(d)", CheckKind::kBound,
                             lambda_h, Relation::kLessEqual, 0.4 * d + 2.0 * std::sqrt(d), tol));
  } else if (mode == TheoremMode::kThm14) {
    out.push_back(make_check("prop_thm14.gap_nonneg", "p - t >= 0", CheckKind::kHypothesis,
                             static_cast<double>(prm.p - prm.t), Relation::kGreaterEqual, 0.0));
    out.push_back(make_check("prop_thm14.gap", "p - t < (5/(2 sqrt 6) - 1) sqrt(t)", CheckKind::kHypothesis,
                             static_cast<double>(prm.p - prm.t), Relation::kLess,
                             thm14_gap_constant() * std::sqrt(static_cast<double>(prm.t))));
    out.push_back(make_check("prop_thm14.lambda", "lambda(H) <= (5/sqrt 6) sqrt(d)", CheckKind::kBound,
                             lambda_h, Relation::kLessEqual, 5.0 / std::sqrt(6.0) * std::sqrt(d), tol));
  }
  return out;
}

}  // namespace forge
