#pragma once

// Arithmetic hypotheses of the two main existence theorems, evaluated on
// concrete parameters before any graph is built.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "forge/check.hpp"
#include "forge/errors.hpp"
#include "forge/lps.hpp"

namespace forge {

struct GateResult {
  std::vector<Check> checks;
  bool pass() const { return all_gating_pass(checks); }
};

namespace detail {

inline void alpha_range_checks(std::vector<Check>& out, const std::string& tag, double alpha) {
  out.push_back(make_check(tag + ".alpha_positive", "alpha > 0", CheckKind::kHypothesis, alpha,
                           Relation::kGreater, 0.0));
  out.push_back(make_check(tag + ".alpha_below_sixth", "alpha < 1/6", CheckKind::kHypothesis, alpha,
                           Relation::kLess, 1.0 / 6.0));
}

inline bool consecutive_primes(std::int64_t a, std::int64_t b) {
  return is_prime(a) && is_prime(b) && a < b && next_prime(a) == b;
}

}  // namespace detail

// log(p_j)/log(p_{j+1}) threshold for d >= 29: log 29 / (6 log 31).
inline double thm12_alpha_cap_29() { return std::log(29.0) / (6.0 * std::log(31.0)); }

inline GateResult gate_thm12(int d, std::int64_t p_j, std::int64_t p_j1, double alpha) {
  if (!detail::consecutive_primes(p_j, p_j1)) {
    throw ParameterError("gate_thm12: " + std::to_string(p_j) + " and " + std::to_string(p_j1) +
                         " are not consecutive primes");
  }
  if (d < p_j || d > p_j1) {
    throw ParameterError("gate_thm12: d=" + std::to_string(d) + " outside [" + std::to_string(p_j) + ", " +
                         std::to_string(p_j1) + "]");
  }
  GateResult g;
  detail::alpha_range_checks(g.checks, "thm12", alpha);
  g.checks.push_back(make_check("thm12.log_ratio", "log(p_j) / log(p_{j+1}) > 6 alpha", CheckKind::kHypothesis,
                                std::log(static_cast<double>(p_j)) / std::log(static_cast<double>(p_j1)),
                                Relation::kGreater, 6.0 * alpha));
  g.checks.push_back(make_check("thm12.prime_gap", "p_{j+1} - p_j < p_j / 5", CheckKind::kHypothesis,
                                static_cast<double>(p_j1 - p_j), Relation::kLess, static_cast<double>(p_j) / 5.0));
  if (d >= 29) {
    auto c = make_check("thm12.alpha_cap_29", "alpha < log(29) / (6 log 31)", CheckKind::kHypothesis, alpha,
                        Relation::kLess, thm12_alpha_cap_29(), 0.0, false);
    c.note = "uniform range for every d >= 29; recorded only";
    g.checks.push_back(std::move(c));
  }
  return g;
}

inline GateResult gate_thm14(int d, std::int64_t t, std::int64_t p, double alpha) {
  if (!is_prime(p) || p == 2) throw ParameterError("gate_thm14: p=" + std::to_string(p) + " is not an odd prime");
  if (t < 2 || t > p) throw ParameterError("gate_thm14: t=" + std::to_string(t) + " outside [2, p]");
  if (d < t || d > p) {
    throw ParameterError("gate_thm14: d=" + std::to_string(d) + " outside [" + std::to_string(t) + ", " +
                         std::to_string(p) + "]");
  }
  GateResult g;
  detail::alpha_range_checks(g.checks, "thm14", alpha);
  g.checks.push_back(make_check("thm14.gap", "p - t < (5/(2 sqrt 6) - 1) sqrt(t)", CheckKind::kHypothesis,
                                static_cast<double>(p - t), Relation::kLess,
                                (5.0 / (2.0 * std::sqrt(6.0)) - 1.0) * std::sqrt(static_cast<double>(t))));
  g.checks.push_back(make_check("thm14.log_ratio", "log(t) / log(p) > 6 alpha", CheckKind::kHypothesis,
                                std::log(static_cast<double>(t)) / std::log(static_cast<double>(p)),
                                Relation::kGreater, 6.0 * alpha));
  return g;
}

}  // namespace forge
