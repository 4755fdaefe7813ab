#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "forge/errors.hpp"

namespace forge {

enum class Relation { kLessEqual, kGreaterEqual, kLess, kGreater, kEqual };

// hypothesis:  a theorem's precondition on the chosen parameters
// exact:       an identity or structural fact of the construction
// bound:       a proved inequality, evaluated on this instance
// asymptotic:  a "for m sufficiently large" claim, evaluated on this instance
// certificate: advisory sufficient condition, never decides the verdict
// identity:    constant bookkeeping (e.g. b(2) = 5/sqrt(6))
enum class CheckKind { kHypothesis, kExact, kBound, kAsymptotic, kCertificate, kIdentity };

NLOHMANN_JSON_SERIALIZE_ENUM(Relation, {{Relation::kLessEqual, "<="},
                                        {Relation::kGreaterEqual, ">="},
                                        {Relation::kLess, "<"},
                                        {Relation::kGreater, ">"},
                                        {Relation::kEqual, "=="}})

NLOHMANN_JSON_SERIALIZE_ENUM(CheckKind, {{CheckKind::kHypothesis, "hypothesis"},
                                         {CheckKind::kExact, "exact"},
                                         {CheckKind::kBound, "bound"},
                                         {CheckKind::kAsymptotic, "asymptotic"},
                                         {CheckKind::kCertificate, "certificate"},
                                         {CheckKind::kIdentity, "identity"}})

// lhs == nullopt stands for +infinity (e.g. the girth of a forest).
inline bool evaluate_relation(Relation rel, std::optional<double> lhs, double rhs, double tol) {
  if (!lhs) return rel == Relation::kGreaterEqual || rel == Relation::kGreater;
  const double x = *lhs;
  if (std::isnan(x) || std::isnan(rhs)) return false;
  switch (rel) {
    case Relation::kLessEqual: return x <= rhs + tol;
    case Relation::kGreaterEqual: return x >= rhs - tol;
    case Relation::kLess: return x < rhs + tol;
    case Relation::kGreater: return x > rhs - tol;
    case Relation::kEqual: return std::abs(x - rhs) <= tol;
  }
  return false;
}

// One verified inequality with everything needed to recompute its verdict.
struct Check {
  std::string id;
  std::string claim;
  CheckKind kind = CheckKind::kBound;
  Relation relation = Relation::kLessEqual;
  std::optional<double> lhs;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool gating = true;
  std::string note;

  bool passed() const { return evaluate_relation(relation, lhs, rhs, tolerance); }
};

inline Check make_check(std::string id, std::string claim, CheckKind kind, std::optional<double> lhs,
                        Relation rel, double rhs, double tol = 0.0, bool gating = true) {
  Check c;
  c.id = std::move(id);
  c.claim = std::move(claim);
  c.kind = kind;
  c.relation = rel;
  c.lhs = lhs;
  c.rhs = rhs;
  c.tolerance = tol;
  c.gating = gating && kind != CheckKind::kCertificate;
  return c;
}

inline Check make_flag_check(std::string id, std::string claim, CheckKind kind, bool holds,
                             bool gating = true) {
  return make_check(std::move(id), std::move(claim), kind, holds ? 1.0 : 0.0, Relation::kEqual, 1.0, 0.0,
                    gating);
}

inline bool all_gating_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    if (c.gating && !c.passed()) return false;
  }
  return true;
}

inline void to_json(nlohmann::json& j, const Check& c) {
  j = nlohmann::json{{"id", c.id},
                     {"claim", c.claim},
                     {"kind", c.kind},
                     {"relation", c.relation},
                     {"lhs", c.lhs ? nlohmann::json(*c.lhs) : nlohmann::json(nullptr)},
                     {"rhs", c.rhs},
                     {"tolerance", c.tolerance},
                     {"gating", c.gating},
                     {"verdict", c.passed() ? "pass" : "fail"}};
  if (!c.note.empty()) j["note"] = c.note;
}

inline void from_json(const nlohmann::json& j, Check& c) {
  c.id = j.at("id").get<std::string>();
  c.claim = j.at("claim").get<std::string>();
  c.kind = j.at("kind").get<CheckKind>();
  c.relation = j.at("relation").get<Relation>();
  c.lhs = j.at("lhs").is_null() ? std::nullopt : std::optional<double>(j.at("lhs").get<double>());
  c.rhs = j.at("rhs").get<double>();
  c.tolerance = j.at("tolerance").get<double>();
  c.gating = j.at("gating").get<bool>();
  c.note = j.value("note", std::string());
}

}  // namespace forge
