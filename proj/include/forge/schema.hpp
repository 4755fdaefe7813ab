#pragma once

// Minimal JSON-Schema (draft-07 subset) validation for the config and report
// documents: type, enum, required, properties, additionalProperties, items,
// minimum/maximum, exclusiveMinimum/exclusiveMaximum and local $ref.
// The schema texts below are also shipped under schemas/.

#include <cmath>
#include <string>
#include <string_view>

#include "json.hpp"

#include "forge/errors.hpp"

namespace forge {

inline constexpr std::string_view kConfigSchema = R"json({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "forge pipeline config",
  "type": "object",
  "additionalProperties": false,
  "required": ["r"],
  "properties": {
    "mode": {"type": "string", "enum": ["thm12", "thm14", "freeform"]},
    "p": {"type": "integer", "minimum": 2},
    "q": {"type": "integer", "minimum": 2},
    "t": {"type": "integer", "minimum": 2},
    "p_j": {"type": "integer", "minimum": 2},
    "p_j1": {"type": "integer", "minimum": 2},
    "d": {"type": "integer", "minimum": 1},
    "r": {"type": "integer", "minimum": 1},
    "root": {"type": "integer", "minimum": 0},
    "epsilon": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
    "beta": {"type": "number", "exclusiveMinimum": 0},
    "alpha": {"type": "number"},
    "seed": {"type": "integer", "minimum": 0},
    "max_attempts": {"type": "integer", "minimum": 1},
    "input_graph": {"type": "string"}
  }
}
)json";

inline constexpr std::string_view kReportSchema = R"json({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "forge verification report",
  "type": "object",
  "required": ["schema", "mode", "config", "status", "checks", "summary", "verdict"],
  "properties": {
    "schema": {"type": "string", "enum": ["forge.report/1"]},
    "mode": {"type": "string", "enum": ["thm12", "thm14", "freeform"]},
    "config": {"type": "object"},
    "status": {
      "type": "object",
      "required": ["completed", "failed_stage", "error"],
      "properties": {
        "completed": {"type": "boolean"},
        "failed_stage": {"type": ["string", "null"]},
        "error": {"type": ["string", "null"]}
      }
    },
    "gates": {"type": "object", "required": ["alpha", "alpha_source"]},
    "host": {
      "type": "object",
      "required": ["source", "n", "degree", "girth", "lambda"],
      "properties": {
        "source": {"type": "string", "enum": ["lps", "file"]},
        "n": {"type": "integer", "minimum": 0},
        "degree": {"type": "integer", "minimum": 0},
        "girth": {"type": ["integer", "null"]},
        "lambda": {"type": "number"}
      }
    },
    "peel": {
      "type": "object",
      "required": ["steps"],
      "properties": {
        "steps": {
          "type": "array",
          "items": {
            "type": "object",
            "required": ["degree_before", "matching_size", "lambda_before", "lambda_after",
                         "lambda3_before", "lambda3_after", "threshold", "certificate_ok"],
            "properties": {
              "degree_before": {"type": "integer", "minimum": 1},
              "matching_size": {"type": "integer", "minimum": 0},
              "lambda_before": {"type": "number"},
              "lambda_after": {"type": "number"},
              "lambda3_before": {"type": "number"},
              "lambda3_after": {"type": "number"},
              "threshold": {"type": ["number", "null"]},
              "certificate_ok": {"type": "boolean"}
            }
          }
        }
      }
    },
    "seed_graph": {
      "type": "object",
      "required": ["n", "degree", "girth", "lambda", "lambda3"]
    },
    "surgery": {
      "type": "object",
      "required": ["root", "radius", "d", "n", "m", "alpha_effective", "L1", "L2", "V1", "M",
                   "T1", "T2", "T3", "S", "pairing_search"],
      "properties": {
        "root": {"type": "integer", "minimum": 0},
        "radius": {"type": "integer", "minimum": 1},
        "d": {"type": "integer", "minimum": 2},
        "n": {"type": "integer", "minimum": 1},
        "m": {"type": "integer", "minimum": 1},
        "alpha_effective": {"type": "number"},
        "L1": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "L2": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "V1": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "M": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
        "T1": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "T2": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "T3": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "S": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "pairing_search": {
          "type": "object",
          "required": ["attempts", "max_attempts", "target", "best_girth", "seed"]
        }
      }
    },
    "graph": {
      "type": "object",
      "required": ["m", "degree", "girth", "lambda", "b_d"],
      "properties": {
        "m": {"type": "integer", "minimum": 1},
        "degree": {"type": "integer", "minimum": 1},
        "girth": {"type": ["integer", "null"]},
        "lambda": {"type": "number"},
        "b_d": {"type": "number"}
      }
    },
    "spectral": {"type": "object"},
    "localization": {
      "type": "object",
      "required": ["S_size", "epsilon", "records", "count", "target", "strict_threshold", "strict_count"],
      "properties": {
        "S_size": {"type": "integer", "minimum": 1},
        "epsilon": {"type": "number"},
        "count": {"type": "integer", "minimum": 0},
        "target": {"type": "integer", "minimum": 0},
        "strict_threshold": {"type": "number"},
        "strict_count": {"type": "integer", "minimum": 0},
        "records": {
          "type": "array",
          "items": {
            "type": "object",
            "required": ["eigenvalue", "eigenspace_dim", "mass", "nearest_tree_eigenvalue", "gs_rhs"],
            "properties": {
              "eigenvalue": {"type": "number"},
              "eigenspace_dim": {"type": "integer", "minimum": 1},
              "mass": {"type": "number", "minimum": 0, "maximum": 1},
              "nearest_tree_eigenvalue": {"type": "number"},
              "gs_rhs": {"type": "number"}
            }
          }
        }
      }
    },
    "checks": {"type": "array", "items": {"$ref": "#/definitions/check"}},
    "summary": {
      "type": "object",
      "required": ["total", "gating", "failed"],
      "properties": {
        "total": {"type": "integer", "minimum": 0},
        "gating": {"type": "integer", "minimum": 0},
        "failed": {"type": "array", "items": {"type": "string"}}
      }
    },
    "verdict": {"type": "string", "enum": ["pass", "fail", "error"]},
    "timings": {"type": "object"}
  },
  "definitions": {
    "check": {
      "type": "object",
      "additionalProperties": false,
      "required": ["id", "claim", "kind", "relation", "lhs", "rhs", "tolerance", "gating", "verdict"],
      "properties": {
        "id": {"type": "string"},
        "claim": {"type": "string"},
        "kind": {"type": "string",
                 "enum": ["hypothesis", "exact", "bound", "asymptotic", "certificate", "identity"]},
        "relation": {"type": "string", "enum": ["<=", ">=", "<", ">", "=="]},
        "lhs": {"type": ["number", "null"]},
        "rhs": {"type": "number"},
        "tolerance": {"type": "number", "minimum": 0},
        "gating": {"type": "boolean"},
        "verdict": {"type": "string", "enum": ["pass", "fail"]},
        "note": {"type": "string"}
      }
    }
  }
}
)json";

namespace detail {

inline bool matches_type(const nlohmann::json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "number") return v.is_number();
  if (type == "integer") {
    if (v.is_number_integer()) return true;
    if (v.is_number_float()) {
      double x = v.get<double>();
      return std::isfinite(x) && std::floor(x) == x;
    }
    return false;
  }
  throw SchemaError("unsupported schema type '" + type + "'");
}

inline const nlohmann::json& resolve_ref(const nlohmann::json& root, const std::string& ref) {
  if (ref.rfind("#/", 0) != 0) throw SchemaError("only local $ref supported: " + ref);
  return root.at(nlohmann::json::json_pointer(ref.substr(1)));
}

inline void validate_node(const nlohmann::json& v, const nlohmann::json& schema, const nlohmann::json& root,
                          const std::string& where) {
  if (schema.contains("$ref")) {
    validate_node(v, resolve_ref(root, schema["$ref"].get<std::string>()), root, where);
    return;
  }
  auto fail = [&](const std::string& why) { throw SchemaError(where + ": " + why); };
  if (schema.contains("type")) {
    const auto& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = matches_type(v, t.get<std::string>());
    } else {
      for (const auto& alt : t) ok = ok || matches_type(v, alt.get<std::string>());
    }
    if (!ok) fail("expected type " + t.dump() + ", got " + std::string(v.type_name()));
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema["enum"]) found = found || e == v;
    if (!found) fail("value " + v.dump() + " not in " + schema["enum"].dump());
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (schema.contains("minimum") && x < schema["minimum"].get<double>()) fail("below minimum");
    if (schema.contains("maximum") && x > schema["maximum"].get<double>()) fail("above maximum");
    if (schema.contains("exclusiveMinimum") && x <= schema["exclusiveMinimum"].get<double>()) fail("not above exclusiveMinimum");
    if (schema.contains("exclusiveMaximum") && x >= schema["exclusiveMaximum"].get<double>()) fail("not below exclusiveMaximum");
  }
  if (v.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!v.contains(key.get<std::string>())) fail("missing required field '" + key.get<std::string>() + "'");
      }
    }
    const nlohmann::json props = schema.value("properties", nlohmann::json::object());
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (props.contains(it.key())) {
        validate_node(it.value(), props[it.key()], root, where + "/" + it.key());
      } else if (schema.contains("additionalProperties")) {
        const auto& extra = schema["additionalProperties"];
        if (extra.is_boolean()) {
          if (!extra.get<bool>()) fail("unexpected field '" + it.key() + "'");
        } else {
          validate_node(it.value(), extra, root, where + "/" + it.key());
        }
      }
    }
  }
  if (v.is_array() && schema.contains("items")) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      validate_node(v[i], schema["items"], root, where + "/" + std::to_string(i));
    }
  }
}

}  // namespace detail

// Throws SchemaError naming the first offending JSON path.
inline void validate_against(const nlohmann::json& instance, const nlohmann::json& schema) {
  detail::validate_node(instance, schema, schema, "");
}

inline const nlohmann::json& config_schema() {
  static const nlohmann::json s = nlohmann::json::parse(kConfigSchema);
  return s;
}

inline const nlohmann::json& report_schema() {
  static const nlohmann::json s = nlohmann::json::parse(kReportSchema);
  return s;
}

}  // namespace forge
