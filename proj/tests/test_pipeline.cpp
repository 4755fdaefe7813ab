#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "forge/pipeline.hpp"
#include "oracles.hpp"

using namespace forge;

namespace {

const std::filesystem::path kSource = FORGE_SOURCE_DIR;

nlohmann::json petersen_config() {
  return {{"mode", "freeform"}, {"input_graph", (kSource / "configs" / "petersen.txt").string()},
          {"r", 1},           {"epsilon", 0.25},
          {"seed", 1}};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Pipeline, FreeformPetersen) {
  const auto out = run_pipeline(petersen_config());
  const auto& rep = out.report;
  EXPECT_EQ(rep["verdict"], "pass") << rep["summary"].dump();
  EXPECT_EQ(out.exit_code(), 0);
  EXPECT_EQ(rep["surgery"]["m"], 12);
  EXPECT_GE(rep["localization"]["count"].get<int>(), 1);
  ASSERT_TRUE(out.graph);
  EXPECT_EQ(out.graph->order(), 12u);
  EXPECT_NO_THROW(validate_report(rep));
  // The 12x12 spectrum agrees with an independent dense solve.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(adjacency_matrix(*out.graph));
  const auto es = eigensystem(*out.graph);
  EXPECT_LT((ref.eigenvalues() - es.values).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(rep["graph"]["lambda"].get<double>(), lambda_second(es, 3.0), 1e-12);
}

TEST(Pipeline, LocalizationExcludesPerronVector) {
  const auto rep = run_pipeline(petersen_config()).report;
  for (const auto& r : rep["localization"]["records"]) EXPECT_LT(r["eigenvalue"].get<double>(), 3.0 - 1e-6);
}

TEST(Pipeline, Deterministic) {
  const auto a = run_pipeline(petersen_config());
  const auto b = run_pipeline(petersen_config());
  EXPECT_EQ(report_text(canonical_report(a.report)), report_text(canonical_report(b.report)));
  EXPECT_EQ(format_graph(*a.graph), format_graph(*b.graph));
}

TEST(Pipeline, MissingInputIsStageZeroError) {
  auto cfg = petersen_config();
  cfg["input_graph"] = "/nonexistent/graph.txt";
  const auto out = run_pipeline(cfg);
  EXPECT_EQ(out.report["verdict"], "error");
  EXPECT_EQ(out.report["status"]["failed_stage"], "input");
  EXPECT_EQ(out.report["status"]["failed_stage_index"], 0);
  EXPECT_EQ(out.exit_code(), 2);
  EXPECT_NO_THROW(validate_report(out.report));
}

TEST(Pipeline, ConfigErrors) {
  auto cfg = petersen_config();
  cfg["unknown"] = 1;
  EXPECT_EQ(run_pipeline(cfg).report["status"]["failed_stage"], "input");
  cfg = petersen_config();
  cfg["epsilon"] = 1.5;
  EXPECT_THROW(parse_config(cfg), SchemaError);
  cfg = petersen_config();
  EXPECT_THROW(parse_config(cfg, TheoremMode::kThm14), ParameterError);  // mode clash
  cfg.erase("mode");
  EXPECT_THROW(parse_config(cfg, TheoremMode::kThm14), ParameterError);  // thm14 needs p, t, q, d
  EXPECT_THROW(parse_config(nlohmann::json{{"mode", "freeform"}, {"r", 1}}), ParameterError);
  const auto c = parse_config(nlohmann::json{{"mode", "thm12"}, {"p_j", 11}, {"p_j1", 13}, {"q", 17}, {"d", 12}, {"r", 1}});
  EXPECT_EQ(c.p, 13);
  EXPECT_EQ(c.epsilon, 0.25);
}

TEST(Pipeline, SurgeryStageFailureLeavesPartialReport) {
  auto cfg = petersen_config();
  cfg["r"] = 2;  // girth 5 <= 8
  const auto out = run_pipeline(cfg);
  EXPECT_EQ(out.report["status"]["failed_stage"], "surgery");
  EXPECT_TRUE(out.report.contains("seed_graph"));
  EXPECT_FALSE(out.report.contains("surgery"));
  EXPECT_NO_THROW(validate_report(out.report));
}

TEST(Report, CorruptionIsDetected) {
  const auto rep = run_pipeline(petersen_config()).report;
  auto bad = rep;
  bad["surgery"]["m"] = "twelve";
  EXPECT_THROW(validate_report(bad), SchemaError);
  bad = rep;
  bad["checks"][0]["lhs"] = "1.0";
  EXPECT_THROW(validate_report(bad), SchemaError);
  bad = rep;
  bad["checks"][0]["verdict"] = bad["checks"][0]["verdict"] == "pass" ? "fail" : "pass";
  EXPECT_THROW(validate_report(bad), SchemaError);
  bad = rep;
  bad["verdict"] = "fail";
  EXPECT_THROW(validate_report(bad), SchemaError);
  bad = rep;
  bad.erase("checks");
  EXPECT_THROW(validate_report(bad), SchemaError);
}

TEST(Report, EmitThenValidate) {
  const auto path = std::filesystem::temp_directory_path() / "forge_report_test.json";
  emit_report(run_pipeline(petersen_config()).report, path);
  EXPECT_NO_THROW(validate_report_file(path));
  std::filesystem::remove(path);
}

TEST(Report, ShippedSchemasMatchEmbedded) {
  EXPECT_EQ(nlohmann::json::parse(slurp(kSource / "schemas" / "report.schema.json")), report_schema());
  EXPECT_EQ(nlohmann::json::parse(slurp(kSource / "schemas" / "config.schema.json")), config_schema());
}

TEST(Report, ShippedConfigsValidate) {
  for (const char* name : {"freeform_petersen.json", "thm12_lps_13_17.json", "thm14_lps_13_17.json"}) {
    EXPECT_NO_THROW(parse_config(nlohmann::json::parse(slurp(kSource / "configs" / name)))) << name;
  }
}

TEST(Schema, Validator) {
  const auto schema = nlohmann::json::parse(R"({
    "type": "object", "required": ["a"], "additionalProperties": false,
    "properties": {"a": {"type": "integer", "minimum": 0}, "b": {"type": ["string", "null"]},
                   "c": {"type": "array", "items": {"$ref": "#/definitions/pos"}}},
    "definitions": {"pos": {"type": "number", "exclusiveMinimum": 0}}})");
  EXPECT_NO_THROW(validate_against(nlohmann::json{{"a", 1}, {"b", nullptr}, {"c", {1, 2.5}}}, schema));
  EXPECT_NO_THROW(validate_against(nlohmann::json{{"a", 2.0}}, schema));
  EXPECT_THROW(validate_against(nlohmann::json{{"a", 1.5}}, schema), SchemaError);
  EXPECT_THROW(validate_against(nlohmann::json{{"a", -1}}, schema), SchemaError);
  EXPECT_THROW(validate_against(nlohmann::json{{"b", "x"}}, schema), SchemaError);
  EXPECT_THROW(validate_against(nlohmann::json{{"a", 1}, {"z", 1}}, schema), SchemaError);
  EXPECT_THROW(validate_against(nlohmann::json{{"a", 1}, {"c", {0}}}, schema), SchemaError);
}
