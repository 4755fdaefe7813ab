// forge: command-line front end.
//
//   forge lps --p P --q Q -o g.txt [--sidecar meta.json]
//   forge peel --input g.txt --target-degree D [--seed S] -o h.txt [--trace trace.json]
//   forge surgery --input h.txt --radius R [--root U] [--seed S] [--max-attempts N] -o G.txt [--result result.json]
//   forge verify --mode {thm12|thm14|freeform} --config cfg.json -o report.json [--graph-out G.txt] [--host-out H.txt]
//   forge validate report.json
//
// Exit codes: 0 success / all gating checks pass, 1 some check fails,
// 2 usage, input or stage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "forge/forge.hpp"

namespace {

void write_json(const nlohmann::json& j, const std::string& path) {
  forge::detail::write_file_atomic(path, j.dump(2) + "\n");
}

int cmd_lps(std::int64_t p, std::int64_t q, const std::string& out, const std::string& sidecar) {
  const auto params = forge::LpsParams::make(p, q);
  const forge::Graph g = forge::build_lps_graph(params);
  forge::write_graph(g, out);
  if (!sidecar.empty()) {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& gen : forge::enumerate_generators(p)) gens.push_back(gen.a);
    write_json({{"p", p},
                {"q", q},
                {"n", g.order()},
                {"degree", p + 1},
                {"i_sqrt", params.i_sqrt},
                {"generator_tuples", gens}},
               sidecar);
  }
  std::cerr << "X^{" << p << "," << q << "}: " << g.order() << " vertices, " << g.edge_count() << " edges\n";
  return 0;
}

int cmd_peel(const std::string& in, int target_degree, std::optional<std::uint64_t> seed, const std::string& out,
             const std::string& trace_path) {
  const forge::Graph g = forge::read_graph(in);
  if (target_degree < 1) throw forge::ParameterError("--target-degree must be >= 1");
  try {
    auto res = forge::peel_to_degree(g, target_degree - 1, seed);
    forge::write_graph(res.graph, out);
    const auto checks = forge::peel_trace_checks(res.trace, g.order());
    if (!trace_path.empty()) {
      nlohmann::json steps = nlohmann::json::array();
      for (const auto& s : res.trace.steps) steps.push_back(forge::peel_step_json(s));
      write_json({{"steps", steps}, {"checks", checks}, {"completed", true}}, trace_path);
    }
    return forge::all_gating_pass(checks) ? 0 : 1;
  } catch (const forge::PeelError& e) {
    if (!trace_path.empty()) {
      nlohmann::json steps = nlohmann::json::array();
      for (const auto& s : e.partial_trace().steps) steps.push_back(forge::peel_step_json(s));
      write_json({{"steps", steps}, {"completed", false}, {"error", e.what()}}, trace_path);
    }
    throw;
  }
}

int cmd_surgery(const std::string& in, int root, int radius, std::uint64_t seed, std::size_t max_attempts,
                const std::string& out, const std::string& result_path) {
  const forge::Graph h = forge::read_graph(in);
  forge::SurgeryOptions opts;
  opts.seed = seed;
  opts.max_attempts = max_attempts;
  const auto res = forge::construct(h, root, radius, opts);
  forge::write_graph(res.graph, out);
  auto checks = forge::check_surgery_structure(h, res);
  auto gb = forge::check_girth_bound(res);
  for (auto& c : gb.checks) checks.push_back(std::move(c));
  if (!result_path.empty()) {
    auto j = forge::surgery_json(res, gb.girth);
    j["checks"] = checks;
    write_json(j, result_path);
  }
  return forge::all_gating_pass(checks) ? 0 : 1;
}

int cmd_verify(const std::string& mode, const std::string& config_path, const std::string& out,
               const std::string& graph_out, const std::string& host_out) {
  std::ifstream in(config_path);
  if (!in) throw forge::Error("cannot open config " + config_path);
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw forge::ParseError(0, std::string("config is not JSON: ") + e.what());
  }
  const auto m = nlohmann::json(mode).get<forge::TheoremMode>();
  const auto outcome =
      forge::run_pipeline(cfg, m, std::filesystem::path(config_path).parent_path());
  forge::emit_report(outcome.report, out);
  if (!graph_out.empty() && outcome.graph) forge::write_graph(*outcome.graph, graph_out);
  if (!host_out.empty() && outcome.host) forge::write_graph(*outcome.host, host_out);
  const auto& rep = outcome.report;
  std::cerr << "verdict: " << rep["verdict"].get<std::string>();
  if (!rep["status"]["completed"].get<bool>()) {
    std::cerr << " (stage " << rep["status"]["failed_stage"].get<std::string>() << ": "
              << rep["status"]["error"].get<std::string>() << ")";
  }
  std::cerr << "\n";
  for (const auto& id : rep["summary"]["failed"]) std::cerr << "  failed: " << id.get<std::string>() << "\n";
  return outcome.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build LPS expanders, peel 1-factors, run tree surgery and verify spectral claims"};
  app.require_subcommand(1);

  std::int64_t p = 0, q = 0;
  std::string out, sidecar;
  auto* lps = app.add_subcommand("lps", "Build the LPS Cayley graph X^{p,q}");
  lps->add_option("--p", p, "prime p = 1 mod 4 (degree p+1)")->required();
  lps->add_option("--q", q, "prime q = 1 mod 4 with (p/q) = 1")->required();
  lps->add_option("-o,--output", out, "graph file")->required();
  lps->add_option("--sidecar", sidecar, "JSON with parameters and generator tuples");

  std::string input, trace_path;
  int target_degree = 0;
  std::optional<std::uint64_t> peel_seed;
  auto* peel = app.add_subcommand("peel", "Remove perfect matchings until the target degree is reached");
  peel->add_option("--input", input, "regular graph file")->required()->check(CLI::ExistingFile);
  peel->add_option("--target-degree", target_degree, "degree of the output graph")->required();
  peel->add_option("--seed", peel_seed, "scan-order seed (ascending order when omitted)");
  peel->add_option("-o,--output", out, "graph file")->required();
  peel->add_option("--trace", trace_path, "per-factor trace JSON");

  int root = 0, radius = 1;
  std::uint64_t seed = 0;
  std::size_t max_attempts = 1000;
  std::string result_path;
  auto* surgery = app.add_subcommand("surgery", "Replace a radius-r ball by the three-tree gadget");
  surgery->add_option("--input", input, "(d+1)-regular graph file")->required()->check(CLI::ExistingFile);
  surgery->add_option("--root", root, "ball centre");
  surgery->add_option("--radius", radius, "ball radius r")->required();
  surgery->add_option("--seed", seed, "leaf-bijection search seed");
  surgery->add_option("--max-attempts", max_attempts, "leaf-bijection attempts");
  surgery->add_option("-o,--output", out, "graph file")->required();
  surgery->add_option("--result", result_path, "gadget bookkeeping and checks JSON");

  std::string mode, config_path, graph_out, host_out;
  auto* verify = app.add_subcommand("verify", "Run the whole pipeline and write a verification report");
  verify->add_option("--mode", mode, "thm12, thm14 or freeform")
      ->required()
      ->check(CLI::IsMember({"thm12", "thm14", "freeform"}));
  verify->add_option("--config", config_path, "pipeline config JSON")->required();
  verify->add_option("-o,--output", out, "report JSON")->required();
  verify->add_option("--graph-out", graph_out, "write the surgered graph G");
  verify->add_option("--host-out", host_out, "write the seed graph H");

  std::string report_path;
  auto* validate = app.add_subcommand("validate", "Schema-check a report and recompute its verdicts");
  validate->add_option("report", report_path, "report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*lps) return cmd_lps(p, q, out, sidecar);
    if (*peel) return cmd_peel(input, target_degree, peel_seed, out, trace_path);
    if (*surgery) return cmd_surgery(input, root, radius, seed, max_attempts, out, result_path);
    if (*verify) return cmd_verify(mode, config_path, out, graph_out, host_out);
    if (*validate) {
      forge::validate_report_file(report_path);
      std::cerr << report_path << ": ok\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
