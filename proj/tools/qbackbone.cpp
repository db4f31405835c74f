// Command-line entry point: runs a parameter sweep and exports the results.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbb/config.hpp"
#include "qbb/export.hpp"
#include "qbb/harness.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

using namespace qbb::harness;

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path);
  try {
    return nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", "malformed config " + path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-time simulator for satellite-serviced quantum backbones"};
  app.require_subcommand(1);

  std::string config_path, out_dir, filter, emit_text = "all", format_text = "csv";
  unsigned workers = 1;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run every scenario of a sweep config (or repeat a run from its manifest)");
  run->add_option("--config", config_path, "Config file, or manifest.json of an earlier run")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--workers", workers, "Worker threads per scenario")->check(CLI::Range(1u, 1024u));
  auto* filter_opt = run->add_option("--scenario-filter", filter, "Regex; only matching scenario ids run");
  auto* emit_opt = run->add_option("--emit", emit_text, "edges|traces|stats|all")
                       ->check(CLI::IsMember({"edges", "traces", "stats", "all"}));
  auto* format_opt = run->add_option("--format", format_text, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--quiet", quiet, "Suppress progress messages");

  auto* defaults = app.add_subcommand("defaults", "Print the default config");

  std::string check_path;
  auto* check = app.add_subcommand("check", "Validate a config and list its scenarios");
  check->add_option("config", check_path, "Config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*defaults) {
      std::cout << config_to_json(ScenarioConfig{}).dump(2) << '\n';
      return 0;
    }
    if (*check) {
      const auto cfg = load_config(check_path);
      const auto plan = enumerate_sweep(cfg);
      for (const auto& w : plan.warnings) std::cerr << "warning: " << w << '\n';
      for (const auto& s : plan.scenarios) std::cout << s.id << '\n';
      return 0;
    }

    ScenarioConfig cfg;
    Emit emit = parse_emit(emit_text);
    Format format = parse_format(format_text);
    const auto j = read_json(config_path);
    if (is_manifest(j)) {
      auto m = read_manifest(j);
      cfg = m.config;
      if (!*filter_opt) filter = m.scenario_filter;
      if (!*emit_opt) emit = m.emit;
      if (!*format_opt) format = m.format;
    } else {
      cfg = config_from_json(j, std::filesystem::absolute(config_path).parent_path());
    }

    auto plan = enumerate_sweep(cfg);
    const auto selected = filter_scenarios(plan.scenarios, filter);
    for (const auto& w : plan.warnings) std::cerr << "warning: " << w << '\n';

    ResultBundle bundle;
    bundle.config = cfg;
    bundle.scenario_filter = filter;
    bundle.warnings = plan.warnings;
    bundle.scenarios = selected;
    if (!selected.empty()) {
      const auto inputs = load_inputs(cfg);
      RunOptions opts{workers, emit == Emit::Edges || emit == Emit::All};
      for (const auto& sc : selected) {
        if (!quiet) std::cerr << "[" << sc.index + 1 << "/" << plan.scenarios.size() << "] " << sc.id << '\n';
        bundle.results.push_back(run_scenario(cfg, inputs, sc, opts));
      }
    }
    const auto files = export_results(bundle, out_dir, emit, format);
    if (!quiet) std::cerr << "wrote " << files.size() << " file(s) to " << out_dir << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ScenarioFailure& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
