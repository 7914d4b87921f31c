#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ensim/demos.hpp"
#include "ensim/engine.hpp"
#include "ensim/oracle.hpp"
#include "ensim/report.hpp"

namespace {

enum class LogLevel { off, info, trace };

LogLevel log_level_from_env() {
  const char* v = std::getenv("ENSIM_LOG");
  if (v == nullptr || std::string_view(v) == "off" || std::string_view(v).empty()) {
    return LogLevel::off;
  }
  if (std::string_view(v) == "info") return LogLevel::info;
  if (std::string_view(v) == "trace") return LogLevel::trace;
  std::cerr << "warning: unknown ENSIM_LOG value '" << v << "', expected off|info|trace\n";
  return LogLevel::off;
}

int write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file '" << out_path << "'\n";
    return 1;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulated exposure-notification ecosystem: devices, radio, authority, attacks"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  std::string format = "json";
  std::string demo_name;
  std::uint64_t seed = 0;
  bool verbose = false;

  CLI::App* run_cmd = app.add_subcommand("run", "simulate a scenario and report the outcome");
  run_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
  run_cmd->add_option("--seed", seed, "override the scenario's seed (recorded in the report)");
  run_cmd->add_option("--out", out_path, "write the report here instead of stdout");
  run_cmd->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  run_cmd->add_flag("--verbose", verbose, "embed the full event log in the report");

  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "print the ground-truth expectation for a scenario");
  oracle_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
  oracle_cmd->add_option("--out", out_path, "write the oracle report here instead of stdout");

  CLI::App* validate_cmd = app.add_subcommand("validate", "check a scenario file and exit");
  validate_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();

  CLI::App* demo_cmd = app.add_subcommand("demo", "run a bundled attack demonstration");
  demo_cmd->add_option("name", demo_name, "which demonstration")
      ->required()
      ->check(CLI::IsMember(ensim::demo_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // anything but --help is a usage error
  }

  LogLevel log_level = log_level_from_env();

  if (demo_cmd->parsed()) {
    return ensim::run_demo(demo_name, std::cout) ? 0 : 3;
  }

  ensim::Scenario scenario;
  try {
    scenario = ensim::load_scenario(scenario_path);
  } catch (const ensim::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (validate_cmd->parsed()) {
    std::cout << "ok: " << scenario_path << " is a valid scenario (" << scenario.devices.size()
              << " devices, " << scenario.duration_days << " days)\n";
    return 0;
  }

  if (oracle_cmd->parsed()) {
    ensim::OracleResult oracle = ensim::compute_oracle(scenario);
    if (log_level >= LogLevel::info) {
      std::cerr << "oracle: " << oracle.match_edges.size() << " match edges, "
                << oracle.expected_notifications.size() << " expected notifications\n";
    }
    return write_output(ensim::oracle_report_json(oracle), out_path);
  }

  ensim::RunOptions opts;
  if (run_cmd->count("--seed") > 0) opts.seed_override = seed;
  opts.event_log = verbose || log_level == LogLevel::trace;
  ensim::RunResult result = ensim::run_scenario(scenario, opts);
  ensim::OracleResult oracle = ensim::compute_oracle(scenario);

  if (log_level == LogLevel::trace) {
    for (const std::string& line : result.event_log) std::cerr << line << "\n";
  }
  if (log_level >= LogLevel::info) {
    std::cerr << "run: seed " << result.seed << ", " << result.notifications.size()
              << " notifications, " << result.server_batches.size() << " key batches\n";
  }
  if (!verbose) result.event_log.clear();  // keep the report independent of ENSIM_LOG

  std::string text = format == "csv" ? ensim::report_csv(result, &oracle)
                                     : ensim::report_json(result, &oracle);
  return write_output(text, out_path);
}
