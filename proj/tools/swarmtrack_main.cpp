// Command line front end: single runs, batch sweeps, metric recomputation
// and ECDF data emission. Exit codes: 0 success, 1 config error, 2 I/O or
// runtime error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "swarmtrack/errors.hpp"
#include "swarmtrack/experiment.hpp"
#include "swarmtrack/logio.hpp"

namespace {

namespace fs = std::filesystem;
using namespace swarmtrack;

// --out flag > config output_dir > SWARMTRACK_OUT > ./swarmtrack_out
fs::path resolve_out_dir(const std::string& cli_out, const std::string& config_out) {
  if (!cli_out.empty()) return cli_out;
  if (!config_out.empty()) return config_out;
  if (const char* env = std::getenv("SWARMTRACK_OUT"); env && *env) return env;
  return "swarmtrack_out";
}

int cmd_run(const std::string& config_path, const std::string& out,
            const std::optional<std::uint64_t>& seed_override) {
  SimConfig config = load_sim_config_file(config_path);
  if (seed_override) config.seed = *seed_override;

  const fs::path out_dir = resolve_out_dir(out, "");
  RunLog log = run(config);
  write_run_log(log, out_dir);

  std::cout << "run complete: layout=" << log.config.layout
            << " robots=" << log.config.n_robots << " seed=" << log.config.seed << "\n"
            << "  transitions:  " << log.transitions.size() << "\n"
            << "  observations: " << log.observations.size() << "\n"
            << "  belief rows:  " << log.belief_rows.size() << "\n"
            << "  written to " << out_dir.string() << "\n";
  return 0;
}

int cmd_batch(const std::string& config_path, const std::string& out, int jobs) {
  const ExperimentConfig config = load_experiment_config_file(config_path);
  const fs::path out_dir = resolve_out_dir(out, config.output_dir);

  BatchResult result = run_batch(config, out_dir, jobs, &std::cout);
  std::cout << "batch complete: " << result.runs_executed << " runs executed, "
            << result.runs_skipped << " resumed\n"
            << summary_table(result.report)
            << "reports written to " << out_dir.string() << "\n";
  return 0;
}

int cmd_metrics(const std::string& out) {
  const fs::path out_dir = resolve_out_dir(out, "");
  MetricsReport report = recompute_metrics(out_dir);
  std::cout << summary_table(report);
  return 0;
}

int cmd_ecdf(const std::string& report_path, const std::string& out, bool force) {
  const MetricsReport report = read_report_file(report_path);
  const fs::path out_dir = resolve_out_dir(out, "");
  emit_ecdf_csv(report, out_dir, force);
  std::cout << "ecdf curves written to " << out_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swarmtrack: swarm people-tracking simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, report_path;
  std::uint64_t seed_value = 0;
  int jobs = 1;
  bool force = false;

  auto* run_cmd = app.add_subcommand("run", "execute one simulation run");
  run_cmd->add_option("--config", config_path, "sim config JSON")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed_value, "override the config seed");
  run_cmd->add_option("--out", out_dir, "output directory");

  auto* batch_cmd = app.add_subcommand("batch", "execute an experiment grid");
  batch_cmd->add_option("--config", config_path, "experiment config JSON")->required();
  batch_cmd->add_option("--out", out_dir, "output directory");
  batch_cmd->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);

  auto* metrics_cmd = app.add_subcommand("metrics", "recompute reports from persisted logs");
  metrics_cmd->add_option("--out", out_dir, "batch output directory")->required();

  auto* ecdf_cmd = app.add_subcommand("ecdf", "emit plot-ready ECDF CSV files");
  ecdf_cmd->add_option("--report", report_path, "metrics report JSON")->required();
  ecdf_cmd->add_option("--out", out_dir, "output directory");
  ecdf_cmd->add_flag("--force", force, "overwrite existing files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed()) {
      std::optional<std::uint64_t> seed_override;
      if (seed_opt->count() > 0) seed_override = seed_value;
      return cmd_run(config_path, out_dir, seed_override);
    }
    if (batch_cmd->parsed()) return cmd_batch(config_path, out_dir, jobs);
    if (metrics_cmd->parsed()) return cmd_metrics(out_dir);
    if (ecdf_cmd->parsed()) return cmd_ecdf(report_path, out_dir, force);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
