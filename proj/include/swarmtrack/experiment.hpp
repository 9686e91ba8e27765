#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "swarmtrack/logio.hpp"
#include "swarmtrack/metrics.hpp"

namespace swarmtrack {

// The run grid: layouts x swarm sizes x seeds, plus a SimConfig template.
// Per-run layout, n_robots and seed are filled in by the batch runner.
struct ExperimentConfig {
  std::vector<std::string> layouts;
  std::vector<int> swarm_sizes = {4, 8, 12};
  int runs_per_config = 5;
  std::uint64_t base_seed = 1;
  std::string output_dir;  // optional; CLI --out takes precedence
  SimConfig sim;
};

nlohmann::json experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);  // strict
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config_file(const std::filesystem::path& path);

// Per-run seed: base_seed folded with the grid indices through splitmix64
// (see mix_index). Any single run is reproducible in isolation.
std::uint64_t derive_run_seed(std::uint64_t base_seed, std::size_t layout_idx,
                              std::size_t size_idx, std::size_t run_idx);

struct BatchResult {
  std::filesystem::path output_dir;
  MetricsReport report;  // all swarm sizes, pooled across layouts and runs
  int runs_executed = 0;
  int runs_skipped = 0;
};

// Executes the grid, persisting each run under
// <output_dir>/<layout>/n<size>/run<k>/ and recording completed runs in
// manifest.json so a rerun resumes instead of recomputing. Reports are
// always aggregated from the persisted logs. `jobs` > 1 runs simulations
// concurrently; aggregation stays single-threaded.
BatchResult run_batch(const ExperimentConfig& config,
                      const std::filesystem::path& output_dir, int jobs = 1,
                      std::ostream* progress = nullptr);

// Recompute per-size reports from a batch output directory.
MetricsReport recompute_metrics(const std::filesystem::path& output_dir);

// One CSV per metric (detect, prop25, prop50, prop75) with a
// (delay_s, cum_frac) column pair per swarm size. Refuses to overwrite
// existing files unless `force`.
void emit_ecdf_csv(const MetricsReport& report, const std::filesystem::path& out_dir,
                   bool force = false);

std::string summary_table(const MetricsReport& report);

}  // namespace swarmtrack
