#include "swarmtrack/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "swarmtrack/errors.hpp"

namespace swarmtrack {

namespace {

using nlohmann::json;

struct RunTask {
  std::size_t layout_idx;
  std::size_t size_idx;
  std::size_t run_idx;
  std::string key;  // "<layout>/n<size>/run<k>"
  std::uint64_t seed;
};

std::string run_key(const std::string& layout, int size, std::size_t run_idx) {
  return layout + "/n" + std::to_string(size) + "/run" + std::to_string(run_idx);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

json load_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    return {{"schema_version", kSchemaVersion}, {"completed", json::object()}};
  return read_json_file(path);
}

void store_manifest(const json& manifest, const std::filesystem::path& path) {
  write_text(path, manifest.dump(2) + "\n");
}

bool run_dir_complete(const std::filesystem::path& dir) {
  for (const char* name : {"transitions.csv", "observations.csv", "beliefs.csv", "config.json"})
    if (!std::filesystem::exists(dir / name)) return false;
  return true;
}

void validate(const ExperimentConfig& config) {
  if (config.layouts.empty()) throw ConfigError("experiment config: layouts must be non-empty");
  if (config.swarm_sizes.empty())
    throw ConfigError("experiment config: swarm_sizes must be non-empty");
  if (config.runs_per_config < 1)
    throw ConfigError("experiment config: runs_per_config must be at least 1");
  for (int size : config.swarm_sizes)
    if (size < 1) throw ConfigError("experiment config: swarm sizes must be at least 1");
}

}  // namespace

json experiment_config_to_json(const ExperimentConfig& config) {
  json sim = sim_config_to_json(config.sim);
  sim.erase("schema_version");
  return {{"schema_version", kSchemaVersion},
          {"layouts", config.layouts},
          {"swarm_sizes", config.swarm_sizes},
          {"runs_per_config", config.runs_per_config},
          {"base_seed", config.base_seed},
          {"output_dir", config.output_dir},
          {"sim", sim}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  for (const auto& [key, value] : j.items()) {
    static const std::set<std::string> allowed = {
        "schema_version", "layouts", "swarm_sizes", "runs_per_config",
        "base_seed",      "output_dir", "sim"};
    if (!allowed.count(key))
      throw ConfigError("experiment config: unknown key '" + key + "'");
  }
  ExperimentConfig c;
  if (!j.contains("layouts"))
    throw ConfigError("experiment config: 'layouts' is required");
  c.layouts = j.at("layouts").get<std::vector<std::string>>();
  if (j.contains("swarm_sizes"))
    c.swarm_sizes = j.at("swarm_sizes").get<std::vector<int>>();
  if (j.contains("runs_per_config")) c.runs_per_config = j.at("runs_per_config").get<int>();
  if (j.contains("base_seed")) c.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("sim")) c.sim = sim_config_from_json(j.at("sim"));
  validate(c);
  return c;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  return experiment_config_from_json(parse_json_text(text, "experiment config"));
}

ExperimentConfig load_experiment_config_file(const std::filesystem::path& path) {
  return experiment_config_from_json(read_json_file(path));
}

std::uint64_t derive_run_seed(std::uint64_t base_seed, std::size_t layout_idx,
                              std::size_t size_idx, std::size_t run_idx) {
  std::uint64_t s = mix_index(base_seed, layout_idx);
  s = mix_index(s, size_idx);
  return mix_index(s, run_idx);
}

BatchResult run_batch(const ExperimentConfig& config,
                      const std::filesystem::path& output_dir, int jobs,
                      std::ostream* progress) {
  validate(config);
  if (jobs < 1) jobs = 1;

  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create " + output_dir.string() + ": " + ec.message());

  // Guard resumes against a changed grid: the echo written on the first
  // invocation must match future ones byte for byte.
  const std::string echo = experiment_config_to_json(config).dump(2) + "\n";
  const auto echo_path = output_dir / "experiment.json";
  if (std::filesystem::exists(echo_path)) {
    std::ifstream in(echo_path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (buf.str() != echo)
      throw ConfigError("output dir " + output_dir.string() +
                        " was produced by a different experiment config; use a fresh directory");
  } else {
    write_text(echo_path, echo);
  }

  std::vector<RunTask> tasks;
  std::set<std::uint64_t> seeds_seen;
  for (std::size_t li = 0; li < config.layouts.size(); ++li)
    for (std::size_t si = 0; si < config.swarm_sizes.size(); ++si)
      for (std::size_t ri = 0; ri < static_cast<std::size_t>(config.runs_per_config); ++ri) {
        RunTask task;
        task.layout_idx = li;
        task.size_idx = si;
        task.run_idx = ri;
        task.key = run_key(config.layouts[li], config.swarm_sizes[si], ri);
        task.seed = derive_run_seed(config.base_seed, li, si, ri);
        if (!seeds_seen.insert(task.seed).second)
          throw ConfigError("derived run seeds collide; change base_seed");
        tasks.push_back(std::move(task));
      }

  const auto manifest_path = output_dir / "manifest.json";
  json manifest = load_manifest(manifest_path);

  std::mutex mu;  // guards manifest, progress stream, counters
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  int executed = 0;
  int skipped = 0;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const RunTask& task = tasks[i];
      const auto run_dir = output_dir / task.key;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (failure) return;
        if (manifest.at("completed").contains(task.key) && run_dir_complete(run_dir)) {
          ++skipped;
          if (progress) *progress << "skip  " << task.key << "\n";
          continue;
        }
      }
      try {
        SimConfig sim = config.sim;
        sim.layout = config.layouts[task.layout_idx];
        sim.n_robots = config.swarm_sizes[task.size_idx];
        sim.seed = task.seed;
        RunLog log = run(sim);
        write_run_log(log, run_dir);
        std::lock_guard<std::mutex> lock(mu);
        manifest["completed"][task.key] = task.seed;
        store_manifest(manifest, manifest_path);
        ++executed;
        if (progress) *progress << "done  " << task.key << "\n";
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Aggregate from the persisted logs so fresh and resumed batches take the
  // same path and produce identical reports.
  BatchResult result;
  result.output_dir = output_dir;
  result.runs_executed = executed;
  result.runs_skipped = skipped;

  std::vector<MetricsReport> per_size;
  for (std::size_t si = 0; si < config.swarm_sizes.size(); ++si) {
    const int size = config.swarm_sizes[si];
    std::vector<RunLog> logs;
    for (std::size_t li = 0; li < config.layouts.size(); ++li)
      for (std::size_t ri = 0; ri < static_cast<std::size_t>(config.runs_per_config); ++ri)
        logs.push_back(read_run_log(output_dir / run_key(config.layouts[li], size, ri)));
    MetricsReport report = aggregate(logs, size);
    write_report_file(report, output_dir / ("report_n" + std::to_string(size) + ".json"));
    per_size.push_back(std::move(report));
  }
  result.report = merge_reports(per_size);
  return result;
}

MetricsReport recompute_metrics(const std::filesystem::path& output_dir) {
  const ExperimentConfig config =
      experiment_config_from_json(read_json_file(output_dir / "experiment.json"));

  std::vector<MetricsReport> per_size;
  for (int size : config.swarm_sizes) {
    std::vector<RunLog> logs;
    for (const std::string& layout : config.layouts)
      for (std::size_t ri = 0; ri < static_cast<std::size_t>(config.runs_per_config); ++ri) {
        const auto dir = output_dir / run_key(layout, size, ri);
        if (!run_dir_complete(dir))
          throw ConfigError("run " + run_key(layout, size, ri) +
                            " is incomplete; finish the batch before recomputing metrics");
        logs.push_back(read_run_log(dir));
      }
    MetricsReport report = aggregate(logs, size);
    write_report_file(report, output_dir / ("report_n" + std::to_string(size) + ".json"));
    per_size.push_back(std::move(report));
  }
  return merge_reports(per_size);
}

namespace {

void append_curve_columns(std::vector<std::string>& rows, const EcdfCurve& curve,
                          std::size_t row_count) {
  // An empty curve (no events or all censored) contributes a single 0,0 row.
  std::vector<std::string> cells;
  if (curve.points.empty()) {
    cells.push_back("0,0");
  } else {
    for (const auto& [delay_us, frac] : curve.points) {
      char buf[48];
      std::snprintf(buf, sizeof buf, "%.10g", frac);
      cells.push_back(format_time_s(delay_us) + "," + buf);
    }
  }
  for (std::size_t i = 0; i < row_count; ++i) {
    rows[i] += rows[i].empty() ? "" : ",";
    rows[i] += i < cells.size() ? cells[i] : ",";
  }
}

}  // namespace

void emit_ecdf_csv(const MetricsReport& report, const std::filesystem::path& out_dir,
                   bool force) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  struct Metric {
    const char* file;
    const EcdfCurve& (*get)(const SwarmMetrics&);
  };
  const Metric metrics[] = {
      {"detect.csv", [](const SwarmMetrics& m) -> const EcdfCurve& { return m.detect; }},
      {"prop25.csv", [](const SwarmMetrics& m) -> const EcdfCurve& { return m.prop25; }},
      {"prop50.csv", [](const SwarmMetrics& m) -> const EcdfCurve& { return m.prop50; }},
      {"prop75.csv", [](const SwarmMetrics& m) -> const EcdfCurve& { return m.prop75; }},
  };

  for (const Metric& metric : metrics) {
    const auto path = out_dir / metric.file;
    if (!force && std::filesystem::exists(path))
      throw ConfigError("refusing to overwrite " + path.string() + "; pass --force");

    std::size_t row_count = 1;
    for (const SwarmMetrics& m : report.sizes)
      row_count = std::max(row_count, metric.get(m).points.size());

    std::string header;
    for (const SwarmMetrics& m : report.sizes) {
      if (!header.empty()) header += ",";
      header += "delay_s_n" + std::to_string(m.n_robots) + ",cum_frac_n" +
                std::to_string(m.n_robots);
    }

    std::vector<std::string> rows(row_count);
    for (const SwarmMetrics& m : report.sizes)
      append_curve_columns(rows, metric.get(m), row_count);

    std::string out = "# schema_version=" + std::to_string(kSchemaVersion) +
                      "; delays in seconds, fractions of all events\n";
    out += header + "\n";
    for (const std::string& row : rows) out += row + "\n";
    write_text(path, out);
  }
}

std::string summary_table(const MetricsReport& report) {
  auto fmt_median = [](const std::optional<double>& v) -> std::string {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *v);
    return buf;
  };

  std::ostringstream os;
  char line[200];
  std::snprintf(line, sizeof line, "%-6s %-7s %-9s %-6s %-8s %-8s %-8s %-12s %-12s %s\n",
                "size", "events", "detected", "rate", "reach25", "reach50", "reach75",
                "med_detect_s", "med_prop50_s", "censored");
  os << line;
  for (const SwarmMetrics& m : report.sizes) {
    std::snprintf(line, sizeof line,
                  "%-6d %-7ld %-9ld %-6.3f %-8.3f %-8.3f %-8.3f %-12s %-12s %ld\n",
                  m.n_robots, m.total_events, m.detected, m.detection_rate,
                  m.reach_rate_25, m.reach_rate_50, m.reach_rate_75,
                  fmt_median(m.median_detect_s).c_str(),
                  fmt_median(m.median_prop_50_s).c_str(), m.total_events - m.detected);
    os << line;
  }
  return os.str();
}

}  // namespace swarmtrack
