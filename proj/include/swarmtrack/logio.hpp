#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "swarmtrack/engine.hpp"
#include "swarmtrack/metrics.hpp"

namespace swarmtrack {

inline constexpr int kSchemaVersion = 1;

// Parse with line/column diagnostics; `origin` names the source in errors.
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);
nlohmann::json read_json_file(const std::filesystem::path& path);

// Layout spec files: { schema_version, name, locations: [{id, kind, rect}],
// doorways: [{a, b, segment}] }. rect and segment are [x0, y0, x1, y1].
nlohmann::json layout_to_json(const EnvironmentMap& map);
EnvironmentMap layout_from_json(const nlohmann::json& spec);
EnvironmentMap load_layout_file(const std::filesystem::path& path);

// Resolves config.layout (builtin name or spec path) to a map. When the
// layout comes from a file, its JSON is embedded into the config so the
// run's echo is self-contained.
EnvironmentMap resolve_layout(SimConfig& config);

nlohmann::json sim_config_to_json(const SimConfig& config);
SimConfig sim_config_from_json(const nlohmann::json& j);  // strict: unknown keys error
SimConfig load_sim_config_file(const std::filesystem::path& path);

// Run logs persist as three CSV tables plus a config echo:
//   transitions.csv:  t,person_id,from_location,to_location
//   observations.csv: t,robot_id,person_id,location
//   beliefs.csv:      t,robot_id,person_id,location,timestamp,observer
//   config.json:      the SimConfig echo (with any layout spec inlined)
// Times are seconds as exact decimals; files start with "# schema_version=1".
void write_run_log(const RunLog& log, const std::filesystem::path& dir);
RunLog read_run_log(const std::filesystem::path& dir);

nlohmann::json report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::json& j);
void write_report_file(const MetricsReport& report, const std::filesystem::path& path);
MetricsReport read_report_file(const std::filesystem::path& path);

}  // namespace swarmtrack
