#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "swarmtrack/errors.hpp"
#include "swarmtrack/experiment.hpp"

using namespace swarmtrack;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("swarmtrack_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig tiny_experiment() {
  ExperimentConfig c;
  c.layouts = {"Env1"};
  c.swarm_sizes = {2};
  c.runs_per_config = 2;
  c.base_seed = 99;
  c.sim.duration = 30.0;
  return c;
}

}  // namespace

TEST_CASE("format_time_s renders exact trimmed decimals") {
  CHECK(format_time_s(0) == "0");
  CHECK(format_time_s(300000) == "0.3");
  CHECK(format_time_s(2000000) == "2");
  CHECK(format_time_s(599900000) == "599.9");
  CHECK(format_time_s(1) == "0.000001");
  CHECK(seconds_to_us(0.3) == 300000);
}

TEST_CASE("minimal experiment config fills the documented defaults") {
  const ExperimentConfig c = parse_experiment_config(R"({"layouts":["Env1"]})");
  CHECK(c.layouts == std::vector<std::string>{"Env1"});
  CHECK(c.swarm_sizes == std::vector<int>{4, 8, 12});
  CHECK(c.runs_per_config == 5);
  CHECK(c.sim.duration == 600.0);
  CHECK(c.sim.dt == 0.1);
  CHECK(c.sim.crowd.p_leave_room == 0.1);
}

TEST_CASE("config parsing rejects typos and bad values") {
  CHECK_THROWS_WITH_AS(
      parse_experiment_config(R"({"layouts":["Env1"],"sim":{"robot_sped":0.3}})"),
      doctest::Contains("robot_sped"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_experiment_config(R"({"layouts":["Env1"],"runz":3})"),
                       doctest::Contains("runz"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"layouts":["Env1"],"runs_per_config":0})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"layouts":[]})"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"swarm_sizes":[4]})"), ConfigError);
  // parse errors carry a line number
  CHECK_THROWS_WITH_AS(parse_experiment_config("{\n  \"layouts\": [,]\n}"),
                       doctest::Contains("line 2"), ConfigError);
}

TEST_CASE("derived run seeds are distinct across the full default grid") {
  std::set<std::uint64_t> seeds;
  for (std::size_t li = 0; li < 4; ++li)
    for (std::size_t si = 0; si < 3; ++si)
      for (std::size_t ri = 0; ri < 5; ++ri)
        CHECK(seeds.insert(derive_run_seed(1, li, si, ri)).second);
  CHECK(seeds.size() == 60);
  // stable function of its inputs
  CHECK(derive_run_seed(1, 2, 1, 3) == derive_run_seed(1, 2, 1, 3));
}

TEST_CASE("layouts round-trip through their JSON spec") {
  const EnvironmentMap original = build_layout("Env3");
  const EnvironmentMap copy = layout_from_json(layout_to_json(original));
  CHECK(copy.name() == original.name());
  REQUIRE(copy.locations().size() == original.locations().size());
  for (std::size_t i = 0; i < copy.locations().size(); ++i) {
    CHECK(copy.locations()[i].id == original.locations()[i].id);
    CHECK(copy.locations()[i].kind == original.locations()[i].kind);
    CHECK(copy.locations()[i].bounds.x_min == original.locations()[i].bounds.x_min);
    CHECK(copy.locations()[i].bounds.y_max == original.locations()[i].bounds.y_max);
  }
  CHECK(copy.adjacency() == original.adjacency());
}

TEST_CASE("run logs round-trip exactly through the CSV tables") {
  SimConfig c;
  c.layout = "Env2";
  c.n_robots = 3;
  c.duration = 60.0;
  c.seed = 5;
  const RunLog original = run(c);

  const fs::path dir = fresh_dir("roundtrip");
  write_run_log(original, dir);
  const RunLog loaded = read_run_log(dir);

  CHECK(loaded.transitions == original.transitions);
  CHECK(loaded.observations == original.observations);
  CHECK(loaded.belief_rows == original.belief_rows);
  CHECK(loaded.config.seed == original.config.seed);
  CHECK(loaded.config.duration == original.config.duration);
  CHECK(loaded.map.name() == original.map.name());
  fs::remove_all(dir);
}

TEST_CASE("custom layout spec files drive runs and stay embedded in the echo") {
  const fs::path dir = fresh_dir("layoutspec");
  fs::create_directories(dir);
  const fs::path spec_path = dir / "two_rooms.json";
  {
    std::ofstream out(spec_path);
    out << R"({"name":"two_rooms","locations":[
           {"id":0,"kind":"room","rect":[0,0,4,5]},
           {"id":1,"kind":"room","rect":[4,0,8,5]}],
           "doorways":[{"a":0,"b":1,"segment":[4,2,4,3]}]})";
  }
  SimConfig c;
  c.layout = spec_path.string();
  c.n_robots = 2;
  c.n_persons = 2;
  c.duration = 10.0;
  const RunLog log = run(c);
  CHECK(log.map.name() == "two_rooms");
  CHECK(!log.config.layout_spec_text.empty());

  // the persisted run dir is self-contained: reload after deleting the layout file
  const fs::path run_dir = dir / "run";
  write_run_log(log, run_dir);
  fs::remove(spec_path);
  const RunLog loaded = read_run_log(run_dir);
  CHECK(loaded.map.name() == "two_rooms");
  fs::remove_all(dir);
}

TEST_CASE("run_batch executes the grid, resumes, and reports reproducibly") {
  const ExperimentConfig config = tiny_experiment();
  const fs::path out = fresh_dir("batch");

  const BatchResult first = run_batch(config, out, 1);
  CHECK(first.runs_executed == 2);
  CHECK(first.runs_skipped == 0);
  CHECK(fs::exists(out / "Env1/n2/run0/transitions.csv"));
  CHECK(fs::exists(out / "Env1/n2/run1/beliefs.csv"));
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "report_n2.json"));

  const std::string report_bytes = slurp(out / "report_n2.json");

  // resume: nothing re-executed, identical report
  const BatchResult second = run_batch(config, out, 1);
  CHECK(second.runs_executed == 0);
  CHECK(second.runs_skipped == 2);
  CHECK(slurp(out / "report_n2.json") == report_bytes);

  // recomputation from persisted logs matches the in-process report
  const MetricsReport recomputed = recompute_metrics(out);
  CHECK(report_to_json(recomputed) == report_to_json(second.report));

  // a different grid must not silently reuse the directory
  ExperimentConfig other = config;
  other.base_seed = 100;
  CHECK_THROWS_AS(run_batch(other, out, 1), ConfigError);

  fs::remove_all(out);
}

TEST_CASE("parallel batch produces the same bytes as a serial one") {
  ExperimentConfig config = tiny_experiment();
  config.runs_per_config = 3;

  const fs::path serial = fresh_dir("batch_serial");
  const fs::path parallel = fresh_dir("batch_parallel");
  run_batch(config, serial, 1);
  run_batch(config, parallel, 3);

  CHECK(slurp(serial / "report_n2.json") == slurp(parallel / "report_n2.json"));
  CHECK(slurp(serial / "Env1/n2/run2/transitions.csv") ==
        slurp(parallel / "Env1/n2/run2/transitions.csv"));
  fs::remove_all(serial);
  fs::remove_all(parallel);
}

TEST_CASE("emit_ecdf_csv writes one file per metric and honors --force") {
  const ExperimentConfig config = tiny_experiment();
  const fs::path out = fresh_dir("ecdf");
  const BatchResult result = run_batch(config, out, 1);

  const fs::path curves = out / "curves";
  emit_ecdf_csv(result.report, curves);
  for (const char* name : {"detect.csv", "prop25.csv", "prop50.csv", "prop75.csv"}) {
    CAPTURE(name);
    CHECK(fs::exists(curves / name));
    const std::string text = slurp(curves / name);
    CHECK(text.find("delay_s_n2,cum_frac_n2") != std::string::npos);
  }

  CHECK_THROWS_WITH_AS(emit_ecdf_csv(result.report, curves), doctest::Contains("--force"),
                       ConfigError);
  emit_ecdf_csv(result.report, curves, /*force=*/true);

  // all-censored curves still produce a plateau-0 row
  MetricsReport empty_report;
  SwarmMetrics m;
  m.n_robots = 4;
  m.total_events = 2;
  m.detect.total = 2;
  empty_report.sizes.push_back(m);
  const fs::path empty_dir = out / "curves_empty";
  emit_ecdf_csv(empty_report, empty_dir);
  const std::string text = slurp(empty_dir / "detect.csv");
  CHECK(text.find("\n0,0\n") != std::string::npos);

  fs::remove_all(out);
}

TEST_CASE("summary table lists one row per swarm size") {
  const ExperimentConfig config = tiny_experiment();
  const fs::path out = fresh_dir("summary");
  const BatchResult result = run_batch(config, out, 1);
  const std::string table = summary_table(result.report);
  CHECK(table.find("size") != std::string::npos);
  CHECK(table.find("\n2 ") != std::string::npos);
  fs::remove_all(out);
}
