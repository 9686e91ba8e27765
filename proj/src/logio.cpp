#include "swarmtrack/logio.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "swarmtrack/errors.hpp"

namespace swarmtrack {

namespace {

using nlohmann::json;

std::size_t line_of_offset(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

// Rejects keys outside `allowed`; typos in config files must not pass silently.
void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known) throw ConfigError(context + ": unknown key '" + key + "'");
  }
}

double as_number(const json& j, const char* key, const std::string& context) {
  if (!j.at(key).is_number())
    throw ConfigError(context + ": '" + std::string(key) + "' must be a number");
  return j.at(key).get<double>();
}

TimeUs parse_time_field(const std::string& field, const std::string& context) {
  char* end = nullptr;
  const double seconds = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0')
    throw IoError(context + ": bad time value '" + field + "'");
  return seconds_to_us(seconds);
}

long parse_int_field(const std::string& field, const std::string& context) {
  char* end = nullptr;
  const long v = std::strtol(field.c_str(), &end, 10);
  if (end == field.c_str() || *end != '\0')
    throw IoError(context + ": bad integer '" + field + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Returns data rows (comment and header lines stripped), validating the header.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::string& expected_header) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != expected_header)
        throw IoError(path.string() + ": unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    rows.push_back(split_csv_line(line));
  }
  if (!header_seen) throw IoError(path.string() + ": missing header");
  return rows;
}

std::string csv_preamble() {
  return "# schema_version=" + std::to_string(kSchemaVersion) + "\n";
}

}  // namespace

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": parse error at line " +
                      std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  return parse_json_text(read_text_file(path), path.string());
}

json layout_to_json(const EnvironmentMap& map) {
  json locations = json::array();
  for (const Location& loc : map.locations()) {
    locations.push_back({{"id", loc.id},
                         {"kind", to_string(loc.kind)},
                         {"rect", {loc.bounds.x_min, loc.bounds.y_min,
                                   loc.bounds.x_max, loc.bounds.y_max}}});
  }
  json doorways = json::array();
  for (const Doorway& d : map.doorways()) {
    doorways.push_back({{"a", d.loc_a},
                        {"b", d.loc_b},
                        {"segment", {d.seg_a.x, d.seg_a.y, d.seg_b.x, d.seg_b.y}}});
  }
  return {{"schema_version", kSchemaVersion},
          {"name", map.name()},
          {"locations", locations},
          {"doorways", doorways}};
}

EnvironmentMap layout_from_json(const json& spec) {
  check_keys(spec, {"schema_version", "name", "locations", "doorways"}, "layout spec");
  const std::string name = spec.value("name", "custom");

  std::vector<Location> locations;
  for (const json& entry : spec.at("locations")) {
    check_keys(entry, {"id", "kind", "rect"}, "layout location");
    Location loc;
    loc.id = entry.at("id").get<int>();
    const std::string kind = entry.at("kind").get<std::string>();
    if (kind == "room")
      loc.kind = LocationKind::Room;
    else if (kind == "corridor")
      loc.kind = LocationKind::Corridor;
    else
      throw ConfigError("location " + std::to_string(loc.id) +
                        ": kind must be 'room' or 'corridor', got '" + kind + "'");
    const json& rect = entry.at("rect");
    if (!rect.is_array() || rect.size() != 4)
      throw ConfigError("location " + std::to_string(loc.id) +
                        ": rect must be [x_min, y_min, x_max, y_max]");
    loc.bounds = Rect{rect[0].get<double>(), rect[1].get<double>(),
                      rect[2].get<double>(), rect[3].get<double>()};
    locations.push_back(loc);
  }

  std::vector<Doorway> doorways;
  if (spec.contains("doorways")) {
    for (const json& entry : spec.at("doorways")) {
      check_keys(entry, {"a", "b", "segment"}, "layout doorway");
      Doorway d;
      d.loc_a = entry.at("a").get<int>();
      d.loc_b = entry.at("b").get<int>();
      const json& seg = entry.at("segment");
      if (!seg.is_array() || seg.size() != 4)
        throw ConfigError("doorway " + std::to_string(doorways.size()) +
                          ": segment must be [x0, y0, x1, y1]");
      d.seg_a = Vec2{seg[0].get<double>(), seg[1].get<double>()};
      d.seg_b = Vec2{seg[2].get<double>(), seg[3].get<double>()};
      doorways.push_back(d);
    }
  }
  return EnvironmentMap(name, std::move(locations), std::move(doorways));
}

EnvironmentMap load_layout_file(const std::filesystem::path& path) {
  return layout_from_json(read_json_file(path));
}

EnvironmentMap resolve_layout(SimConfig& config) {
  if (!config.layout_spec_text.empty())
    return layout_from_json(parse_json_text(config.layout_spec_text, "embedded layout spec"));
  if (is_builtin_layout(config.layout)) return build_layout(config.layout);
  if (!std::filesystem::exists(config.layout))
    throw ConfigError("layout '" + config.layout +
                      "' is neither a builtin name nor an existing spec file");
  const json spec = read_json_file(config.layout);
  config.layout_spec_text = spec.dump();
  return layout_from_json(spec);
}

json sim_config_to_json(const SimConfig& config) {
  json j = {
      {"schema_version", kSchemaVersion},
      {"layout", config.layout},
      {"n_robots", config.n_robots},
      {"n_persons", config.n_persons},
      {"duration", config.duration},
      {"dt", config.dt},
      {"seed", config.seed},
      {"snapshot_period", config.snapshot_period},
      {"robot_speed", config.robot_speed},
      {"crowd",
       {{"check_interval", config.crowd.check_interval},
        {"p_leave_room", config.crowd.p_leave_room},
        {"p_leave_corridor", config.crowd.p_leave_corridor}}},
      {"sensing",
       {{"detect_radius", config.sensing.detect_radius},
        {"sense_period", config.sensing.sense_period},
        {"p_detect", config.sensing.p_detect}}},
      {"comm", {{"comm_radius", config.comm.comm_radius}}},
  };
  if (!config.layout_spec_text.empty())
    j["layout_spec"] = parse_json_text(config.layout_spec_text, "embedded layout spec");
  return j;
}

SimConfig sim_config_from_json(const json& j) {
  check_keys(j,
             {"schema_version", "layout", "layout_spec", "n_robots", "n_persons",
              "duration", "dt", "seed", "snapshot_period", "robot_speed", "crowd",
              "sensing", "comm"},
             "sim config");
  SimConfig c;
  if (j.contains("layout")) c.layout = j.at("layout").get<std::string>();
  if (j.contains("layout_spec")) c.layout_spec_text = j.at("layout_spec").dump();
  if (j.contains("n_robots")) c.n_robots = j.at("n_robots").get<int>();
  if (j.contains("n_persons")) c.n_persons = j.at("n_persons").get<int>();
  if (j.contains("duration")) c.duration = as_number(j, "duration", "sim config");
  if (j.contains("dt")) c.dt = as_number(j, "dt", "sim config");
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("snapshot_period"))
    c.snapshot_period = as_number(j, "snapshot_period", "sim config");
  if (j.contains("robot_speed")) c.robot_speed = as_number(j, "robot_speed", "sim config");
  if (j.contains("crowd")) {
    const json& crowd = j.at("crowd");
    check_keys(crowd, {"check_interval", "p_leave_room", "p_leave_corridor"}, "crowd");
    if (crowd.contains("check_interval"))
      c.crowd.check_interval = as_number(crowd, "check_interval", "crowd");
    if (crowd.contains("p_leave_room"))
      c.crowd.p_leave_room = as_number(crowd, "p_leave_room", "crowd");
    if (crowd.contains("p_leave_corridor"))
      c.crowd.p_leave_corridor = as_number(crowd, "p_leave_corridor", "crowd");
  }
  if (j.contains("sensing")) {
    const json& sensing = j.at("sensing");
    check_keys(sensing, {"detect_radius", "sense_period", "p_detect"}, "sensing");
    if (sensing.contains("detect_radius"))
      c.sensing.detect_radius = as_number(sensing, "detect_radius", "sensing");
    if (sensing.contains("sense_period"))
      c.sensing.sense_period = as_number(sensing, "sense_period", "sensing");
    if (sensing.contains("p_detect"))
      c.sensing.p_detect = as_number(sensing, "p_detect", "sensing");
  }
  if (j.contains("comm")) {
    const json& comm = j.at("comm");
    check_keys(comm, {"comm_radius"}, "comm");
    if (comm.contains("comm_radius"))
      c.comm.comm_radius = as_number(comm, "comm_radius", "comm");
  }
  return c;
}

SimConfig load_sim_config_file(const std::filesystem::path& path) {
  return sim_config_from_json(read_json_file(path));
}

void write_run_log(const RunLog& log, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  {
    std::string out = csv_preamble();
    out += "t,person_id,from_location,to_location\n";
    for (const Transition& tr : log.transitions) {
      out += format_time_s(tr.t_us);
      out += ',' + std::to_string(tr.person_id);
      out += ',' + std::to_string(tr.from);
      out += ',' + std::to_string(tr.to);
      out += '\n';
    }
    write_text_file(dir / "transitions.csv", out);
  }
  {
    std::string out = csv_preamble();
    out += "t,robot_id,person_id,location\n";
    for (const Observation& obs : log.observations) {
      out += format_time_s(obs.t_us);
      out += ',' + std::to_string(obs.robot_id);
      out += ',' + std::to_string(obs.record.person_id);
      out += ',' + std::to_string(obs.record.location);
      out += '\n';
    }
    write_text_file(dir / "observations.csv", out);
  }
  {
    std::string out = csv_preamble();
    out += "t,robot_id,person_id,location,timestamp,observer\n";
    for (const BeliefRow& row : log.belief_rows) {
      out += format_time_s(row.t_us);
      out += ',' + std::to_string(row.robot_id);
      out += ',' + std::to_string(row.record.person_id);
      out += ',' + std::to_string(row.record.location);
      out += ',' + format_time_s(row.record.timestamp_us);
      out += ',' + std::to_string(row.record.observer);
      out += '\n';
    }
    write_text_file(dir / "beliefs.csv", out);
  }
  write_text_file(dir / "config.json", sim_config_to_json(log.config).dump(2) + "\n");
}

RunLog read_run_log(const std::filesystem::path& dir) {
  SimConfig config = load_sim_config_file(dir / "config.json");
  EnvironmentMap map = resolve_layout(config);

  RunLog log{std::move(config), std::move(map), {}, {}, {}};

  for (const auto& row :
       read_csv(dir / "transitions.csv", "t,person_id,from_location,to_location")) {
    if (row.size() != 4) throw IoError("transitions.csv: malformed row");
    Transition tr;
    tr.t_us = parse_time_field(row[0], "transitions.csv");
    tr.person_id = static_cast<int>(parse_int_field(row[1], "transitions.csv"));
    tr.from = static_cast<int>(parse_int_field(row[2], "transitions.csv"));
    tr.to = static_cast<int>(parse_int_field(row[3], "transitions.csv"));
    log.transitions.push_back(tr);
  }

  for (const auto& row :
       read_csv(dir / "observations.csv", "t,robot_id,person_id,location")) {
    if (row.size() != 4) throw IoError("observations.csv: malformed row");
    Observation obs;
    obs.t_us = parse_time_field(row[0], "observations.csv");
    obs.robot_id = static_cast<int>(parse_int_field(row[1], "observations.csv"));
    obs.record.person_id = static_cast<int>(parse_int_field(row[2], "observations.csv"));
    obs.record.location = static_cast<int>(parse_int_field(row[3], "observations.csv"));
    obs.record.timestamp_us = obs.t_us;
    obs.record.observer = obs.robot_id;
    log.observations.push_back(obs);
  }

  for (const auto& row : read_csv(dir / "beliefs.csv",
                                  "t,robot_id,person_id,location,timestamp,observer")) {
    if (row.size() != 6) throw IoError("beliefs.csv: malformed row");
    BeliefRow br;
    br.t_us = parse_time_field(row[0], "beliefs.csv");
    br.robot_id = static_cast<int>(parse_int_field(row[1], "beliefs.csv"));
    br.record.person_id = static_cast<int>(parse_int_field(row[2], "beliefs.csv"));
    br.record.location = static_cast<int>(parse_int_field(row[3], "beliefs.csv"));
    br.record.timestamp_us = parse_time_field(row[4], "beliefs.csv");
    br.record.observer = static_cast<int>(parse_int_field(row[5], "beliefs.csv"));
    log.belief_rows.push_back(br);
  }
  return log;
}

namespace {

json curve_to_json(const EcdfCurve& curve) {
  json points = json::array();
  for (const auto& [delay_us, frac] : curve.points)
    points.push_back({us_to_seconds(delay_us), frac});
  return {{"total", curve.total}, {"uncensored", curve.uncensored}, {"points", points}};
}

EcdfCurve curve_from_json(const json& j) {
  check_keys(j, {"total", "uncensored", "points"}, "ecdf curve");
  EcdfCurve curve;
  curve.total = j.at("total").get<long>();
  curve.uncensored = j.at("uncensored").get<long>();
  for (const json& p : j.at("points"))
    curve.points.emplace_back(seconds_to_us(p.at(0).get<double>()), p.at(1).get<double>());
  return curve;
}

json optional_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

json report_to_json(const MetricsReport& report) {
  json sizes = json::array();
  for (const SwarmMetrics& m : report.sizes) {
    sizes.push_back({{"n_robots", m.n_robots},
                     {"total_events", m.total_events},
                     {"detected", m.detected},
                     {"detection_rate", m.detection_rate},
                     {"reach_rate_25", m.reach_rate_25},
                     {"reach_rate_50", m.reach_rate_50},
                     {"reach_rate_75", m.reach_rate_75},
                     {"median_detect_s", optional_to_json(m.median_detect_s)},
                     {"median_prop_25_s", optional_to_json(m.median_prop_25_s)},
                     {"median_prop_50_s", optional_to_json(m.median_prop_50_s)},
                     {"median_prop_75_s", optional_to_json(m.median_prop_75_s)},
                     {"ecdf",
                      {{"detect", curve_to_json(m.detect)},
                       {"prop25", curve_to_json(m.prop25)},
                       {"prop50", curve_to_json(m.prop50)},
                       {"prop75", curve_to_json(m.prop75)}}}});
  }
  return {{"schema_version", kSchemaVersion}, {"sizes", sizes}};
}

MetricsReport report_from_json(const json& j) {
  check_keys(j, {"schema_version", "sizes"}, "metrics report");
  MetricsReport report;
  for (const json& entry : j.at("sizes")) {
    check_keys(entry,
               {"n_robots", "total_events", "detected", "detection_rate",
                "reach_rate_25", "reach_rate_50", "reach_rate_75", "median_detect_s",
                "median_prop_25_s", "median_prop_50_s", "median_prop_75_s", "ecdf"},
               "metrics report entry");
    SwarmMetrics m;
    m.n_robots = entry.at("n_robots").get<int>();
    m.total_events = entry.at("total_events").get<long>();
    m.detected = entry.at("detected").get<long>();
    m.detection_rate = entry.at("detection_rate").get<double>();
    m.reach_rate_25 = entry.at("reach_rate_25").get<double>();
    m.reach_rate_50 = entry.at("reach_rate_50").get<double>();
    m.reach_rate_75 = entry.at("reach_rate_75").get<double>();
    m.median_detect_s = optional_from_json(entry.at("median_detect_s"));
    m.median_prop_25_s = optional_from_json(entry.at("median_prop_25_s"));
    m.median_prop_50_s = optional_from_json(entry.at("median_prop_50_s"));
    m.median_prop_75_s = optional_from_json(entry.at("median_prop_75_s"));
    const json& curves = entry.at("ecdf");
    check_keys(curves, {"detect", "prop25", "prop50", "prop75"}, "ecdf curves");
    m.detect = curve_from_json(curves.at("detect"));
    m.prop25 = curve_from_json(curves.at("prop25"));
    m.prop50 = curve_from_json(curves.at("prop50"));
    m.prop75 = curve_from_json(curves.at("prop75"));
    report.sizes.push_back(std::move(m));
  }
  return report;
}

void write_report_file(const MetricsReport& report, const std::filesystem::path& path) {
  write_text_file(path, report_to_json(report).dump(2) + "\n");
}

MetricsReport read_report_file(const std::filesystem::path& path) {
  return report_from_json(read_json_file(path));
}

}  // namespace swarmtrack
