#include "wpcn/serialization.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace wpcn {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kInstanceFormat = "wpcn-instance/1";
constexpr const char* kScheduleFormat = "wpcn-schedule/1";
constexpr const char* kSweepFormat = "wpcn-sweep/1";

json parse_document(std::string_view text, const char* expected_format) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("file: invalid JSON: ") + e.what());
  }
  if (!document.is_object() || document.value("format", "") != expected_format) {
    throw ConfigError(std::string("format: expected \"") + expected_format + "\"");
  }
  return document;
}

template <typename T>
T get_field(const json& node, const char* key, const std::string& path) {
  if (!node.contains(key)) throw ConfigError(path + "." + key + ": missing");
  try {
    return node.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key + ": wrong type");
  }
}

std::string format_double(double value) {
  // %.17g round-trips every double and is locale-independent for our inputs.
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

}  // namespace

std::string instance_to_json(const NetworkInstance& instance) {
  ordered_json users = ordered_json::array();
  for (const auto& u : instance.users) {
    users.push_back({{"id", u.id}, {"g", u.g}, {"h", u.h}, {"eta", u.eta}, {"battery", u.battery}});
  }
  const auto& sys = instance.sys;
  ordered_json document = {
      {"format", kInstanceFormat},
      {"seed", instance.seed},
      {"system",
       {{"hap_power", sys.hap_power},
        {"max_power", sys.max_power},
        {"bandwidth", sys.bandwidth},
        {"noise_psd", sys.noise_psd},
        {"beta", sys.beta},
        {"frame_length", sys.frame_length}}},
      {"users", users},
  };
  return document.dump(2) + "\n";
}

NetworkInstance instance_from_json(std::string_view json_text) {
  const json document = parse_document(json_text, kInstanceFormat);
  NetworkInstance instance;
  instance.seed = get_field<std::uint64_t>(document, "seed", "instance");
  const json& sys = document.at("system");
  instance.sys.hap_power = get_field<double>(sys, "hap_power", "system");
  instance.sys.max_power = get_field<double>(sys, "max_power", "system");
  instance.sys.bandwidth = get_field<double>(sys, "bandwidth", "system");
  instance.sys.noise_psd = get_field<double>(sys, "noise_psd", "system");
  instance.sys.beta = get_field<double>(sys, "beta", "system");
  instance.sys.frame_length = get_field<double>(sys, "frame_length", "system");
  if (!document.contains("users") || !document.at("users").is_array()) {
    throw ConfigError("users: expected an array");
  }
  std::size_t index = 0;
  for (const auto& node : document.at("users")) {
    const std::string path = "users[" + std::to_string(index++) + "]";
    UserParams user;
    user.id = get_field<std::size_t>(node, "id", path);
    user.g = get_field<double>(node, "g", path);
    user.h = get_field<double>(node, "h", path);
    user.eta = get_field<double>(node, "eta", path);
    user.battery = get_field<double>(node, "battery", path);
    try {
      user.validate();
    } catch (const ModelError& e) {
      throw ConfigError(path + ": " + e.what());
    }
    instance.users.push_back(user);
  }
  try {
    instance.sys.validate();
  } catch (const ModelError& e) {
    throw ConfigError(e.what());
  }
  return instance;
}

std::string schedule_to_json(const ScheduleDocument& doc) {
  ordered_json slots = ordered_json::array();
  for (std::size_t i = 0; i < doc.schedule.slots.size(); ++i) {
    const Slot& s = doc.schedule.slots[i];
    slots.push_back({{"user", s.user_id}, {"start", doc.schedule.slot_start(i)}, {"tau", s.tau}, {"power", s.power}});
  }
  ordered_json rates = ordered_json::array();
  for (const auto& r : doc.report.per_user_rate) rates.push_back({{"user", r.user_id}, {"bits", r.bits}});
  ordered_json violations = ordered_json::array();
  for (const auto& v : doc.report.violations) {
    violations.push_back({{"kind", std::string(to_string(v.kind))}, {"user", v.user_id}, {"magnitude", v.magnitude}});
  }
  ordered_json document = {
      {"format", kScheduleFormat},
      {"algorithm", doc.algorithm},
      {"instance_seed", doc.instance_seed},
      {"idle_prefix", doc.schedule.idle_prefix},
      {"slots", slots},
      {"report",
       {{"sum_throughput", doc.report.sum_throughput},
        {"feasible", doc.report.feasible},
        {"per_user_rate", rates},
        {"violations", violations}}},
  };
  return document.dump(2) + "\n";
}

ScheduleDocument schedule_from_json(std::string_view json_text) {
  const json document = parse_document(json_text, kScheduleFormat);
  ScheduleDocument doc;
  doc.algorithm = get_field<std::string>(document, "algorithm", "schedule");
  doc.instance_seed = get_field<std::uint64_t>(document, "instance_seed", "schedule");
  doc.schedule.idle_prefix = get_field<double>(document, "idle_prefix", "schedule");
  if (!document.contains("slots") || !document.at("slots").is_array()) {
    throw ConfigError("slots: expected an array");
  }
  std::size_t index = 0;
  for (const auto& node : document.at("slots")) {
    const std::string path = "slots[" + std::to_string(index++) + "]";
    doc.schedule.slots.push_back({get_field<std::size_t>(node, "user", path), get_field<double>(node, "tau", path),
                                  get_field<double>(node, "power", path)});
  }
  if (document.contains("report")) {
    const json& report = document.at("report");
    doc.report.sum_throughput = get_field<double>(report, "sum_throughput", "report");
    doc.report.feasible = get_field<bool>(report, "feasible", "report");
    for (const auto& r : report.value("per_user_rate", json::array())) {
      doc.report.per_user_rate.push_back({get_field<std::size_t>(r, "user", "report.per_user_rate"),
                                          get_field<double>(r, "bits", "report.per_user_rate")});
    }
  }
  return doc;
}

std::vector<SweepRow> sweep_rows(const SweepResult& result) {
  std::vector<SweepRow> rows;
  const auto& spec = result.spec;
  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
      const CellStats& stats = result.stats[g][a];
      rows.push_back({std::string(to_string(spec.parameter)), spec.grid[g],
                      std::string(to_string(spec.algorithms[a])), stats.mean, stats.stddev, stats.count});
    }
  }
  return rows;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out = "sweep_param,value,algorithm,mean_throughput_bits_per_frame,stddev,n_realizations\n";
  for (const auto& row : sweep_rows(result)) {
    out += row.sweep_param + "," + format_double(row.value) + "," + row.algorithm + "," + format_double(row.mean) +
           "," + format_double(row.stddev) + "," + std::to_string(row.n_realizations) + "\n";
  }
  return out;
}

std::vector<SweepRow> sweep_rows_from_csv(std::string_view csv_text) {
  std::vector<SweepRow> rows;
  std::istringstream in{std::string(csv_text)};
  std::string line;
  if (!std::getline(in, line) ||
      line != "sweep_param,value,algorithm,mean_throughput_bits_per_frame,stddev,n_realizations") {
    throw ConfigError("csv: unexpected header");
  }
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw ConfigError("csv line " + std::to_string(line_number) + ": expected 6 columns");
    try {
      rows.push_back({cells[0], std::stod(cells[1]), cells[2], std::stod(cells[3]), std::stod(cells[4]),
                      static_cast<std::size_t>(std::stoull(cells[5]))});
    } catch (const std::exception&) {
      throw ConfigError("csv line " + std::to_string(line_number) + ": malformed number");
    }
  }
  return rows;
}

std::string sweep_to_json(const SweepResult& result, const ExperimentConfig& config, bool include_runtime) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : sweep_rows(result)) {
    rows.push_back({{"sweep_param", row.sweep_param},
                    {"value", row.value},
                    {"algorithm", row.algorithm},
                    {"mean_throughput_bits_per_frame", row.mean},
                    {"stddev", row.stddev},
                    {"n_realizations", row.n_realizations}});
  }
  ordered_json seeds = ordered_json::array();
  for (const auto& per_grid : result.seeds) seeds.push_back(per_grid);

  ordered_json document = {
      {"format", kSweepFormat},
      {"config", ordered_json::parse(config_to_json(config, -1))},
      {"cell_seeds", seeds},
      {"rows", rows},
  };
  if (include_runtime) {
    ordered_json runtime = ordered_json::object();
    for (const auto& [algorithm, seconds] : result.runtime_seconds) runtime[std::string(to_string(algorithm))] = seconds;
    document["runtime_seconds"] = runtime;
  }
  return document.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace wpcn
