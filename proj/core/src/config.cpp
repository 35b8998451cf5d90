#include "wpcn/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace wpcn {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

/// Typed access to one JSON object with unknown-key detection.
class Section {
public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  ~Section() = default;
  Section(const Section&) = delete;
  Section& operator=(const Section&) = delete;

  [[nodiscard]] std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  [[nodiscard]] bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key);
  }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_number()) fail(field(key), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) fail(field(key), "must be finite");
  }

  void count(const std::string& key, std::size_t& out) {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (v.is_number_unsigned()) {
      out = v.get<std::size_t>();
    } else if (v.is_number_integer()) {
      fail(field(key), "must be >= 0");
    } else {
      fail(field(key), "expected a non-negative integer");
    }
  }

  void seed(const std::string& key, std::uint64_t& out) {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_number_unsigned()) fail(field(key), "expected a non-negative integer");
    out = v.get<std::uint64_t>();
  }

  void boolean(const std::string& key, bool& out) {
    if (!has(key)) return;
    const json& v = node_.at(key);
    if (!v.is_boolean()) fail(field(key), "expected true or false");
    out = v.get<bool>();
  }

  [[nodiscard]] const json* child(const std::string& key) {
    if (!has(key)) return nullptr;
    return &node_.at(key);
  }

  void reject_unknown() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) fail(field(key), "unknown key");
    }
  }

private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Check>
void check(bool ok, const std::string& path, Check&& message) {
  if (!ok) fail(path, message);
}

void read_system(const json& node, SystemParams& sys) {
  Section s(node, "system");
  s.number("hap_power", sys.hap_power);
  s.number("max_power", sys.max_power);
  s.number("bandwidth", sys.bandwidth);
  s.number("noise_psd", sys.noise_psd);
  s.number("beta", sys.beta);
  s.number("frame_length", sys.frame_length);
  s.reject_unknown();
  check(sys.hap_power > 0.0, "system.hap_power", "must be > 0");
  check(sys.max_power > 0.0, "system.max_power", "must be > 0");
  check(sys.bandwidth > 0.0, "system.bandwidth", "must be > 0");
  check(sys.noise_psd >= 0.0, "system.noise_psd", "must be >= 0");
  check(sys.beta >= 0.0 && sys.beta <= 1.0, "system.beta", "must lie in [0, 1]");
  check(sys.frame_length == 1.0, "system.frame_length", "must equal 1");
  check(sys.noise_psd * sys.bandwidth + sys.beta * sys.hap_power > 0.0, "system.noise_psd",
        "N_o*W + beta*P_h must be > 0");
}

void read_path_loss(const json& node, PathLossParams& p) {
  Section s(node, "path_loss");
  s.number("d0", p.d0);
  s.number("pl_d0", p.pl_d0);
  s.number("alpha", p.alpha);
  s.number("sigma", p.sigma);
  s.reject_unknown();
  check(p.d0 > 0.0, "path_loss.d0", "must be > 0");
  check(p.alpha > 0.0, "path_loss.alpha", "must be > 0");
  check(p.sigma >= 0.0, "path_loss.sigma", "must be >= 0");
}

void read_battery(const json& node, BatteryModel& battery) {
  Section s(node, "topology.battery");
  if (const json* model = s.child("model")) {
    if (*model == "constant") {
      battery.kind = BatteryModel::Kind::Constant;
    } else if (*model == "uniform") {
      battery.kind = BatteryModel::Kind::Uniform;
    } else {
      fail("topology.battery.model", "expected \"constant\" or \"uniform\"");
    }
  }
  s.number("value", battery.value);
  s.number("min", battery.min);
  s.number("max", battery.max);
  s.reject_unknown();
  if (battery.kind == BatteryModel::Kind::Constant) {
    check(battery.value >= 0.0, "topology.battery.value", "must be >= 0");
  } else {
    check(battery.min >= 0.0, "topology.battery.min", "must be >= 0");
    check(battery.max >= battery.min, "topology.battery.max", "must be >= topology.battery.min");
  }
}

void read_topology(const json& node, TopologyParams& topo, const PathLossParams& plp) {
  Section s(node, "topology");
  s.count("n_users", topo.n_users);
  s.number("d_min", topo.d_min);
  s.number("d_max", topo.d_max);
  s.number("eta", topo.eta);
  if (const json* battery = s.child("battery")) read_battery(*battery, topo.battery);
  s.reject_unknown();
  check(topo.n_users >= 1, "topology.n_users", "must be >= 1");
  check(topo.d_min > 0.0, "topology.d_min", "must be > 0");
  check(topo.d_min >= plp.d0, "topology.d_min", "must be >= path_loss.d0");
  check(topo.d_max >= topo.d_min, "topology.d_max", "must be >= topology.d_min");
  check(topo.eta > 0.0 && topo.eta <= 1.0, "topology.eta", "must lie in (0, 1]");
}

void read_solver(const json& node, ExperimentConfig& config) {
  Section s(node, "solver");
  s.number("tol", config.tol);
  s.count("opt_max_users", config.opt_max_users);
  s.reject_unknown();
  check(config.tol > 0.0, "solver.tol", "must be > 0");
  check(config.opt_max_users >= 1, "solver.opt_max_users", "must be >= 1");
}

SweepSection read_sweep(const json& node) {
  SweepSection sweep;
  Section s(node, "sweep");
  if (const json* parameter = s.child("parameter")) {
    if (!parameter->is_string()) fail("sweep.parameter", "expected \"P_max\", \"P_h\" or \"N\"");
    const auto parsed = parse_sweep_parameter(parameter->get<std::string>());
    if (!parsed) fail("sweep.parameter", "expected \"P_max\", \"P_h\" or \"N\"");
    sweep.parameter = *parsed;
  }
  if (const json* algorithms = s.child("algorithms")) {
    if (!algorithms->is_array()) fail("sweep.algorithms", "expected an array");
    sweep.algorithms.clear();
    for (const auto& item : *algorithms) {
      const auto parsed = item.is_string() ? parse_algorithm(item.get<std::string>()) : std::nullopt;
      if (!parsed) fail("sweep.algorithms", "expected entries from OPT, MFSA, ETA");
      sweep.algorithms.push_back(*parsed);
    }
    check(!sweep.algorithms.empty(), "sweep.algorithms", "must be nonempty");
  }
  const bool with_opt = std::find(sweep.algorithms.begin(), sweep.algorithms.end(), Algorithm::Opt) !=
                        sweep.algorithms.end();
  if (const json* grid = s.child("grid")) {
    if (!grid->is_array()) fail("sweep.grid", "expected an array of numbers");
    for (const auto& item : *grid) {
      if (!item.is_number()) fail("sweep.grid", "expected an array of numbers");
      sweep.grid.push_back(item.get<double>());
    }
  } else {
    sweep.grid = default_grid(sweep.parameter, with_opt);
  }
  s.count("realizations", sweep.realizations);
  s.seed("master_seed", sweep.master_seed);
  s.boolean("common_random_numbers", sweep.common_random_numbers);
  s.reject_unknown();

  check(!sweep.grid.empty(), "sweep.grid", "must be nonempty");
  for (std::size_t i = 1; i < sweep.grid.size(); ++i) {
    check(sweep.grid[i] > sweep.grid[i - 1], "sweep.grid", "must be strictly increasing");
  }
  for (double v : sweep.grid) {
    check(v > 0.0, "sweep.grid", "values must be positive");
    if (sweep.parameter == SweepParameter::Users) check(v == std::floor(v), "sweep.grid", "N values must be integers");
  }
  check(sweep.realizations >= 1, "sweep.realizations", "must be >= 1");
  return sweep;
}

json system_json(const SystemParams& sys) {
  return {{"hap_power", sys.hap_power}, {"max_power", sys.max_power}, {"bandwidth", sys.bandwidth},
          {"noise_psd", sys.noise_psd}, {"beta", sys.beta},           {"frame_length", sys.frame_length}};
}

}  // namespace

std::vector<double> default_grid(SweepParameter parameter, bool with_opt) {
  std::vector<double> grid;
  switch (parameter) {
    case SweepParameter::MaxPower:
      for (int mw = 1; mw <= 10; ++mw) grid.push_back(mw * 1e-3);
      break;
    case SweepParameter::HapPower:
      for (int half = 1; half <= 8; ++half) grid.push_back(half * 0.5);
      break;
    case SweepParameter::Users:
      for (int n = 1; n <= (with_opt ? 6 : 30); ++n) grid.push_back(n);
      break;
  }
  return grid;
}

SweepSpec ExperimentConfig::sweep_spec(std::size_t jobs) const {
  if (!sweep) throw ConfigError("sweep: section is required for this command");
  SweepSpec spec;
  spec.parameter = sweep->parameter;
  spec.grid = sweep->grid;
  spec.realizations = sweep->realizations;
  spec.algorithms = sweep->algorithms;
  spec.base = base;
  spec.master_seed = sweep->master_seed;
  spec.common_random_numbers = sweep->common_random_numbers;
  spec.tol = tol;
  spec.opt_max_users = opt_max_users;
  spec.jobs = jobs;
  return spec;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json document;
  try {
    document = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (document.is_object() && document.contains("format") && document.contains("config")) {
    return parse_config(document.at("config").dump());
  }

  ExperimentConfig config;
  Section root(document, "");
  if (const json* node = root.child("system")) read_system(*node, config.base.sys);
  if (const json* node = root.child("path_loss")) read_path_loss(*node, config.base.path_loss);
  if (const json* node = root.child("topology")) read_topology(*node, config.base.topology, config.base.path_loss);
  if (const json* node = root.child("solver")) read_solver(*node, config);
  root.seed("seed", config.seed);
  if (const json* node = root.child("sweep")) config.sweep = read_sweep(*node);
  root.reject_unknown();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const ExperimentConfig& config, int indent) {
  const auto& topo = config.base.topology;
  json battery;
  if (topo.battery.kind == BatteryModel::Kind::Constant) {
    battery = {{"model", "constant"}, {"value", topo.battery.value}};
  } else {
    battery = {{"model", "uniform"}, {"min", topo.battery.min}, {"max", topo.battery.max}};
  }
  json document = {
      {"system", system_json(config.base.sys)},
      {"path_loss",
       {{"d0", config.base.path_loss.d0},
        {"pl_d0", config.base.path_loss.pl_d0},
        {"alpha", config.base.path_loss.alpha},
        {"sigma", config.base.path_loss.sigma}}},
      {"topology",
       {{"n_users", topo.n_users}, {"d_min", topo.d_min}, {"d_max", topo.d_max}, {"eta", topo.eta}, {"battery", battery}}},
      {"solver", {{"tol", config.tol}, {"opt_max_users", config.opt_max_users}}},
      {"seed", config.seed},
  };
  if (config.sweep) {
    json algorithms = json::array();
    for (auto a : config.sweep->algorithms) algorithms.push_back(std::string(to_string(a)));
    document["sweep"] = {{"parameter", std::string(to_string(config.sweep->parameter))},
                         {"grid", config.sweep->grid},
                         {"realizations", config.sweep->realizations},
                         {"algorithms", algorithms},
                         {"master_seed", config.sweep->master_seed},
                         {"common_random_numbers", config.sweep->common_random_numbers}};
  }
  return document.dump(indent);
}

}  // namespace wpcn
