#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wpcn/harness.hpp"

namespace wpcn {

/// Invalid configuration. The message starts with the dotted path of the
/// offending field, e.g. "topology.n_users: must be >= 1".
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct SweepSection {
  SweepParameter parameter = SweepParameter::MaxPower;
  std::vector<double> grid;
  std::size_t realizations = 200;
  std::vector<Algorithm> algorithms{Algorithm::Opt, Algorithm::Mfsa, Algorithm::Eta};
  std::uint64_t master_seed = 1;
  bool common_random_numbers = false;
};

/// One reviewable experiment file: physical constants, channel model,
/// topology, solver settings and an optional sweep.
struct ExperimentConfig {
  BaseConfig base;
  double tol = 1e-9;
  std::size_t opt_max_users = exhaustive::kDefaultMaxUsers;
  std::uint64_t seed = 1;
  std::optional<SweepSection> sweep;

  /// Throws ConfigError if there is no sweep section or it is invalid.
  [[nodiscard]] SweepSpec sweep_spec(std::size_t jobs = 1) const;
};

/// Grid used when a sweep section omits one.
[[nodiscard]] std::vector<double> default_grid(SweepParameter parameter, bool with_opt);

/// Parses JSON text. Missing keys keep their defaults; unknown keys, wrong
/// types and out-of-range values raise ConfigError naming the field. A sweep
/// result document is accepted too (its embedded "config" is used).
[[nodiscard]] ExperimentConfig parse_config(std::string_view json_text);
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

[[nodiscard]] std::string config_to_json(const ExperimentConfig& config, int indent = 2);

}  // namespace wpcn
