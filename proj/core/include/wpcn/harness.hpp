#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wpcn/channel.hpp"
#include "wpcn/exhaustive.hpp"
#include "wpcn/model.hpp"

namespace wpcn {

enum class SweepParameter { MaxPower, HapPower, Users };
enum class Algorithm { Opt, Mfsa, Eta };

[[nodiscard]] std::string_view to_string(SweepParameter parameter);
[[nodiscard]] std::string_view to_string(Algorithm algorithm);
[[nodiscard]] std::optional<SweepParameter> parse_sweep_parameter(std::string_view text);
[[nodiscard]] std::optional<Algorithm> parse_algorithm(std::string_view text);

/// Everything held fixed while one parameter is swept.
struct BaseConfig {
  SystemParams sys;
  PathLossParams path_loss;
  TopologyParams topology;
};

struct SweepSpec {
  SweepParameter parameter = SweepParameter::MaxPower;
  std::vector<double> grid;
  std::size_t realizations = 200;
  std::vector<Algorithm> algorithms{Algorithm::Opt, Algorithm::Mfsa, Algorithm::Eta};
  BaseConfig base;
  std::uint64_t master_seed = 1;
  // Realization r draws the same channels at every grid value. When false the
  // grid index is mixed into the seed as well.
  bool common_random_numbers = false;
  double tol = 1e-9;
  std::size_t opt_max_users = exhaustive::kDefaultMaxUsers;
  std::size_t jobs = 1;

  /// Throws ModelError (invalid spec) or exhaustive::InstanceTooLarge.
  void validate() const;
  [[nodiscard]] std::size_t max_users() const;
};

/// Seed for one (grid value, realization) cell. Independent of the algorithm.
[[nodiscard]] std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t grid_index,
                                      std::size_t realization, bool common_random_numbers);

/// Network for one cell: base config with the swept parameter applied.
[[nodiscard]] NetworkInstance cell_instance(const SweepSpec& spec, std::size_t grid_index,
                                            std::size_t realization);

/// Sum throughput of one algorithm on one instance, bits per frame.
[[nodiscard]] double run_algorithm(Algorithm algorithm, const NetworkInstance& instance,
                                   double tol, std::size_t opt_max_users);

struct CellStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
  std::size_t count = 0;
};

struct SweepResult {
  SweepSpec spec;
  // Indexed [grid][algorithm position in spec.algorithms].
  std::vector<std::vector<CellStats>> stats;
  // Indexed [grid][algorithm][realization]; paired across algorithms.
  std::vector<std::vector<std::vector<double>>> samples;
  // Indexed [grid][realization].
  std::vector<std::vector<std::uint64_t>> seeds;
  std::map<Algorithm, double> runtime_seconds;

  [[nodiscard]] const CellStats& at(std::size_t grid_index, Algorithm algorithm) const;
  [[nodiscard]] std::vector<double> mean_curve(Algorithm algorithm) const;
};

using ProgressCallback = std::function<void(std::size_t grid_index, const SweepResult& partial)>;

/// Monte Carlo sweep. Each cell's instance depends only on its seed, and each
/// requested algorithm runs on that same instance. Cells may run on
/// `spec.jobs` threads; results do not depend on the thread count.
[[nodiscard]] SweepResult run_sweep(const SweepSpec& spec, const ProgressCallback& progress = {});

/// Sum in a fixed pairwise tree; reproducible for a given input order.
[[nodiscard]] double pairwise_sum(std::span<const double> values);

[[nodiscard]] CellStats summarize(std::span<const double> values);

/// A drop between adjacent grid values of one mean curve.
struct CurveDecrease {
  std::size_t grid_index = 0;  // drop from grid_index to grid_index + 1
  double drop = 0.0;           // mean[g] - mean[g + 1], > 0
  double noise_band = 0.0;     // z * standard error of the difference
  [[nodiscard]] bool significant() const { return drop > noise_band; }
};

/// Every adjacent decrease of the algorithm's mean curve. The standard error
/// is paired (per-realization differences) when realizations share channels
/// across grid values and unpaired otherwise.
[[nodiscard]] std::vector<CurveDecrease> curve_decreases(const SweepResult& result, Algorithm algorithm,
                                                         double z = 1.96);

/// Runs body(i) for i in [0, count) on up to `jobs` threads. The first
/// exception thrown by any body is rethrown after all threads join.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body);

}  // namespace wpcn
