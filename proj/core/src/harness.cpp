#include "wpcn/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <thread>

#include "wpcn/schedulers.hpp"

namespace wpcn {

std::string_view to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::MaxPower: return "P_max";
    case SweepParameter::HapPower: return "P_h";
    case SweepParameter::Users: return "N";
  }
  return "unknown";
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Opt: return "OPT";
    case Algorithm::Mfsa: return "MFSA";
    case Algorithm::Eta: return "ETA";
  }
  return "unknown";
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view text) {
  for (auto p : {SweepParameter::MaxPower, SweepParameter::HapPower, SweepParameter::Users}) {
    if (text == to_string(p)) return p;
  }
  return std::nullopt;
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
  for (auto a : {Algorithm::Opt, Algorithm::Mfsa, Algorithm::Eta}) {
    std::string lower(to_string(a));
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (text == to_string(a) || text == lower) return a;
  }
  return std::nullopt;
}

std::size_t SweepSpec::max_users() const {
  if (parameter != SweepParameter::Users) return base.topology.n_users;
  double largest = 0.0;
  for (double v : grid) largest = std::max(largest, v);
  return static_cast<std::size_t>(largest);
}

void SweepSpec::validate() const {
  if (grid.empty()) throw ModelError("sweep.grid: must be nonempty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ModelError("sweep.grid: must be strictly increasing");
  }
  for (double v : grid) {
    if (!std::isfinite(v) || v <= 0.0) throw ModelError("sweep.grid: values must be positive");
    if (parameter == SweepParameter::Users && v != std::floor(v)) {
      throw ModelError("sweep.grid: N values must be integers");
    }
  }
  if (realizations < 1) throw ModelError("sweep.realizations: must be >= 1");
  if (algorithms.empty()) throw ModelError("sweep.algorithms: must be nonempty");
  if (!(tol > 0.0)) throw ModelError("solver.tol: must be > 0");
  base.sys.validate();
  base.path_loss.validate();
  base.topology.validate();
  const bool wants_opt = std::find(algorithms.begin(), algorithms.end(), Algorithm::Opt) != algorithms.end();
  if (wants_opt && max_users() > opt_max_users) {
    throw exhaustive::InstanceTooLarge("sweep: OPT requested with N = " + std::to_string(max_users()) +
                                       " users, above the exhaustive-search cap of " +
                                       std::to_string(opt_max_users));
  }
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t grid_index, std::size_t realization,
                        bool common_random_numbers) {
  const auto lo = static_cast<std::uint32_t>(master_seed);
  const auto hi = static_cast<std::uint32_t>(master_seed >> 32);
  const auto grid = common_random_numbers ? 0u : static_cast<std::uint32_t>(grid_index + 1);
  std::seed_seq sequence{lo, hi, grid, static_cast<std::uint32_t>(realization)};
  std::array<std::uint32_t, 2> words{};
  sequence.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
}

NetworkInstance cell_instance(const SweepSpec& spec, std::size_t grid_index, std::size_t realization) {
  BaseConfig config = spec.base;
  const double value = spec.grid.at(grid_index);
  switch (spec.parameter) {
    case SweepParameter::MaxPower: config.sys.max_power = value; break;
    case SweepParameter::HapPower: config.sys.hap_power = value; break;
    case SweepParameter::Users: config.topology.n_users = static_cast<std::size_t>(value); break;
  }
  return generate(config.topology, config.sys, config.path_loss,
                  cell_seed(spec.master_seed, grid_index, realization, spec.common_random_numbers));
}

double run_algorithm(Algorithm algorithm, const NetworkInstance& instance, double tol,
                     std::size_t opt_max_users) {
  switch (algorithm) {
    case Algorithm::Opt: {
      exhaustive::Options options;
      options.tol = tol;
      options.max_users = opt_max_users;
      return exhaustive::solve_opt(instance.users, instance.sys, options).report.sum_throughput;
    }
    case Algorithm::Mfsa: return schedulers::mfsa(instance.users, instance.sys).report.sum_throughput;
    case Algorithm::Eta: return schedulers::eta(instance.users, instance.sys).report.sum_throughput;
  }
  return 0.0;
}

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() <= 8) {
    double total = 0.0;
    for (double v : values) total += v;
    return total;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

CellStats summarize(std::span<const double> values) {
  CellStats stats;
  stats.count = values.size();
  if (values.empty()) return stats;
  stats.mean = pairwise_sum(values) / static_cast<double>(values.size());
  if (values.size() > 1) {
    std::vector<double> squared(values.size());
    std::transform(values.begin(), values.end(), squared.begin(),
                   [&](double v) { return (v - stats.mean) * (v - stats.mean); });
    stats.stddev = std::sqrt(pairwise_sum(squared) / static_cast<double>(values.size() - 1));
  }
  return stats;
}

std::vector<CurveDecrease> curve_decreases(const SweepResult& result, Algorithm algorithm, double z) {
  const auto it = std::find(result.spec.algorithms.begin(), result.spec.algorithms.end(), algorithm);
  if (it == result.spec.algorithms.end()) {
    throw ModelError("sweep result has no " + std::string(to_string(algorithm)));
  }
  const auto a = static_cast<std::size_t>(it - result.spec.algorithms.begin());
  std::vector<CurveDecrease> decreases;
  for (std::size_t g = 0; g + 1 < result.stats.size(); ++g) {
    const CellStats& lo = result.stats[g][a];
    const CellStats& hi = result.stats[g + 1][a];
    if (!(hi.mean < lo.mean)) continue;
    double standard_error = 0.0;
    if (result.spec.common_random_numbers) {
      const auto& x = result.samples[g][a];
      const auto& y = result.samples[g + 1][a];
      std::vector<double> diff(x.size());
      std::transform(x.begin(), x.end(), y.begin(), diff.begin(), std::minus<>());
      const CellStats d = summarize(diff);
      standard_error = d.stddev / std::sqrt(static_cast<double>(std::max<std::size_t>(d.count, 1)));
    } else {
      const auto n_lo = static_cast<double>(std::max<std::size_t>(lo.count, 1));
      const auto n_hi = static_cast<double>(std::max<std::size_t>(hi.count, 1));
      standard_error = std::sqrt(lo.stddev * lo.stddev / n_lo + hi.stddev * hi.stddev / n_hi);
    }
    decreases.push_back({g, lo.mean - hi.mean, z * standard_error});
  }
  return decreases;
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

const CellStats& SweepResult::at(std::size_t grid_index, Algorithm algorithm) const {
  const auto it = std::find(spec.algorithms.begin(), spec.algorithms.end(), algorithm);
  if (it == spec.algorithms.end()) throw ModelError("sweep result has no " + std::string(to_string(algorithm)));
  return stats.at(grid_index).at(static_cast<std::size_t>(it - spec.algorithms.begin()));
}

std::vector<double> SweepResult::mean_curve(Algorithm algorithm) const {
  std::vector<double> curve;
  for (std::size_t g = 0; g < spec.grid.size(); ++g) curve.push_back(at(g, algorithm).mean);
  return curve;
}

SweepResult run_sweep(const SweepSpec& spec, const ProgressCallback& progress) {
  spec.validate();
  const std::size_t n_alg = spec.algorithms.size();

  SweepResult result;
  result.spec = spec;
  result.stats.resize(spec.grid.size());
  result.samples.assign(spec.grid.size(),
                        std::vector<std::vector<double>>(n_alg, std::vector<double>(spec.realizations)));
  result.seeds.assign(spec.grid.size(), std::vector<std::uint64_t>(spec.realizations));
  std::vector<std::vector<double>> runtime(n_alg, std::vector<double>(spec.realizations, 0.0));
  for (auto algorithm : spec.algorithms) result.runtime_seconds[algorithm] = 0.0;

  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    parallel_for(spec.realizations, spec.jobs, [&](std::size_t r) {
      const NetworkInstance instance = cell_instance(spec, g, r);
      result.seeds[g][r] = instance.seed;
      for (std::size_t a = 0; a < n_alg; ++a) {
        const auto start = std::chrono::steady_clock::now();
        result.samples[g][a][r] = run_algorithm(spec.algorithms[a], instance, spec.tol, spec.opt_max_users);
        runtime[a][r] += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
    });
    for (std::size_t a = 0; a < n_alg; ++a) result.stats[g].push_back(summarize(result.samples[g][a]));
    if (progress) progress(g, result);
  }
  for (std::size_t a = 0; a < n_alg; ++a) {
    result.runtime_seconds[spec.algorithms[a]] = pairwise_sum(runtime[a]);
  }
  return result;
}

}  // namespace wpcn
