#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wpcn/channel.hpp"
#include "wpcn/config.hpp"
#include "wpcn/harness.hpp"
#include "wpcn/model.hpp"

namespace wpcn {

// Instance files ("wpcn-instance/1"). Doubles are written in shortest
// round-trip form, so reading a written file reproduces it bit for bit.
[[nodiscard]] std::string instance_to_json(const NetworkInstance& instance);
[[nodiscard]] NetworkInstance instance_from_json(std::string_view json_text);

// Schedule files ("wpcn-schedule/1"): the schedule plus its report.
struct ScheduleDocument {
  std::string algorithm;
  std::uint64_t instance_seed = 0;
  Schedule schedule;
  ThroughputReport report;
};
[[nodiscard]] std::string schedule_to_json(const ScheduleDocument& document);
[[nodiscard]] ScheduleDocument schedule_from_json(std::string_view json_text);

// Sweep outputs. CSV columns:
//   sweep_param,value,algorithm,mean_throughput_bits_per_frame,stddev,n_realizations
struct SweepRow {
  std::string sweep_param;
  double value = 0.0;
  std::string algorithm;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t n_realizations = 0;
};
[[nodiscard]] std::vector<SweepRow> sweep_rows(const SweepResult& result);
[[nodiscard]] std::string sweep_to_csv(const SweepResult& result);
[[nodiscard]] std::vector<SweepRow> sweep_rows_from_csv(std::string_view csv_text);

/// Sweep document ("wpcn-sweep/1"): config echo, per-cell seeds, rows and,
/// if requested, wall-clock runtimes (the only non-reproducible field).
[[nodiscard]] std::string sweep_to_json(const SweepResult& result, const ExperimentConfig& config,
                                        bool include_runtime = true);

[[nodiscard]] std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace wpcn
