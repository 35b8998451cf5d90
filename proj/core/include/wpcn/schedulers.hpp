#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "wpcn/model.hpp"

namespace wpcn::schedulers {

/// One of the three candidate splits MFSA considers for a pair of users
/// competing for the remaining time t_a.
struct PairwiseCase {
  int case_id = 0;  // 1, 2 or 3
  Slot higher;      // higher-rate user
  Slot lower;       // lower-rate user (tau = 0 when it is left out)
  double pair_throughput = 0.0;
};

struct PairEvaluation {
  double available_time = 0.0;
  std::array<PairwiseCase, 3> cases;
  int chosen = 0;
};

struct Result {
  Schedule schedule;
  ThroughputReport report;
  std::vector<PairEvaluation> pair_evaluations;
};

/// Maximum-rate first scheduling. Users are taken in decreasing r^max and
/// placed from the end of the frame backwards, so higher-rate users harvest
/// longer before transmitting. Each step compares three splits of the
/// remaining time between the current user and the next one, committing the
/// current user and continuing only when it ends up at P_max for the shortest
/// time it can sustain that power. At most N - 1 pair evaluations.
[[nodiscard]] Result mfsa(std::span<const UserParams> users, const SystemParams& sys);

/// Equal time allocation: tau = 1/N per user in ascending r^max order, each at
/// the largest power its energy at the end of its own slot allows.
[[nodiscard]] Result eta(std::span<const UserParams> users, const SystemParams& sys);

}  // namespace wpcn::schedulers
