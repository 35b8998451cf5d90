#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "wpcn/model.hpp"
#include "wpcn/ptap.hpp"

namespace wpcn::exhaustive {

inline constexpr std::size_t kDefaultMaxUsers = 8;

class InstanceTooLarge : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Options {
  double tol = 1e-9;
  std::size_t max_users = kDefaultMaxUsers;
};

struct Result {
  Schedule schedule;
  ThroughputReport report;
  std::vector<std::size_t> best_order;  // user ids, full permutation
  std::size_t ptap_solves = 0;
};

/// n!, throwing InstanceTooLarge if it does not fit in 64 bits.
[[nodiscard]] std::uint64_t order_count(std::size_t n);

/// Sum-throughput optimum over every transmission order, each solved exactly
/// by ptap::solve. Orders are visited in lexicographic order of user id and a
/// later order replaces the incumbent only if it is better by more than the
/// solver tolerance, so ties resolve to the lexicographically smallest order.
[[nodiscard]] Result solve_opt(std::span<const UserParams> users, const SystemParams& sys,
                               const Options& options = {});

}  // namespace wpcn::exhaustive
