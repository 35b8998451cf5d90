#include "wpcn/exhaustive.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace wpcn::exhaustive {

std::uint64_t order_count(std::size_t n) {
  std::uint64_t count = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    if (count > std::numeric_limits<std::uint64_t>::max() / i) {
      throw InstanceTooLarge("order_count: " + std::to_string(n) + "! overflows 64 bits");
    }
    count *= i;
  }
  return count;
}

Result solve_opt(std::span<const UserParams> users, const SystemParams& sys, const Options& options) {
  if (users.empty()) throw ModelError("solve_opt: at least one user is required");
  if (users.size() > options.max_users) {
    throw InstanceTooLarge("solve_opt: " + std::to_string(users.size()) +
                           " users exceeds the exhaustive-search cap of " +
                           std::to_string(options.max_users));
  }

  std::vector<UserParams> ordered(users.begin(), users.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const UserParams& a, const UserParams& b) { return a.id < b.id; });

  ptap::Instance instance{ordered, sys};
  Result result;
  double best = -std::numeric_limits<double>::infinity();
  ptap::Solution best_solution;
  std::vector<UserParams> best_users;

  do {
    instance.ordered_users = ordered;
    ptap::Solution solution = ptap::solve(instance, options.tol);
    ++result.ptap_solves;
    if (solution.objective > best + options.tol * std::max(best, 0.0)) {
      best = solution.objective;
      best_solution = std::move(solution);
      best_users = ordered;
    }
  } while (std::next_permutation(ordered.begin(), ordered.end(),
                                 [](const UserParams& a, const UserParams& b) { return a.id < b.id; }));

  instance.ordered_users = best_users;
  result.schedule = ptap::to_schedule(instance, best_solution);
  result.report = evaluate(result.schedule, users, sys);
  for (const auto& user : best_users) result.best_order.push_back(user.id);
  return result;
}

}  // namespace wpcn::exhaustive
