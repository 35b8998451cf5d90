#pragma once

#include <span>
#include <string>
#include <vector>

#include "wpcn/model.hpp"

namespace wpcn::verifier {

/// Constraint audit, computed from explicit slot start/end times. Returns an
/// empty list iff the schedule satisfies energy causality (own-slot harvesting
/// included), P <= P_max, tau >= 0, P >= 0 and idle + sum tau <= 1.
[[nodiscard]] std::vector<Violation> check_feasible(const Schedule& schedule,
                                                    std::span<const UserParams> users,
                                                    const SystemParams& sys,
                                                    double tol = kFeasibilityTolerance);

/// Necessary conditions every optimal schedule satisfies.
struct ConditionReport {
  bool no_idle_prefix = true;        // tau_0 = 0
  bool full_frame = true;            // sum tau = 1
  bool power_or_energy_tight = true; // every active user at P_max or out of energy
  bool support_monotone = true;      // no idle user outranks an active one in r^max
  bool max_rate_user_active = true;  // a top-r^max user transmits
  std::vector<std::string> findings;

  [[nodiscard]] bool all_passed() const {
    return no_idle_prefix && full_frame && power_or_energy_tight && support_monotone &&
           max_rate_user_active;
  }
};

/// A user counts as active when its slot is longer than `tol`. Power and
/// energy tightness are tested relative to P_max and the available energy.
[[nodiscard]] ConditionReport check_optimality_conditions(const Schedule& schedule,
                                                          std::span<const UserParams> users,
                                                          const SystemParams& sys,
                                                          double tol = 1e-6);

/// Moves the idle prefix into the first slot at unchanged energy (so at lower
/// power). Every slot ends where it did, so feasibility is preserved, and the
/// first user's throughput rises because rate is concave in power.
[[nodiscard]] Schedule fold_idle_prefix(const Schedule& schedule);

/// Inserts the unused remainder of the frame as idle prefix, then folds it.
/// Later slots end later and harvest more, so feasibility is preserved.
[[nodiscard]] Schedule extend_to_full_frame(const Schedule& schedule, const SystemParams& sys);

}  // namespace wpcn::verifier
