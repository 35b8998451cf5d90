#include "wpcn/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace wpcn::verifier {

std::vector<Violation> check_feasible(const Schedule& schedule, std::span<const UserParams> users,
                                      const SystemParams& sys, double tol) {
  std::vector<Violation> violations;
  std::map<std::size_t, int> appearances;

  if (schedule.idle_prefix < -tol) {
    violations.push_back({ViolationKind::NegativeTau, 0, -schedule.idle_prefix});
  }

  for (std::size_t i = 0; i < schedule.slots.size(); ++i) {
    const Slot& slot = schedule.slots[i];
    const auto user = std::find_if(users.begin(), users.end(),
                                   [&](const UserParams& u) { return u.id == slot.user_id; });
    if (user == users.end()) {
      throw ModelError("check_feasible: unknown user id " + std::to_string(slot.user_id));
    }
    if (++appearances[slot.user_id] == 2) {
      violations.push_back({ViolationKind::DuplicateUser, slot.user_id, 1.0});
    }

    const double start = schedule.slot_start(i);
    const double end = start + slot.tau;
    if (slot.tau < -tol) violations.push_back({ViolationKind::NegativeTau, slot.user_id, -slot.tau});
    if (slot.power < -tol) violations.push_back({ViolationKind::NegativePower, slot.user_id, -slot.power});
    if (slot.tau <= 0.0 && slot.power > tol) {
      violations.push_back({ViolationKind::PowerWithoutTime, slot.user_id, slot.power});
    }
    if (slot.tau > 0.0 && slot.power > sys.max_power + tol) {
      violations.push_back({ViolationKind::MaxPower, slot.user_id, slot.power - sys.max_power});
    }
    // Harvesting runs from the start of the frame until the end of the slot.
    const double harvested = user->eta * user->h * sys.hap_power * end;
    const double excess = slot.power * slot.tau - (user->battery + harvested);
    if (excess > tol) violations.push_back({ViolationKind::EnergyCausality, slot.user_id, excess});
  }

  const double frame_end = schedule.slots.empty()
                               ? schedule.idle_prefix
                               : schedule.slot_start(schedule.slots.size() - 1) + schedule.slots.back().tau;
  if (frame_end > sys.frame_length + tol) {
    violations.push_back({ViolationKind::FrameLength, 0, frame_end - sys.frame_length});
  }
  return violations;
}

ConditionReport check_optimality_conditions(const Schedule& schedule, std::span<const UserParams> users,
                                            const SystemParams& sys, double tol) {
  ConditionReport report;
  auto note = [&report](const std::string& text) { report.findings.push_back(text); };

  if (schedule.idle_prefix > tol) {
    report.no_idle_prefix = false;
    note("idle prefix " + std::to_string(schedule.idle_prefix) + " > 0");
  }
  const double total = schedule.total_time();
  if (std::abs(total - sys.frame_length) > tol) {
    report.full_frame = false;
    note("frame not fully used: total time " + std::to_string(total));
  }

  std::map<std::size_t, double> active_tau;
  for (std::size_t i = 0; i < schedule.slots.size(); ++i) {
    const Slot& slot = schedule.slots[i];
    if (slot.tau <= tol) continue;
    active_tau[slot.user_id] = slot.tau;
    const UserParams& user = find_user(users, slot.user_id);
    const double end = schedule.slot_start(i) + slot.tau;
    const double available = user.battery + harvest_rate(user, sys) * end;
    const double slack = available - slot.power * slot.tau;
    // Relative: per-slot energies are often far below one joule.
    if (slot.power < sys.max_power * (1.0 - tol) && slack > tol * available) {
      report.power_or_energy_tight = false;
      std::ostringstream os;
      os << "user " << slot.user_id << " below P_max (" << slot.power << ") with energy slack " << slack;
      note(os.str());
    }
  }

  double best_k = 0.0;
  for (const auto& user : users) best_k = std::max(best_k, snr_coefficient(user, sys));
  bool top_active = false;
  for (const auto& user : users) {
    const double k = snr_coefficient(user, sys);
    const bool active = active_tau.contains(user.id);
    if (k == best_k && active) top_active = true;
    if (active) continue;
    for (const auto& other : users) {
      if (active_tau.contains(other.id) && snr_coefficient(other, sys) < k) {
        report.support_monotone = false;
        note("idle user " + std::to_string(user.id) + " has higher r^max than active user " +
             std::to_string(other.id));
      }
    }
  }
  if (!users.empty() && !top_active) {
    report.max_rate_user_active = false;
    note("no maximum-r^max user is active");
  }
  return report;
}

Schedule fold_idle_prefix(const Schedule& schedule) {
  Schedule folded = schedule;
  if (folded.slots.empty() || folded.idle_prefix <= 0.0) return folded;
  Slot& first = folded.slots.front();
  const double energy = first.power * first.tau;
  first.tau += folded.idle_prefix;
  first.power = energy / first.tau;
  folded.idle_prefix = 0.0;
  return folded;
}

Schedule extend_to_full_frame(const Schedule& schedule, const SystemParams& sys) {
  Schedule extended = schedule;
  const double unused = sys.frame_length - schedule.total_time();
  if (unused > 0.0) extended.idle_prefix += unused;
  return fold_idle_prefix(extended);
}

}  // namespace wpcn::verifier
