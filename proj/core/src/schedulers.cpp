#include "wpcn/schedulers.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace wpcn::schedulers {

namespace {

struct Link {
  std::size_t id;
  double battery;
  double harvest;
  double k;
};

Link link_of(const UserParams& user, const SystemParams& sys) {
  return {user.id, user.battery, harvest_rate(user, sys), snr_coefficient(user, sys)};
}

double slot_bits(const Slot& slot, const Link& link, const SystemParams& sys) {
  return rate(slot.tau, slot.power, link.k, sys.bandwidth);
}

double power_for(double energy, double tau) { return tau > 0.0 ? energy / tau : 0.0; }

void append_if_used(std::vector<Slot>& slots, const Slot& slot) {
  if (slot.tau > 0.0) slots.push_back(slot);
}

void require_users(std::span<const UserParams> users, const SystemParams& sys) {
  if (users.empty()) throw ModelError("scheduler: at least one user is required");
  sys.validate();
  for (const auto& user : users) user.validate();
}

}  // namespace

Result mfsa(std::span<const UserParams> users, const SystemParams& sys) {
  require_users(users, sys);
  const double p_max = sys.max_power;

  std::vector<Link> links;
  for (std::size_t index : order_by_max_rate(users, sys)) links.push_back(link_of(users[index], sys));

  Result result;
  std::vector<Slot> tail;  // committed from the end of the frame backwards
  std::vector<Slot> head;  // final allocation at the start of the frame, in time order
  double available = sys.frame_length;

  if (links.size() == 1) {
    const Link& u = links.front();
    head.push_back({u.id, available, std::min(p_max, power_for(u.battery + u.harvest * available, available))});
  }

  for (std::size_t i = 0; i + 1 < links.size(); ++i) {
    const Link& u = links[i];
    const Link& v = links[i + 1];
    const double energy_u = u.battery + u.harvest * available;
    const double tau_min = energy_u / p_max;

    if (tau_min >= available) {
      head.push_back({u.id, available, p_max});
      break;
    }

    PairEvaluation evaluation;
    evaluation.available_time = available;

    // Case 1: u at P_max for tau_min; v takes the rest with its own-slot harvest.
    {
      PairwiseCase& c = evaluation.cases[0];
      c.case_id = 1;
      c.higher = {u.id, tau_min, p_max};
      const double tau_v = available - tau_min;
      c.lower = {v.id, tau_v, std::min(power_for(v.battery + v.harvest * tau_v, tau_v), p_max)};
    }
    // Case 2: v at P_max for as long as it can sustain it; u takes the rest.
    {
      PairwiseCase& c = evaluation.cases[1];
      c.case_id = 2;
      const double room = available - tau_min;
      const double sustainable = p_max > v.harvest ? v.battery / (p_max - v.harvest)
                                                   : std::numeric_limits<double>::infinity();
      const double tau_v = std::min(sustainable, room);
      const double tau_u = available - tau_v;
      c.lower = {v.id, tau_v, tau_v > 0.0 ? p_max : 0.0};
      c.higher = {u.id, tau_u, std::min(power_for(energy_u, tau_u), p_max)};
    }
    // Case 3: u alone for the whole remaining time.
    {
      PairwiseCase& c = evaluation.cases[2];
      c.case_id = 3;
      c.higher = {u.id, available, power_for(energy_u, available)};
      c.lower = {v.id, 0.0, 0.0};
    }

    for (auto& c : evaluation.cases) {
      c.pair_throughput = slot_bits(c.higher, u, sys) + slot_bits(c.lower, v, sys);
    }
    const auto best = std::max_element(
        evaluation.cases.begin(), evaluation.cases.end(),
        [](const PairwiseCase& a, const PairwiseCase& b) { return a.pair_throughput < b.pair_throughput; });
    evaluation.chosen = best->case_id;
    result.pair_evaluations.push_back(evaluation);

    if (best->case_id == 2) {
      append_if_used(head, best->lower);
      append_if_used(head, best->higher);
      break;
    }
    if (best->case_id == 3) {
      append_if_used(head, best->higher);
      break;
    }
    tail.push_back(best->higher);
    available -= best->higher.tau;
    if (i + 2 == links.size()) append_if_used(head, best->lower);
  }

  result.schedule.slots = std::move(head);
  for (auto it = tail.rbegin(); it != tail.rend(); ++it) append_if_used(result.schedule.slots, *it);
  result.report = evaluate(result.schedule, users, sys);
  return result;
}

Result eta(std::span<const UserParams> users, const SystemParams& sys) {
  require_users(users, sys);

  std::vector<Link> links;
  for (const auto& user : users) links.push_back(link_of(user, sys));
  std::stable_sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
    if (a.k != b.k) return a.k < b.k;
    return a.id < b.id;
  });

  const auto n = static_cast<double>(links.size());
  const double share = sys.frame_length / n;
  Result result;
  double elapsed = 0.0;
  for (std::size_t m = 0; m < links.size(); ++m) {
    // The last slot closes the frame exactly.
    const double tau = m + 1 == links.size() ? sys.frame_length - elapsed : share;
    elapsed += tau;
    const Link& link = links[m];
    const double energy = link.battery + link.harvest * elapsed;
    result.schedule.slots.push_back({link.id, tau, std::min(sys.max_power, power_for(energy, tau))});
  }
  result.report = evaluate(result.schedule, users, sys);
  return result;
}

}  // namespace wpcn::schedulers
