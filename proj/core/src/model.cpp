#include "wpcn/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace wpcn {

namespace {

void require(bool condition, const char* field, const char* rule) {
  if (!condition) {
    throw ModelError(std::string(field) + ": " + rule);
  }
}

}  // namespace

void SystemParams::validate() const {
  require(std::isfinite(hap_power) && hap_power > 0.0, "system.hap_power", "must be > 0");
  require(std::isfinite(max_power) && max_power > 0.0, "system.max_power", "must be > 0");
  require(std::isfinite(bandwidth) && bandwidth > 0.0, "system.bandwidth", "must be > 0");
  require(std::isfinite(noise_psd) && noise_psd >= 0.0, "system.noise_psd", "must be >= 0");
  require(beta >= 0.0 && beta <= 1.0, "system.beta", "must lie in [0, 1]");
  require(frame_length == 1.0, "system.frame_length", "must equal 1");
}

void UserParams::validate() const {
  require(id >= 1, "user.id", "must be >= 1");
  require(std::isfinite(g) && g > 0.0, "user.g", "must be > 0");
  require(std::isfinite(h) && h > 0.0, "user.h", "must be > 0");
  require(eta > 0.0 && eta <= 1.0, "user.eta", "must lie in (0, 1]");
  require(std::isfinite(battery) && battery >= 0.0, "user.battery", "must be >= 0");
}

double Schedule::total_time() const {
  double total = idle_prefix;
  for (const auto& slot : slots) total += slot.tau;
  return total;
}

double Schedule::slot_start(std::size_t index) const {
  double start = idle_prefix;
  for (std::size_t i = 0; i < index && i < slots.size(); ++i) start += slots[i].tau;
  return start;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::EnergyCausality: return "energy_causality";
    case ViolationKind::MaxPower: return "max_power";
    case ViolationKind::FrameLength: return "frame_length";
    case ViolationKind::NegativeTau: return "negative_tau";
    case ViolationKind::NegativePower: return "negative_power";
    case ViolationKind::PowerWithoutTime: return "power_without_time";
    case ViolationKind::DuplicateUser: return "duplicate_user";
  }
  return "unknown";
}

double harvest_rate(const UserParams& user, const SystemParams& sys) {
  return user.eta * user.h * sys.hap_power;
}

double snr_coefficient(const UserParams& user, const SystemParams& sys) {
  const double denominator = sys.noise_psd * sys.bandwidth + sys.beta * sys.hap_power;
  if (!(denominator > 0.0)) {
    throw ModelError("snr_coefficient: N_o*W + beta*P_h is zero (noiseless, interference-free channel)");
  }
  return user.g / denominator;
}

double rate(double tau, double power, double k, double bandwidth) {
  if (tau == 0.0) return 0.0;
  return bandwidth * tau * std::log2(1.0 + k * power);
}

double max_rate(const UserParams& user, const SystemParams& sys) {
  return sys.bandwidth * std::log2(1.0 + snr_coefficient(user, sys) * sys.max_power);
}

const UserParams& find_user(std::span<const UserParams> users, std::size_t id) {
  const auto it = std::find_if(users.begin(), users.end(),
                               [id](const UserParams& u) { return u.id == id; });
  if (it == users.end()) {
    throw ModelError("unknown user id " + std::to_string(id));
  }
  return *it;
}

ThroughputReport evaluate(const Schedule& schedule, std::span<const UserParams> users,
                          const SystemParams& sys, double tol) {
  ThroughputReport report;
  std::set<std::size_t> seen;

  if (schedule.idle_prefix < -tol) {
    report.violations.push_back({ViolationKind::NegativeTau, 0, -schedule.idle_prefix});
  }

  double elapsed = schedule.idle_prefix;
  for (const auto& slot : schedule.slots) {
    const UserParams& user = find_user(users, slot.user_id);
    if (!seen.insert(slot.user_id).second) {
      report.violations.push_back({ViolationKind::DuplicateUser, slot.user_id, 1.0});
    }
    elapsed += slot.tau;

    if (slot.tau < -tol) {
      report.violations.push_back({ViolationKind::NegativeTau, slot.user_id, -slot.tau});
    }
    if (slot.power < -tol) {
      report.violations.push_back({ViolationKind::NegativePower, slot.user_id, -slot.power});
    }
    if (slot.tau <= 0.0 && slot.power > tol) {
      report.violations.push_back({ViolationKind::PowerWithoutTime, slot.user_id, slot.power});
    }
    if (slot.tau > 0.0 && slot.power - sys.max_power > tol) {
      report.violations.push_back({ViolationKind::MaxPower, slot.user_id, slot.power - sys.max_power});
    }
    const double available = user.battery + harvest_rate(user, sys) * elapsed;
    const double consumed = slot.power * slot.tau;
    if (consumed - available > tol) {
      report.violations.push_back({ViolationKind::EnergyCausality, slot.user_id, consumed - available});
    }

    const double bits = rate(std::max(slot.tau, 0.0), std::max(slot.power, 0.0),
                             snr_coefficient(user, sys), sys.bandwidth);
    report.per_user_rate.push_back({slot.user_id, bits});
  }

  if (elapsed - sys.frame_length > tol) {
    report.violations.push_back({ViolationKind::FrameLength, 0, elapsed - sys.frame_length});
  }

  report.sum_throughput = std::accumulate(
      report.per_user_rate.begin(), report.per_user_rate.end(), 0.0,
      [](double acc, const UserRate& r) { return acc + r.bits; });
  report.feasible = report.violations.empty();
  return report;
}

std::vector<std::size_t> order_by_max_rate(std::span<const UserParams> users,
                                           const SystemParams& sys) {
  std::vector<double> keys(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) keys[i] = snr_coefficient(users[i], sys);
  std::vector<std::size_t> order(users.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // r^max is strictly increasing in k, so sorting on k avoids log rounding ties.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] > keys[b];
    return users[a].id < users[b].id;
  });
  return order;
}

}  // namespace wpcn
