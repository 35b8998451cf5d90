#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wpcn {

/// Absolute tolerance applied to every constraint check unless overridden.
inline constexpr double kFeasibilityTolerance = 1e-9;

class ModelError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Network-wide constants. Time is normalised to one scheduling frame, so an
/// energy expressed per frame is numerically a power.
struct SystemParams {
  double hap_power = 1.0;        // P_h, watts
  double max_power = 5e-3;       // P_max, watts
  double bandwidth = 1e6;        // W, hertz
  double noise_psd = 3.981e-21;  // N_o, watts/hertz (-174 dBm/Hz)
  double beta = 4e-16;           // residual self-interference coefficient
  double frame_length = 1.0;     // fixed

  /// Throws ModelError naming the first offending field.
  void validate() const;
};

struct UserParams {
  std::size_t id = 0;    // 1-based user index
  double g = 0.0;        // uplink gain (linear)
  double h = 0.0;        // downlink gain (linear)
  double eta = 1.0;      // harvesting efficiency
  double battery = 0.0;  // initial energy B_i

  void validate() const;
};

struct Slot {
  std::size_t user_id = 0;
  double tau = 0.0;
  double power = 0.0;
};

/// A transmission order with slot lengths and powers. Slots are listed in time
/// order, after an optional idle prefix during which every user only harvests.
struct Schedule {
  double idle_prefix = 0.0;
  std::vector<Slot> slots;

  [[nodiscard]] double total_time() const;
  /// Start time of slot `index` within the frame.
  [[nodiscard]] double slot_start(std::size_t index) const;
};

enum class ViolationKind {
  EnergyCausality,
  MaxPower,
  FrameLength,
  NegativeTau,
  NegativePower,
  PowerWithoutTime,
  DuplicateUser,
};

[[nodiscard]] std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::size_t user_id = 0;  // 0 for frame-wide violations
  double magnitude = 0.0;   // amount by which the constraint is exceeded
};

struct UserRate {
  std::size_t user_id = 0;
  double bits = 0.0;
};

struct ThroughputReport {
  std::vector<UserRate> per_user_rate;
  double sum_throughput = 0.0;  // bits per frame
  bool feasible = true;
  std::vector<Violation> violations;
};

// Physical-layer relations.

/// C_i = eta_i * h_i * P_h.
[[nodiscard]] double harvest_rate(const UserParams& user, const SystemParams& sys);

/// k_i = g_i / (N_o W + beta P_h). Throws ModelError when the denominator is 0.
[[nodiscard]] double snr_coefficient(const UserParams& user, const SystemParams& sys);

/// W * tau * log2(1 + k * power), bits per frame. Zero when tau is zero.
[[nodiscard]] double rate(double tau, double power, double k, double bandwidth);

/// r_i^max = W log2(1 + k_i P_max), bits per second.
[[nodiscard]] double max_rate(const UserParams& user, const SystemParams& sys);

/// Finds a user by id; throws ModelError if absent.
[[nodiscard]] const UserParams& find_user(std::span<const UserParams> users, std::size_t id);

/// Rates, sum throughput and constraint violations of `schedule`.
/// Energy causality includes harvesting during the user's own slot.
[[nodiscard]] ThroughputReport evaluate(const Schedule& schedule,
                                        std::span<const UserParams> users,
                                        const SystemParams& sys,
                                        double tol = kFeasibilityTolerance);

/// Indices into `users` sorted by r^max descending, ties by ascending id.
[[nodiscard]] std::vector<std::size_t> order_by_max_rate(std::span<const UserParams> users,
                                                         const SystemParams& sys);

}  // namespace wpcn
