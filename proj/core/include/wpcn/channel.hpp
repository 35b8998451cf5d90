#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wpcn/model.hpp"

namespace wpcn {

using Rng = std::mt19937_64;

/// Log-distance path loss with log-normal shadowing.
struct PathLossParams {
  double d0 = 1.0;       // reference distance, m
  double pl_d0 = 30.0;   // path loss at d0, dB
  double alpha = 2.76;   // path-loss exponent
  double sigma = 4.0;    // shadowing standard deviation, dB

  void validate() const;
};

struct BatteryModel {
  enum class Kind { Constant, Uniform };
  Kind kind = Kind::Constant;
  double value = 0.0;  // Constant
  double min = 0.0;    // Uniform
  double max = 0.0;

  void validate() const;
};

struct TopologyParams {
  std::size_t n_users = 6;
  double d_min = 1.0;
  double d_max = 10.0;
  double eta = 1.0;  // harvesting efficiency shared by every user
  BatteryModel battery;

  void validate() const;
};

struct NetworkInstance {
  SystemParams sys;
  std::vector<UserParams> users;
  std::uint64_t seed = 0;

  friend bool operator==(const NetworkInstance&, const NetworkInstance&) = default;
};

bool operator==(const SystemParams& a, const SystemParams& b);
bool operator==(const UserParams& a, const UserParams& b);

/// PL(d) = PL(d0) + 10 alpha log10(d / d0) + z, in dB.
[[nodiscard]] double path_loss_db(double d, const PathLossParams& p, double shadowing_db);

/// Rayleigh-faded power gain at distance d with the given shadowing draw:
/// exponential with mean 10^(-PL(d)/10).
[[nodiscard]] double draw_gain(double d, const PathLossParams& p, double shadowing_db, Rng& rng);

/// Same, with a fresh shadowing draw Z ~ N(0, sigma^2).
[[nodiscard]] double draw_gain(double d, const PathLossParams& p, Rng& rng);

/// One random network. Users are drawn one at a time (distance, uplink gain,
/// downlink gain, battery), so a smaller network is a prefix of a larger one
/// generated from the same seed.
[[nodiscard]] NetworkInstance generate(const TopologyParams& topo, const SystemParams& sys,
                                       const PathLossParams& plp, std::uint64_t seed);

}  // namespace wpcn
