#include "wpcn/channel.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace wpcn {

namespace {

void require(bool condition, const char* field, const char* rule) {
  if (!condition) throw ModelError(std::string(field) + ": " + rule);
}

}  // namespace

void PathLossParams::validate() const {
  require(std::isfinite(d0) && d0 > 0.0, "path_loss.d0", "must be > 0");
  require(std::isfinite(pl_d0), "path_loss.pl_d0", "must be finite");
  require(std::isfinite(alpha) && alpha > 0.0, "path_loss.alpha", "must be > 0");
  require(std::isfinite(sigma) && sigma >= 0.0, "path_loss.sigma", "must be >= 0");
}

void BatteryModel::validate() const {
  if (kind == Kind::Constant) {
    require(std::isfinite(value) && value >= 0.0, "topology.battery.value", "must be >= 0");
  } else {
    require(std::isfinite(min) && min >= 0.0, "topology.battery.min", "must be >= 0");
    require(std::isfinite(max) && max >= min, "topology.battery.max", "must be >= min");
  }
}

void TopologyParams::validate() const {
  require(n_users >= 1, "topology.n_users", "must be >= 1");
  require(std::isfinite(d_min) && d_min > 0.0, "topology.d_min", "must be > 0");
  require(std::isfinite(d_max) && d_max >= d_min, "topology.d_max", "must be >= d_min");
  require(eta > 0.0 && eta <= 1.0, "topology.eta", "must lie in (0, 1]");
  battery.validate();
}

bool operator==(const SystemParams& a, const SystemParams& b) {
  return a.hap_power == b.hap_power && a.max_power == b.max_power && a.bandwidth == b.bandwidth &&
         a.noise_psd == b.noise_psd && a.beta == b.beta && a.frame_length == b.frame_length;
}

bool operator==(const UserParams& a, const UserParams& b) {
  return a.id == b.id && a.g == b.g && a.h == b.h && a.eta == b.eta && a.battery == b.battery;
}

double path_loss_db(double d, const PathLossParams& p, double shadowing_db) {
  if (d < p.d0) {
    throw ModelError("path_loss_db: distance " + std::to_string(d) +
                     " m is below the reference distance " + std::to_string(p.d0) + " m");
  }
  return p.pl_d0 + 10.0 * p.alpha * std::log10(d / p.d0) + shadowing_db;
}

double draw_gain(double d, const PathLossParams& p, double shadowing_db, Rng& rng) {
  const double mean = std::pow(10.0, -path_loss_db(d, p, shadowing_db) / 10.0);
  // Rayleigh amplitude <=> exponential power.
  std::exponential_distribution<double> fading(1.0);
  return mean * fading(rng);
}

double draw_gain(double d, const PathLossParams& p, Rng& rng) {
  double z = 0.0;
  if (p.sigma > 0.0) {
    std::normal_distribution<double> shadowing(0.0, p.sigma);
    z = shadowing(rng);
  }
  return draw_gain(d, p, z, rng);
}

NetworkInstance generate(const TopologyParams& topo, const SystemParams& sys,
                         const PathLossParams& plp, std::uint64_t seed) {
  topo.validate();
  sys.validate();
  plp.validate();
  if (topo.d_min < plp.d0) {
    throw ModelError("topology.d_min: must be >= path_loss.d0");
  }

  NetworkInstance instance;
  instance.sys = sys;
  instance.seed = seed;
  instance.users.reserve(topo.n_users);

  Rng rng(seed);
  std::uniform_real_distribution<double> distance(topo.d_min, topo.d_max);
  for (std::size_t i = 0; i < topo.n_users; ++i) {
    UserParams user;
    user.id = i + 1;
    const double d = topo.d_min == topo.d_max ? topo.d_min : distance(rng);
    user.g = draw_gain(d, plp, rng);
    user.h = draw_gain(d, plp, rng);
    user.eta = topo.eta;
    if (topo.battery.kind == BatteryModel::Kind::Constant) {
      user.battery = topo.battery.value;
    } else {
      std::uniform_real_distribution<double> battery(topo.battery.min, topo.battery.max);
      user.battery = topo.battery.min == topo.battery.max ? topo.battery.min : battery(rng);
    }
    // An exact zero gain violates the user invariants; exponential draws can
    // underflow to it only with vanishing probability.
    if (user.g <= 0.0) user.g = std::numeric_limits<double>::min();
    if (user.h <= 0.0) user.h = std::numeric_limits<double>::min();
    instance.users.push_back(user);
  }
  return instance;
}

}  // namespace wpcn
