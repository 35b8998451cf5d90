#include <gtest/gtest.h>

#include <numeric>

#include "wpcn/channel.hpp"
#include "wpcn/exhaustive.hpp"
#include "wpcn/schedulers.hpp"
#include "wpcn/verifier.hpp"

namespace wpcn {
namespace {

SystemParams unit_system(double max_power) {
  SystemParams sys;
  sys.hap_power = 1.0;
  sys.max_power = max_power;
  sys.bandwidth = 1.0;
  sys.noise_psd = 1.0;
  sys.beta = 0.0;
  return sys;
}

// With unit_system, g is the SNR coefficient and h the harvest rate.
UserParams user(std::size_t id, double k, double battery, double harvest) {
  return {id, k, harvest, 1.0, battery};
}

NetworkInstance random_network(std::size_t n, std::uint64_t seed, double battery = 0.0) {
  TopologyParams topo;
  topo.n_users = n;
  topo.battery.value = battery;
  return generate(topo, SystemParams{}, PathLossParams{}, seed);
}

TEST(Mfsa, WholeFrameWhenTopUserCanSustainMaxPower) {
  const SystemParams sys = unit_system(1.2);
  const std::vector<UserParams> single{user(1, 3.0, 1.0, 0.5)};
  const auto a = schedulers::mfsa(single, sys);
  ASSERT_EQ(a.schedule.slots.size(), 1u);
  EXPECT_EQ(a.schedule.slots[0].user_id, 1u);
  EXPECT_DOUBLE_EQ(a.schedule.slots[0].tau, 1.0);
  EXPECT_DOUBLE_EQ(a.schedule.slots[0].power, 1.2);
  EXPECT_TRUE(a.report.feasible);

  // A weaker second user changes nothing: the top user needs 1.25 > 1 frame at P_max.
  const std::vector<UserParams> pair{user(2, 1.0, 0.1, 0.1), user(1, 3.0, 1.0, 0.5)};
  const auto b = schedulers::mfsa(pair, sys);
  ASSERT_EQ(b.schedule.slots.size(), 1u);
  EXPECT_EQ(b.schedule.slots[0].user_id, 1u);
  EXPECT_DOUBLE_EQ(b.schedule.slots[0].tau, 1.0);
  EXPECT_DOUBLE_EQ(b.schedule.slots[0].power, 1.2);
  EXPECT_TRUE(b.pair_evaluations.empty());
}

TEST(Mfsa, TwoUserHandExample) {
  const SystemParams sys = unit_system(1.0);
  const std::vector<UserParams> users{user(1, 10.0, 0.2, 0.1), user(2, 1.0, 0.1, 0.1)};
  const auto result = schedulers::mfsa(users, sys);

  ASSERT_EQ(result.pair_evaluations.size(), 1u);
  const auto& eval = result.pair_evaluations[0];
  EXPECT_DOUBLE_EQ(eval.available_time, 1.0);
  EXPECT_NEAR(eval.cases[0].higher.tau, 0.3, 1e-15);
  EXPECT_NEAR(eval.cases[0].pair_throughput, 1.2573918208238226, 1e-12);
  EXPECT_NEAR(eval.cases[1].pair_throughput, 2.0038071261733035, 1e-12);
  EXPECT_NEAR(eval.cases[2].pair_throughput, 2.0, 1e-12);
  EXPECT_EQ(eval.chosen, 2);

  ASSERT_EQ(result.schedule.slots.size(), 2u);
  const Slot& first = result.schedule.slots[0];
  const Slot& second = result.schedule.slots[1];
  EXPECT_EQ(first.user_id, 2u);
  EXPECT_NEAR(first.tau, 0.11111111111111112, 1e-12);
  EXPECT_NEAR(first.power, 1.0, 1e-12);
  EXPECT_EQ(second.user_id, 1u);
  EXPECT_NEAR(second.tau, 0.8888888888888888, 1e-12);
  EXPECT_NEAR(second.power, 0.3375000000000001, 1e-12);
  EXPECT_TRUE(result.report.feasible);
  EXPECT_NEAR(result.report.sum_throughput, 2.0038071261733035, 1e-12);
}

TEST(Mfsa, FeasibleBoundedByOptAndLinear) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t n = 1 + seed % 5;
    const auto net = random_network(n, seed, seed % 3 == 0 ? 5e-4 : 0.0);
    const auto result = schedulers::mfsa(net.users, net.sys);
    EXPECT_TRUE(verifier::check_feasible(result.schedule, net.users, net.sys).empty()) << "seed " << seed;
    EXPECT_LE(result.pair_evaluations.size(), n - 1);
    const auto opt = exhaustive::solve_opt(net.users, net.sys);
    EXPECT_LE(result.report.sum_throughput, opt.report.sum_throughput * (1.0 + 2e-9)) << "seed " << seed;
    EXPECT_NEAR(result.schedule.total_time(), 1.0, 1e-12);
  }
}

TEST(Mfsa, EverySlotAtMaxPowerOrOutOfEnergy) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto net = random_network(2 + seed % 7, seed, seed % 2 ? 1e-4 : 0.0);
    const auto result = schedulers::mfsa(net.users, net.sys);
    double end = result.schedule.idle_prefix;
    for (const auto& slot : result.schedule.slots) {
      end += slot.tau;
      const auto& u = find_user(net.users, slot.user_id);
      const double available = u.battery + harvest_rate(u, net.sys) * end;
      const bool at_max = slot.power >= net.sys.max_power * (1.0 - 1e-12);
      const bool tight = slot.power * slot.tau >= available * (1.0 - 1e-9);
      EXPECT_TRUE(at_max || tight) << "seed " << seed << " user " << slot.user_id;
    }
  }
}

TEST(Mfsa, BeatsEqualTimeOnAverage) {
  double mfsa_total = 0.0, eta_total = 0.0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto net = random_network(6, 5000 + seed);
    mfsa_total += schedulers::mfsa(net.users, net.sys).report.sum_throughput;
    eta_total += schedulers::eta(net.users, net.sys).report.sum_throughput;
  }
  EXPECT_GT(mfsa_total, eta_total);
}

TEST(Mfsa, RejectsEmptyInput) {
  EXPECT_THROW((void)schedulers::mfsa({}, SystemParams{}), ModelError);
  EXPECT_THROW((void)schedulers::eta({}, SystemParams{}), ModelError);
}

TEST(Eta, HandExample) {
  const SystemParams sys = unit_system(1.0);
  const std::vector<UserParams> users{user(1, 2.0, 0.1, 0.2), user(2, 1.0, 0.1, 0.2)};
  const auto result = schedulers::eta(users, sys);
  ASSERT_EQ(result.schedule.slots.size(), 2u);
  // Ascending rate: the weaker user goes first.
  EXPECT_EQ(result.schedule.slots[0].user_id, 2u);
  EXPECT_DOUBLE_EQ(result.schedule.slots[0].tau, 0.5);
  EXPECT_NEAR(result.schedule.slots[0].power, 0.4, 1e-15);
  EXPECT_EQ(result.schedule.slots[1].user_id, 1u);
  EXPECT_DOUBLE_EQ(result.schedule.slots[1].tau, 0.5);
  EXPECT_NEAR(result.schedule.slots[1].power, 0.6, 1e-15);
  EXPECT_TRUE(result.report.feasible);
}

TEST(Eta, SingleUserMatchesMfsa) {
  for (double battery : {0.0, 0.3, 1.0}) {
    const SystemParams sys = unit_system(1.2);
    const std::vector<UserParams> users{user(1, 4.0, battery, 0.5)};
    const auto a = schedulers::eta(users, sys);
    const auto b = schedulers::mfsa(users, sys);
    ASSERT_EQ(a.schedule.slots.size(), 1u);
    ASSERT_EQ(b.schedule.slots.size(), 1u);
    EXPECT_DOUBLE_EQ(a.schedule.slots[0].tau, b.schedule.slots[0].tau);
    EXPECT_DOUBLE_EQ(a.schedule.slots[0].power, b.schedule.slots[0].power);
    EXPECT_DOUBLE_EQ(a.schedule.slots[0].power, std::min(1.2, battery + 0.5));
  }
}

TEST(Eta, FillsTheFrameExactlyAndIsFeasible) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto net = random_network(1 + seed % 13, seed);
    const auto result = schedulers::eta(net.users, net.sys);
    double total = 0.0;
    for (const auto& slot : result.schedule.slots) total += slot.tau;
    EXPECT_EQ(total, 1.0) << "seed " << seed;
    EXPECT_TRUE(verifier::check_feasible(result.schedule, net.users, net.sys).empty());
  }
}

}  // namespace
}  // namespace wpcn
