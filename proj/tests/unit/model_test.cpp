#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wpcn/model.hpp"

namespace wpcn {
namespace {

// W = 1, N_o W + beta P_h = 1, so k equals g and C equals h.
SystemParams unit_system(double max_power = 2.0) {
  SystemParams sys;
  sys.hap_power = 1.0;
  sys.max_power = max_power;
  sys.bandwidth = 1.0;
  sys.noise_psd = 1.0;
  sys.beta = 0.0;
  return sys;
}

UserParams user(std::size_t id, double k, double battery, double harvest) {
  return {id, k, harvest, 1.0, battery};
}

TEST(HarvestRate, ProductOfEfficiencyGainAndHapPower) {
  SystemParams sys;
  sys.hap_power = 1.0;
  EXPECT_DOUBLE_EQ(harvest_rate({1, 1e-6, 0.001, 1.0, 0.0}, sys), 0.001);
  sys.hap_power = 3.0;
  EXPECT_NEAR(harvest_rate({1, 1e-6, 2e-3, 0.5, 0.0}, sys), 3e-3, 1e-18);
}

TEST(HarvestRate, ZeroHapPowerHarvestsNothing) {
  SystemParams sys;
  sys.hap_power = 0.0;
  EXPECT_EQ(harvest_rate({1, 1e-6, 0.42, 1.0, 0.0}, sys), 0.0);
}

TEST(SnrCoefficient, DividesByNoisePlusSelfInterference) {
  SystemParams sys;
  sys.bandwidth = 1.0;
  sys.noise_psd = 1e-7;
  sys.hap_power = 1.0;
  sys.beta = 1e-7;
  EXPECT_NEAR(snr_coefficient({1, 2e-6, 1e-3, 1.0, 0.0}, sys), 10.0, 1e-12);
  sys.noise_psd = 0.0;
  EXPECT_NEAR(snr_coefficient({1, 1e-6, 1e-3, 1.0, 0.0}, sys), 10.0, 1e-12);
}

TEST(SnrCoefficient, LinearInUplinkGain) {
  const SystemParams sys;
  const double k1 = snr_coefficient({1, 1e-9, 1e-3, 1.0, 0.0}, sys);
  const double k2 = snr_coefficient({1, 3e-9, 1e-3, 1.0, 0.0}, sys);
  EXPECT_NEAR(k2 / k1, 3.0, 1e-12);
}

TEST(SnrCoefficient, ZeroDenominatorThrows) {
  SystemParams sys;
  sys.noise_psd = 0.0;
  sys.beta = 0.0;
  EXPECT_THROW((void)snr_coefficient({1, 1e-6, 1e-3, 1.0, 0.0}, sys), ModelError);
}

TEST(Rate, HandValues) {
  EXPECT_DOUBLE_EQ(rate(1.0, 1.0, 1.0, 1.0), 1.0);
  EXPECT_EQ(rate(0.5, 0.0, 7.0, 1e6), 0.0);
  EXPECT_NEAR(rate(0.3, 1.0, 10.0, 1.0), 1.0378294855911891, 1e-12);
}

TEST(Rate, ZeroSlotIsZeroWhateverThePower) {
  EXPECT_EQ(rate(0.0, 1e3, 1e9, 1e6), 0.0);
}

TEST(MaxRate, HandValueAndMonotoneInGain) {
  SystemParams sys = unit_system(1.0);
  EXPECT_NEAR(max_rate(user(1, 10.0, 0.0, 0.1), sys), 3.4594316186372973, 1e-12);
  EXPECT_LT(max_rate(user(1, 0.999 * 10.0, 0.0, 0.1), sys), max_rate(user(1, 10.0, 0.0, 0.1), sys));
}

TEST(MaxRate, ArgmaxMatchesArgmaxOfSnrCoefficient) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> gain(1e-9, 1e-5);
  const SystemParams sys;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<UserParams> users;
    for (std::size_t i = 1; i <= 5; ++i) users.push_back({i, gain(rng), 1e-3, 1.0, 0.0});
    std::size_t best_k = 0, best_r = 0;
    for (std::size_t i = 1; i < users.size(); ++i) {
      if (snr_coefficient(users[i], sys) > snr_coefficient(users[best_k], sys)) best_k = i;
      if (max_rate(users[i], sys) > max_rate(users[best_r], sys)) best_r = i;
    }
    EXPECT_EQ(best_k, best_r);
    EXPECT_EQ(order_by_max_rate(users, sys).front(), best_k);
  }
}

TEST(OrderByMaxRate, TiesGoToLowerId) {
  const SystemParams sys = unit_system();
  const std::vector<UserParams> users{user(3, 1.0, 0, 1), user(1, 2.0, 0, 1), user(2, 1.0, 0, 1)};
  const auto order = order_by_max_rate(users, sys);
  ASSERT_EQ(order.size(), 3u);
  EXPECT_EQ(users[order[0]].id, 1u);
  EXPECT_EQ(users[order[1]].id, 2u);
  EXPECT_EQ(users[order[2]].id, 3u);
}

TEST(Evaluate, SingleUserClosedForm) {
  const SystemParams sys = unit_system();
  const std::vector<UserParams> users{user(1, 1.0, 0.5, 0.5)};
  Schedule schedule;
  schedule.slots.push_back({1, 1.0, 1.0});
  const auto report = evaluate(schedule, users, sys);
  EXPECT_TRUE(report.feasible);
  EXPECT_TRUE(report.violations.empty());
  EXPECT_NEAR(report.sum_throughput, 1.0, 1e-12);
}

TEST(Evaluate, EmptyScheduleIsFeasibleWithZeroThroughput) {
  const SystemParams sys = unit_system();
  const std::vector<UserParams> users{user(1, 1.0, 0.5, 0.5)};
  const auto report = evaluate(Schedule{}, users, sys);
  EXPECT_TRUE(report.feasible);
  EXPECT_EQ(report.sum_throughput, 0.0);
}

TEST(Evaluate, OverspendingReportsEnergyCausalityMagnitude) {
  const SystemParams sys = unit_system();
  const std::vector<UserParams> users{user(1, 1.0, 0.5, 0.5)};
  Schedule schedule;
  schedule.slots.push_back({1, 1.0, 1.1});
  const auto report = evaluate(schedule, users, sys);
  EXPECT_FALSE(report.feasible);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, ViolationKind::EnergyCausality);
  EXPECT_EQ(report.violations[0].user_id, 1u);
  EXPECT_NEAR(report.violations[0].magnitude, 0.1, 1e-12);
}

TEST(Evaluate, IdlePrefixCountsAsHarvestingTime) {
  const SystemParams sys = unit_system();
  const std::vector<UserParams> users{user(1, 1.0, 0.0, 1.0)};
  Schedule schedule;
  schedule.idle_prefix = 0.5;
  // Consumes 0.9 * 0.5 = 0.45 <= harvested 1.0 * 1.0.
  schedule.slots.push_back({1, 0.5, 0.9});
  EXPECT_TRUE(evaluate(schedule, users, sys).feasible);
}

TEST(Evaluate, UnknownUserThrows) {
  const SystemParams sys = unit_system();
  const std::vector<UserParams> users{user(1, 1.0, 0.5, 0.5)};
  Schedule schedule;
  schedule.slots.push_back({7, 0.5, 0.1});
  EXPECT_THROW((void)evaluate(schedule, users, sys), ModelError);
}

TEST(Evaluate, SumEqualsSlotwiseRates) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const SystemParams sys = unit_system(1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<UserParams> users;
    Schedule schedule;
    double expected = 0.0;
    for (std::size_t i = 1; i <= 4; ++i) {
      users.push_back(user(i, 10.0 * unit(rng), unit(rng), unit(rng)));
      const double tau = 0.25 * unit(rng);
      const double power = unit(rng);
      schedule.slots.push_back({i, tau, power});
      expected += rate(tau, power, users.back().g, 1.0);
    }
    const auto report = evaluate(schedule, users, sys);
    EXPECT_NEAR(report.sum_throughput, expected, 1e-12);
    double per_user = 0.0;
    for (const auto& r : report.per_user_rate) per_user += r.bits;
    EXPECT_NEAR(report.sum_throughput, per_user, 1e-12);
  }
}

// Rate as a function of (tau, energy) is jointly concave.
TEST(Rate, JointlyConcaveInTimeAndEnergy) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double k = 25.0;
  auto f = [&](double tau, double energy) { return tau > 0.0 ? rate(tau, energy / tau, k, 1.0) : 0.0; };
  for (int trial = 0; trial < 10000; ++trial) {
    const double t1 = unit(rng), e1 = unit(rng), t2 = unit(rng), e2 = unit(rng), lambda = unit(rng);
    const double mixed = f(lambda * t1 + (1 - lambda) * t2, lambda * e1 + (1 - lambda) * e2);
    EXPECT_GE(mixed, lambda * f(t1, e1) + (1 - lambda) * f(t2, e2) - 1e-9);
  }
}

// Moving a slot later, lengths fixed, never shrinks its energy slack.
TEST(Evaluate, LaterSlotHasNoLessEnergySlack) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const SystemParams sys = unit_system(10.0);
  auto overspend = [&](const Schedule& s, const std::vector<UserParams>& users) {
    for (const auto& v : evaluate(s, users, sys).violations) {
      if (v.kind == ViolationKind::EnergyCausality && v.user_id == 1) return v.magnitude;
    }
    return 0.0;
  };
  for (int trial = 0; trial < 500; ++trial) {
    const std::vector<UserParams> users{user(1, 1.0, 0.1 * unit(rng), unit(rng)),
                                        user(2, 1.0, 0.1 * unit(rng), unit(rng))};
    const double t1 = 0.5 * unit(rng), t2 = 0.5 * unit(rng), p1 = 3.0 * unit(rng);
    Schedule earlier, later;
    earlier.slots = {{1, t1, p1}, {2, t2, 0.0}};
    later.slots = {{2, t2, 0.0}, {1, t1, p1}};
    EXPECT_LE(overspend(later, users), overspend(earlier, users) + 1e-12);
    if (evaluate(earlier, users, sys).feasible) {
      EXPECT_TRUE(evaluate(later, users, sys).feasible);
    }
  }
}

TEST(Validate, RejectsOutOfRangeParameters) {
  SystemParams sys;
  sys.max_power = 0.0;
  EXPECT_THROW(sys.validate(), ModelError);
  sys = SystemParams{};
  sys.beta = 1.5;
  EXPECT_THROW(sys.validate(), ModelError);
  sys = SystemParams{};
  sys.frame_length = 2.0;
  EXPECT_THROW(sys.validate(), ModelError);

  EXPECT_THROW((UserParams{1, 0.0, 1e-3, 1.0, 0.0}.validate()), ModelError);
  EXPECT_THROW((UserParams{1, 1e-6, 1e-3, 0.0, 0.0}.validate()), ModelError);
  EXPECT_THROW((UserParams{1, 1e-6, 1e-3, 1.0, -1.0}.validate()), ModelError);
  EXPECT_NO_THROW((UserParams{1, 1e-6, 1e-3, 1.0, 0.0}.validate()));
}

}  // namespace
}  // namespace wpcn
