#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "grid_oracle.hpp"
#include "wpcn/channel.hpp"
#include "wpcn/ptap.hpp"
#include "wpcn/verifier.hpp"

namespace wpcn {
namespace {

using testing::grid_oracle;

SystemParams unit_system(double max_power) {
  SystemParams sys;
  sys.hap_power = 1.0;
  sys.max_power = max_power;
  sys.bandwidth = 1.0;
  sys.noise_psd = 1.0;
  sys.beta = 0.0;
  return sys;
}

ptap::Instance random_instance(std::size_t n, std::uint64_t seed, double battery = 0.0) {
  TopologyParams topo;
  topo.n_users = n;
  topo.battery.value = battery;
  const auto net = generate(topo, SystemParams{}, PathLossParams{}, seed);
  return {net.users, net.sys};
}

TEST(PtapSolve, SingleUserClosedForm) {
  const ptap::Instance inst{{{1, 1.0, 0.5, 1.0, 0.5}}, unit_system(2.0)};
  const auto sol = ptap::solve(inst, 1e-9);
  ASSERT_EQ(sol.taus.size(), 1u);
  EXPECT_NEAR(sol.taus[0], 1.0, 1e-9);
  EXPECT_NEAR(sol.powers[0], 1.0, 1e-9);
  EXPECT_NEAR(sol.objective, 1.0, 1e-9);

  const auto oracle = grid_oracle(inst, 1e-3);
  EXPECT_NEAR(oracle.objective, 1.0, oracle.resolution_bound + 1e-12);
}

TEST(PtapSolve, NoEnergyGivesZeroThroughput) {
  // Harvest rate is as close to zero as the type allows.
  const ptap::Instance inst{{{1, 1.0, 1e-300, 1.0, 0.0}}, unit_system(2.0)};
  const auto sol = ptap::solve(inst, 1e-9);
  EXPECT_NEAR(sol.objective, 0.0, 1e-12);
  const auto schedule = ptap::to_schedule(inst, sol);
  EXPECT_TRUE(evaluate(schedule, inst.ordered_users, inst.sys).feasible);
}

TEST(PtapSolve, MatchesGridOracleOnTwoUsers) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = random_instance(2, seed);
    const auto sol = ptap::solve(inst, 1e-9);
    const auto oracle = grid_oracle(inst, 1e-3);
    EXPECT_NEAR(sol.objective, oracle.objective,
                std::max(1e-3 * oracle.objective, oracle.resolution_bound))
        << "seed " << seed;
    EXPECT_GE(sol.objective, oracle.objective - oracle.resolution_bound) << "seed " << seed;
    EXPECT_LE(oracle.objective, sol.objective + sol.gap_certificate + 1e-6) << "seed " << seed;
  }
}

TEST(PtapSolve, MatchesGridOracleOnThreeUsersWithBatteries) {
  for (std::uint64_t seed = 100; seed < 106; ++seed) {
    const auto inst = random_instance(3, seed, 2e-4);
    const auto sol = ptap::solve(inst, 1e-9);
    const auto oracle = grid_oracle(inst, 2e-3);
    EXPECT_GE(sol.objective, oracle.objective - oracle.resolution_bound) << "seed " << seed;
    EXPECT_LE(oracle.objective, sol.objective + sol.gap_certificate + 1e-6) << "seed " << seed;
  }
}

TEST(PtapSolve, SolutionProperties) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto inst = random_instance(1 + seed % 6, seed, seed % 2 ? 0.0 : 1e-4);
    const auto sol = ptap::solve(inst, 1e-9);
    const double total = std::accumulate(sol.taus.begin(), sol.taus.end(), 0.0);
    EXPECT_NEAR(total, 1.0, 1e-9);
    EXPECT_GE(sol.gap_certificate, 0.0);
    EXPECT_LE(sol.gap_certificate, 1e-9 * sol.objective * (1.0 + 1e-6));
    double elapsed = 0.0;
    for (std::size_t i = 0; i < sol.taus.size(); ++i) {
      elapsed += sol.taus[i];
      const auto& u = inst.ordered_users[i];
      if (sol.taus[i] == 0.0) {
        EXPECT_EQ(sol.powers[i], 0.0);
        continue;
      }
      EXPECT_NEAR(sol.powers[i], sol.energies[i] / sol.taus[i], 1e-12 * inst.sys.max_power);
      const double slack = u.battery + harvest_rate(u, inst.sys) * elapsed - sol.energies[i];
      const bool at_max_power = sol.powers[i] >= inst.sys.max_power - 1e-6;
      EXPECT_TRUE(at_max_power || slack <= 1e-6) << "seed " << seed << " slot " << i;
    }
    const auto schedule = ptap::to_schedule(inst, sol);
    const auto report = evaluate(schedule, inst.ordered_users, inst.sys);
    EXPECT_TRUE(report.feasible) << "seed " << seed;
    EXPECT_NEAR(report.sum_throughput, sol.objective, 1e-9 * sol.objective);
  }
}

TEST(PtapSolve, ObjectiveIsConcaveAlongFeasibleSegments) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto inst = random_instance(4, 77, 1e-4);
  auto random_point = [&](std::vector<double>& taus, std::vector<double>& energies) {
    taus.assign(4, 0.0);
    energies.assign(4, 0.0);
    double sum = 0.0;
    for (auto& t : taus) sum += (t = unit(rng));
    double elapsed = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      taus[i] /= sum;
      elapsed += taus[i];
      const auto& u = inst.ordered_users[i];
      const double cap = std::min(inst.sys.max_power * taus[i], u.battery + harvest_rate(u, inst.sys) * elapsed);
      energies[i] = cap * unit(rng);
    }
  };
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> ta, ea, tb, eb;
    random_point(ta, ea);
    random_point(tb, eb);
    std::vector<double> tm(4), em(4);
    for (std::size_t i = 0; i < 4; ++i) {
      tm[i] = 0.5 * (ta[i] + tb[i]);
      em[i] = 0.5 * (ea[i] + eb[i]);
    }
    const double fa = ptap::perspective_objective(inst, ta, ea);
    const double fb = ptap::perspective_objective(inst, tb, eb);
    EXPECT_GE(ptap::perspective_objective(inst, tm, em), 0.5 * (fa + fb) - 1e-9 * (fa + fb));
  }
}

// Scaling every energy quantity (B, C, P_max) by c scales energies by c and keeps slot lengths.
TEST(PtapSolve, EnergyScalingKeepsSlotLengths) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto base = random_instance(2, seed, 1e-4);
    for (double c : {0.25, 4.0}) {
      ptap::Instance scaled = base;
      scaled.sys.max_power *= c;
      for (auto& u : scaled.ordered_users) {
        u.h *= c;
        u.battery *= c;
      }
      const auto a = grid_oracle(base, 1e-3);
      const auto b = grid_oracle(scaled, 1e-3);
      for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(a.taus[i], b.taus[i], 1e-3) << "seed " << seed << " c " << c;
      }
      const auto sa = ptap::solve(base, 1e-10);
      const auto sb = ptap::solve(scaled, 1e-10);
      for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(sa.taus[i], sb.taus[i], 1e-4) << "seed " << seed << " c " << c;
        EXPECT_NEAR(sb.energies[i], c * sa.energies[i], 1e-4 * c * sa.energies[i] + 1e-15);
      }
    }
  }
}

TEST(PtapSolve, RejectsBadInput) {
  const auto inst = random_instance(2, 3);
  EXPECT_THROW((void)ptap::solve(inst, 0.0), ModelError);
  EXPECT_THROW((void)ptap::solve(ptap::Instance{{}, SystemParams{}}, 1e-9), ModelError);
  ptap::Instance duplicate = inst;
  duplicate.ordered_users[1].id = duplicate.ordered_users[0].id;
  EXPECT_THROW((void)ptap::solve(duplicate, 1e-9), ModelError);
}

TEST(PtapSolve, IterationCapRaisesSolverError) {
  ptap::Options options;
  options.max_newton_steps = 2;
  EXPECT_THROW((void)ptap::solve(random_instance(3, 9), options), SolverError);
}

TEST(GridOracle, RefinementNeverLowersTheBest) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = random_instance(3, seed);
    EXPECT_GE(grid_oracle(inst, 5e-3).objective, grid_oracle(inst, 1e-2).objective);
  }
}

TEST(GridOracle, ReturnsFeasiblePoints) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = random_instance(1 + seed % 3, seed, 1e-4);
    const auto oracle = grid_oracle(inst, 1e-2);
    Schedule schedule;
    for (std::size_t i = 0; i < oracle.taus.size(); ++i) {
      if (oracle.taus[i] > 0.0) {
        schedule.slots.push_back({inst.ordered_users[i].id, oracle.taus[i], oracle.energies[i] / oracle.taus[i]});
      }
    }
    const auto report = evaluate(schedule, inst.ordered_users, inst.sys);
    EXPECT_TRUE(report.feasible);
    EXPECT_NEAR(report.sum_throughput, oracle.objective, 1e-9 * oracle.objective);
  }
}

TEST(GridOracle, RejectsLargeInstances) {
  EXPECT_THROW((void)grid_oracle(random_instance(4, 1), 1e-2), testing::OracleTooLarge);
}

}  // namespace
}  // namespace wpcn
