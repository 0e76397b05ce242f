#include "qfly/linkmodel.hpp"

#include <gtest/gtest.h>

using namespace qfly;

TEST(LinkModel, RawPairTime) {
  // 3.0103 dB halves the success probability: 1 ns attempts -> 2 ns pairs
  EXPECT_NEAR(physical_pair_time(1e-9, 3.010299956639812), 2e-9, 1e-21);
  EXPECT_NEAR(physical_pair_time(1e-9, 0.0), 1e-9, 1e-21);
  EXPECT_DOUBLE_EQ(physical_pair_time(1e-9, 7.1503),
                   1e-9 * overhead_factor(7.1503));
  EXPECT_NEAR(physical_pair_time(1e-9, 7.1503), 5.19e-9, 0.01e-9);
  EXPECT_NEAR(physical_pair_time(1e-9, 9.9103), 9.79e-9, 0.01e-9);
  EXPECT_THROW(physical_pair_time(0.0, 3.0), std::invalid_argument);
}

TEST(LinkModel, PurifiedPairTiming) {
  const auto lt = logical_pair_timing(2e-9, 1e-3);
  EXPECT_DOUBLE_EQ(lt.t_leg_s, 80 * 2e-9);
  EXPECT_DOUBLE_EQ(lt.r_leg_hz, 1.0 / (160e-9 + 1e-3));
  EXPECT_DOUBLE_EQ(lt.duty, 160e-9 / (160e-9 + 1e-3));
  // identities that must hold for any inputs
  for (double t_gs : {0.0, 1e-6, 1e-3}) {
    for (double t_peg : {1e-9, 2e-9, 9.79e-9}) {
      const auto x = logical_pair_timing(t_peg, t_gs, 80);
      EXPECT_DOUBLE_EQ(x.t_leg_s / x.t_peg_s, 80.0);
      EXPECT_NEAR(x.r_leg_hz * (x.t_leg_s + t_gs), 1.0, 1e-12);
      EXPECT_NEAR(x.duty, x.t_leg_s * x.r_leg_hz, 1e-15);
    }
  }
  // no reconfiguration gap: full duty
  EXPECT_DOUBLE_EQ(logical_pair_timing(2e-9, 0.0).duty, 1.0);
  EXPECT_THROW(logical_pair_timing(0.0, 1e-3), std::invalid_argument);
  EXPECT_THROW(logical_pair_timing(1e-9, -1.0), std::invalid_argument);
  EXPECT_THROW(logical_pair_timing(1e-9, 1e-3, 0.5), std::invalid_argument);
}

TEST(LinkModel, ComposedTiming) {
  const auto lt = link_timing(1e-9, 3.010299956639812, 1e-3);
  EXPECT_NEAR(lt.t_peg_s, 2e-9, 1e-21);
  EXPECT_NEAR(lt.t_leg_s, 160e-9, 1e-18);
  // more loss can only slow the link down
  double prev = 0;
  for (double db : {0.0, 3.01, 7.15, 9.91, 12.67}) {
    const auto x = link_timing(1e-9, db, 1e-3);
    EXPECT_GT(x.t_leg_s, prev);
    prev = x.t_leg_s;
  }
}

TEST(LinkModel, InfidelityIsTheConfiguredBudget) {
  PathSpec p;
  EXPECT_DOUBLE_EQ(infidelity_estimate(p), 0.10);
  EXPECT_DOUBLE_EQ(infidelity_estimate(p, 0.25), 0.25);
}

TEST(LinkModel, SimulatedLosslessLinkIsDeterministicallyExact) {
  // every attempt succeeds, so both estimators collapse to constants
  const auto r = simulate_link(0.0, 1e-9, 1000, 42);
  EXPECT_DOUBLE_EQ(r.mean_t_peg_s, 1e-9);
  EXPECT_DOUBLE_EQ(r.se_t_peg_s, 0.0);
  EXPECT_DOUBLE_EQ(r.mean_t_leg_s, 80e-9);
  EXPECT_DOUBLE_EQ(r.se_t_leg_s, 0.0);
  EXPECT_EQ(r.attempts, 80000);
  EXPECT_EQ(r.raw_pairs, 80000);
  EXPECT_EQ(r.logical_pairs, 1000);
}

TEST(LinkModel, SimulationIsSeedReproducible) {
  const auto a = simulate_link(9.9103, 1e-9, 500, 1234);
  const auto b = simulate_link(9.9103, 1e-9, 500, 1234);
  EXPECT_EQ(a.attempts, b.attempts);
  EXPECT_EQ(a.mean_t_peg_s, b.mean_t_peg_s);
  EXPECT_EQ(a.se_t_leg_s, b.se_t_leg_s);
  const auto c = simulate_link(9.9103, 1e-9, 500, 1235);
  EXPECT_NE(a.attempts, c.attempts);
}

TEST(LinkModel, SimulationAgreesWithClosedForm) {
  for (double db : {3.010299956639812, 7.1503, 9.9103}) {
    const auto sim = simulate_link(db, 1e-9, 20000, 99);
    const double expect_peg = physical_pair_time(1e-9, db);
    EXPECT_NEAR(sim.mean_t_peg_s, expect_peg, 3 * sim.se_t_peg_s)
        << db << " dB";
    EXPECT_NEAR(sim.mean_t_leg_s, 80 * expect_peg, 3 * sim.se_t_leg_s)
        << db << " dB";
    EXPECT_GT(sim.se_t_peg_s, 0.0);
  }
}

TEST(LinkModel, SimulationRejectsBadArguments) {
  EXPECT_THROW(simulate_link(-1.0, 1e-9, 10, 1), std::invalid_argument);
  EXPECT_THROW(simulate_link(3.0, 0.0, 10, 1), std::invalid_argument);
  EXPECT_THROW(simulate_link(3.0, 1e-9, 0, 1), std::invalid_argument);
  EXPECT_THROW(simulate_link(3.0, 1e-9, 10, 1, 0), std::invalid_argument);
}
