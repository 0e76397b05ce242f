#include "qfly/lattice.hpp"

#include <gtest/gtest.h>

#include <numeric>

#include "qfly/experiments.hpp"

using namespace qfly;

namespace {

Placement identity_placement(int n) {
  Placement pl;
  pl.qubits_per_node = 1;
  pl.node_of.resize(n);
  pl.slot_of.assign(n, 0);
  std::iota(pl.node_of.begin(), pl.node_of.end(), 0);
  return pl;
}

}  // namespace

TEST(Lattice, GridDimensions) {
  EXPECT_EQ(lattice_dimensions(1), (std::pair<int, int>{1, 1}));
  EXPECT_EQ(lattice_dimensions(2), (std::pair<int, int>{1, 2}));
  EXPECT_EQ(lattice_dimensions(12), (std::pair<int, int>{3, 4}));
  EXPECT_EQ(lattice_dimensions(16), (std::pair<int, int>{4, 4}));
  EXPECT_EQ(lattice_dimensions(136), (std::pair<int, int>{11, 13}));
  for (int n : {1, 5, 17, 136, 1000}) {
    const auto [r, c] = lattice_dimensions(n);
    EXPECT_GE(r * c, n);
    EXPECT_LE(r, c);
    EXPECT_LE(r * r, n);  // rows = floor(sqrt(n))
  }
  EXPECT_THROW(lattice_dimensions(0), std::invalid_argument);
}

TEST(Lattice, NeighborLinkRunsInOneSlot) {
  Circuit c;
  c.n = 2;
  c.gates.push_back({GateKind::Cnot, 0, 1, {0, 0, 1}});
  LatticeConfig lc;
  lc.rows = 1;
  lc.cols = 4;
  const auto s = lattice_baseline(c, identity_placement(2), lc);
  ASSERT_EQ(s.rounds.size(), 1u);
  EXPECT_EQ(s.rounds[0].chains.at(0), (std::vector<int>{0, 1}));
  // one hop at the default link loss is exactly the slot calibration
  EXPECT_NEAR(s.makespan_slots, 1.0, 1e-12);
  EXPECT_EQ(s.remote_gates, 1);
}

TEST(Lattice, LossGrowsLinearlyAndTimeExponentially) {
  Circuit c;
  c.n = 2;
  c.gates.push_back({GateKind::Cnot, 0, 1, {0, 0, 1}});
  Placement pl;
  pl.qubits_per_node = 1;
  pl.node_of = {0, 3};  // three hops apart on one row
  pl.slot_of = {0, 0};
  LatticeConfig lc;
  lc.rows = 1;
  lc.cols = 4;
  const auto s = lattice_baseline(c, pl, lc);
  ASSERT_EQ(s.rounds.size(), 1u);
  EXPECT_EQ(s.rounds[0].chains.at(0), (std::vector<int>{0, 1, 2, 3}));
  // 3 x 3.0103 dB is an 8x attempt overhead; one slot holds two attempts'
  // worth of purification, so the leg takes 2^3 * 80 ns = 4 slots
  EXPECT_NEAR(s.makespan_slots, 4.0, 1e-9);
}

TEST(Lattice, ChainsReserveIntermediateNodes) {
  // gate A spans the top row through node 1; gate B hangs off node 1, so
  // the two conflict even though their endpoints differ
  Circuit c;
  c.n = 4;
  c.gates.push_back({GateKind::Cnot, 0, 1, {0, 0, 1}});
  c.gates.push_back({GateKind::Cnot, 2, 3, {0, 2, 3}});
  Placement pl;
  pl.qubits_per_node = 1;
  pl.node_of = {0, 2, 1, 7};
  pl.slot_of = {0, 0, 0, 0};
  LatticeConfig lc;
  lc.rows = 3;
  lc.cols = 3;
  const auto s = lattice_baseline(c, pl, lc);
  ASSERT_EQ(s.rounds.size(), 2u);
  EXPECT_EQ(s.rounds[0].gate_ids, std::vector<int>{0});
  EXPECT_EQ(s.rounds[1].gate_ids, std::vector<int>{1});
  EXPECT_EQ(s.blocked_retries, 1);
  // rows-first walk: 1 -> 4 -> 7
  EXPECT_EQ(s.rounds[1].chains.at(1), (std::vector<int>{1, 4, 7}));
  EXPECT_GE(s.rounds[1].start_s, s.rounds[0].end_s() - 1e-15);
}

TEST(Lattice, DisjointChainsShareARound) {
  Circuit c;
  c.n = 4;
  c.gates.push_back({GateKind::Cnot, 0, 1, {0, 0, 1}});
  c.gates.push_back({GateKind::Cnot, 2, 3, {0, 2, 3}});
  Placement pl;
  pl.qubits_per_node = 1;
  pl.node_of = {0, 2, 6, 8};  // top row and bottom row of a 3x3 grid
  pl.slot_of = {0, 0, 0, 0};
  LatticeConfig lc;
  lc.rows = 3;
  lc.cols = 3;
  const auto s = lattice_baseline(c, pl, lc);
  ASSERT_EQ(s.rounds.size(), 1u);
  EXPECT_EQ(s.rounds[0].gate_ids.size(), 2u);
  EXPECT_EQ(s.blocked_retries, 0);
}

TEST(Lattice, PerLinkLossIsConfigurable) {
  Circuit c;
  c.n = 2;
  c.gates.push_back({GateKind::Cnot, 0, 1, {0, 0, 1}});
  LatticeConfig lc;
  lc.rows = 1;
  lc.cols = 2;
  lc.per_link_loss_db = 2 * kDefaultLatticeLinkLossDb;  // quadruple overhead
  const auto s = lattice_baseline(c, identity_placement(2), lc);
  EXPECT_NEAR(s.makespan_slots, 2.0, 1e-9);
}

TEST(Lattice, RejectsBadConfigs) {
  Circuit c;
  c.n = 2;
  c.gates.push_back({GateKind::Cnot, 0, 1, {0, 0, 1}});
  LatticeConfig lc;
  lc.rows = 0;
  lc.cols = 3;
  EXPECT_THROW(lattice_baseline(c, identity_placement(2), lc),
               std::invalid_argument);
  lc.rows = 1;
  lc.cols = 1;  // placement points off-grid
  EXPECT_THROW(lattice_baseline(c, identity_placement(2), lc),
               std::invalid_argument);
}

TEST(Lattice, SlowdownReportComparesLikeForLike) {
  const auto t = build_topology(QFlyVariant::SinglePathHalfDuplex, 3, 4);
  const auto c = qft_circuit(6);
  const auto pl = place_qubits(6, t, 1, PlacementPolicy::Block);
  TimingConfig tc;
  const SwitchTechnology tech{BenesSwitch{0.46}};
  const auto sched = schedule(c, pl, t, tc, tech);
  const auto mono = monolithic_baseline(c);

  LatticeConfig lc;
  std::tie(lc.rows, lc.cols) = lattice_dimensions(6);
  lc.timing = tc;
  const auto lat = lattice_baseline(c, identity_placement(6), lc);

  const auto rep = slowdown_report(mono, {{"qfly", &sched}},
                                   {{"lattice", &lat}}, {9.9103});
  EXPECT_DOUBLE_EQ(rep.monolithic_slots, mono.makespan_slots);
  ASSERT_EQ(rep.rows.size(), 2u);
  EXPECT_EQ(rep.rows[0].name, "qfly");
  EXPECT_DOUBLE_EQ(rep.rows[0].loss_db, 9.9103);
  EXPECT_DOUBLE_EQ(rep.rows[0].slowdown,
                   sched.makespan_slots / mono.makespan_slots);
  EXPECT_EQ(rep.rows[0].rounds,
            static_cast<std::int64_t>(sched.rounds.size()));
  EXPECT_EQ(rep.rows[1].name, "lattice");
  EXPECT_DOUBLE_EQ(rep.rows[1].slowdown,
                   lat.makespan_slots / mono.makespan_slots);
  // histogram counts every round exactly once
  for (const auto& row : rep.rows) {
    std::int64_t total = 0;
    for (auto v : row.concurrency_histogram) total += v;
    EXPECT_EQ(total, row.rounds);
  }

  const auto mono7 = monolithic_baseline(qft_circuit(7));
  EXPECT_THROW(slowdown_report(mono7, {{"qfly", &sched}}),
               std::invalid_argument);
}
