#include "qfly/scheduler.hpp"

#include <gtest/gtest.h>

using namespace qfly;

namespace {

Circuit single_cnot() {
  Circuit c;
  c.n = 2;
  c.gates.push_back({GateKind::Cnot, 0, 1, {0, 0, 1}});
  return c;
}

Placement one_per_node(const std::vector<int>& nodes) {
  Placement pl;
  pl.qubits_per_node = 1;
  pl.node_of = nodes;
  pl.slot_of.assign(nodes.size(), 0);
  return pl;
}

const SwitchTechnology kBenes{BenesSwitch{0.46}};

}  // namespace

TEST(Scheduler, SlotCalibration) {
  TimingConfig tc;
  EXPECT_DOUBLE_EQ(effective_slot_seconds(tc), 160e-9);
  tc.t_slot_s = 1e-6;
  EXPECT_DOUBLE_EQ(effective_slot_seconds(tc), 1e-6);
  EXPECT_DOUBLE_EQ(default_slot_seconds(2e-9, 40), 160e-9);
}

TEST(Scheduler, SingleRemoteGateChargesOneReconfiguration) {
  const auto t = build_topology(QFlyVariant::SinglePathHalfDuplex, 5, 4);
  const auto c = single_cnot();
  const auto pl = one_per_node({0, 1});  // same group
  TimingConfig tc;
  const auto s = schedule(c, pl, t, tc, kBenes);

  ASSERT_EQ(s.rounds.size(), 1u);
  const auto& r = s.rounds[0];
  EXPECT_TRUE(r.switch_state_changed);  // fabric starts unconfigured
  EXPECT_EQ(r.gate_ids, std::vector<int>{0});
  // intra-group link: detector-pair term + two switch crossings
  const double loss = 3.010299956639812 + 2 * 2.3;
  EXPECT_NEAR(r.max_leg_s, 80e-9 * overhead_factor(loss), 1e-18);
  EXPECT_NEAR(r.duration_s, r.max_leg_s + 1e-3, 1e-15);
  EXPECT_NEAR(s.makespan_s, r.duration_s, 1e-15);
  EXPECT_EQ(s.remote_gates, 1);
  EXPECT_EQ(s.blocked_retries, 0);
  EXPECT_TRUE(validate_schedule(c, pl, t, tc, kBenes, s).empty());
}

TEST(Scheduler, RepeatedPairSkipsReconfiguration) {
  const auto t = build_topology(QFlyVariant::SinglePathHalfDuplex, 5, 4);
  Circuit c;
  c.n = 2;
  c.gates.push_back({GateKind::Cnot, 0, 1, {0, 0, 1}});
  c.gates.push_back({GateKind::Cnot, 0, 1, {0, 0, 1}});
  const auto pl = one_per_node({0, 1});
  TimingConfig tc;
  const auto s = schedule(c, pl, t, tc, kBenes);

  ASSERT_EQ(s.rounds.size(), 2u);
  EXPECT_TRUE(s.rounds[0].switch_state_changed);
  EXPECT_FALSE(s.rounds[1].switch_state_changed);  // same pairings held
  EXPECT_NEAR(s.rounds[1].duration_s, s.rounds[1].max_leg_s, 1e-18);
  EXPECT_NEAR(s.rounds[0].duration_s - s.rounds[1].duration_s, 1e-3, 1e-12);
  EXPECT_TRUE(validate_schedule(c, pl, t, tc, kBenes, s).empty());
}

TEST(Scheduler, IndependentPairsShareARound) {
  const auto t = build_topology(QFlyVariant::SinglePathHalfDuplex, 5, 4);
  Circuit c;
  c.n = 4;
  c.gates.push_back({GateKind::Cnot, 0, 1, {0, 0, 1}});
  c.gates.push_back({GateKind::Cnot, 2, 3, {0, 2, 3}});
  const auto pl = one_per_node({0, 1, 2, 3});
  TimingConfig tc;
  const auto s = schedule(c, pl, t, tc, kBenes);
  ASSERT_EQ(s.rounds.size(), 1u);
  EXPECT_EQ(s.rounds[0].gate_ids.size(), 2u);
  EXPECT_TRUE(validate_schedule(c, pl, t, tc, kBenes, s).empty());
}

TEST(Scheduler, DetourBudgetMergesContendedRounds) {
  const auto t = build_topology(QFlyVariant::SinglePathHalfDuplex, 5, 4);
  Circuit c;
  c.n = 4;
  c.gates.push_back({GateKind::Cnot, 0, 1, {0, 0, 1}});
  c.gates.push_back({GateKind::Cnot, 2, 3, {0, 2, 3}});
  // both pairs need the lone fiber between groups 3 and 0
  const auto pl = one_per_node({t.node_id(0, 0), t.node_id(3, 0),
                                t.node_id(0, 1), t.node_id(3, 1)});
  TimingConfig tight;
  tight.max_extra_hops = 0;
  const auto s0 = schedule(c, pl, t, tight, kBenes);
  EXPECT_EQ(s0.rounds.size(), 2u);
  EXPECT_EQ(s0.blocked_retries, 1);

  TimingConfig loose;
  loose.max_extra_hops = 1;
  const auto s1 = schedule(c, pl, t, loose, kBenes);
  EXPECT_EQ(s1.rounds.size(), 1u);
  EXPECT_EQ(s1.blocked_retries, 0);
  EXPECT_LT(s1.makespan_s, s0.makespan_s);
  EXPECT_TRUE(validate_schedule(c, pl, t, loose, kBenes, s1).empty());
}

TEST(Scheduler, LocalGatesStayClearOfEngagedRounds) {
  const auto t = build_topology(QFlyVariant::SinglePathHalfDuplex, 5, 4);
  Circuit c;
  c.n = 2;
  c.gates.push_back({GateKind::Hadamard, 0, -1, {0, 0, -1}});
  c.gates.push_back({GateKind::Hadamard, 1, -1, {1, 1, -1}});
  c.gates.push_back({GateKind::Cnot, 0, 1, {0, 0, 1}});
  c.gates.push_back({GateKind::Hadamard, 0, -1, {0, 0, -1}});
  const auto pl = one_per_node({0, 1});
  TimingConfig tc;
  const auto s = schedule(c, pl, t, tc, kBenes);

  ASSERT_EQ(s.rounds.size(), 1u);
  EXPECT_EQ(s.gate_times[0].round, -1);
  EXPECT_EQ(s.gate_times[2].round, 0);
  // the round waits for both Hadamards, the trailing one waits for the round
  EXPECT_GE(s.rounds[0].start_s, s.gate_times[0].end_s - 1e-15);
  EXPECT_GE(s.rounds[0].start_s, s.gate_times[1].end_s - 1e-15);
  EXPECT_GE(s.gate_times[3].start_s, s.rounds[0].end_s() - 1e-15);
  EXPECT_TRUE(validate_schedule(c, pl, t, tc, kBenes, s).empty());

  // the trailing Hadamard lands in an epoch after round 0
  bool found = false;
  for (const auto& ep : s.local_epochs)
    if (ep.node == 0 && ep.after_round == 0) {
      EXPECT_EQ(ep.gate_ids, std::vector<int>{3});
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(Scheduler, IdealFabricMatchesMonolithicCriticalPath) {
  // lossless links, free reconfiguration, slot-aligned distillation: the
  // round scheduler should track the unlimited-concurrency critical path
  const auto t = build_topology(QFlyVariant::SinglePathHalfDuplex, 3, 4);
  TimingConfig tc;
  tc.bsa_success = 1.0;
  tc.t_gs_s = 0.0;
  tc.t_slot_s = 80e-9;  // one logical pair at zero loss
  const SwitchTechnology free_switch{MonolithicSwitch{0.0}};
  for (int n : {2, 3, 4}) {
    const auto c = qft_circuit(n);
    const auto pl = place_qubits(n, t, 1, PlacementPolicy::Block);
    const auto s = schedule(c, pl, t, tc, free_switch);
    const auto mono = monolithic_baseline(c);
    EXPECT_NEAR(s.makespan_slots, mono.makespan_slots, 1e-6) << "n=" << n;
    EXPECT_TRUE(validate_schedule(c, pl, t, tc, free_switch, s).empty());
  }
}

TEST(Scheduler, DeterministicAcrossRuns) {
  const auto t = build_topology(QFlyVariant::SinglePathHalfDuplex, 5, 4);
  const auto c = qft_circuit(10);
  const auto pl = place_qubits(10, t, 1, PlacementPolicy::Block);
  TimingConfig tc;
  const auto a = schedule(c, pl, t, tc, kBenes);
  const auto b = schedule(c, pl, t, tc, kBenes);
  EXPECT_EQ(a.makespan_s, b.makespan_s);
  EXPECT_EQ(a.blocked_retries, b.blocked_retries);
  ASSERT_EQ(a.rounds.size(), b.rounds.size());
  for (size_t i = 0; i < a.rounds.size(); ++i) {
    EXPECT_EQ(a.rounds[i].gate_ids, b.rounds[i].gate_ids);
    EXPECT_EQ(a.rounds[i].switch_state_changed, b.rounds[i].switch_state_changed);
  }
  EXPECT_TRUE(validate_schedule(c, pl, t, tc, kBenes, a).empty());
}

TEST(Scheduler, ValidatorCatchesTampering) {
  const auto t = build_topology(QFlyVariant::SinglePathHalfDuplex, 5, 4);
  const auto c = qft_circuit(6);
  const auto pl = place_qubits(6, t, 1, PlacementPolicy::Block);
  TimingConfig tc;
  const auto good = schedule(c, pl, t, tc, kBenes);
  ASSERT_TRUE(validate_schedule(c, pl, t, tc, kBenes, good).empty());

  auto s = good;
  s.rounds[0].duration_s *= 2;
  EXPECT_FALSE(validate_schedule(c, pl, t, tc, kBenes, s).empty());

  s = good;
  s.circuit_digest ^= 1;
  EXPECT_FALSE(validate_schedule(c, pl, t, tc, kBenes, s).empty());

  s = good;
  s.rounds[0].switch_state_changed = false;
  EXPECT_FALSE(validate_schedule(c, pl, t, tc, kBenes, s).empty());

  s = good;
  s.makespan_slots += 1;
  EXPECT_FALSE(validate_schedule(c, pl, t, tc, kBenes, s).empty());

  s = good;
  for (auto& gt : s.gate_times)
    if (gt.round == -1) {
      gt.start_s = s.rounds[0].start_s;  // shove a local gate into a round
      gt.end_s = s.rounds[0].end_s();
      break;
    }
  EXPECT_FALSE(validate_schedule(c, pl, t, tc, kBenes, s).empty());

  // a different circuit must be rejected outright
  const auto other = qft_circuit(7);
  EXPECT_FALSE(validate_schedule(other, place_qubits(7, t, 1), t, tc, kBenes,
                                 good)
                   .empty());
}

TEST(Scheduler, MonolithicCriticalPath) {
  EXPECT_DOUBLE_EQ(monolithic_baseline(qft_circuit(1)).makespan_slots, 1.0);
  EXPECT_DOUBLE_EQ(monolithic_baseline(qft_circuit(2)).makespan_slots, 6.0);
  EXPECT_DOUBLE_EQ(monolithic_baseline(qft_circuit(3)).makespan_slots, 14.0);
  EXPECT_DOUBLE_EQ(
      monolithic_baseline(qft_circuit(2, CPhasePolicy::CnotOnly)).makespan_slots,
      4.0);
  // doubling rotation cost stretches the n=2 path from 6 to 8
  EXPECT_DOUBLE_EQ(monolithic_baseline(qft_circuit(2), 2.0).makespan_slots,
                   8.0);
  EXPECT_EQ(monolithic_baseline(qft_circuit(4)).circuit_digest,
            digest_of(qft_circuit(4)));
}

TEST(Scheduler, DigestSeparatesCircuits) {
  EXPECT_EQ(digest_of(qft_circuit(5)), digest_of(qft_circuit(5)));
  EXPECT_NE(digest_of(qft_circuit(5)), digest_of(qft_circuit(6)));
  EXPECT_NE(digest_of(qft_circuit(5)),
            digest_of(qft_circuit(5, CPhasePolicy::CnotOnly)));
}

TEST(Scheduler, RejectsBadInputs) {
  const auto t = build_topology(QFlyVariant::SinglePathHalfDuplex, 5, 4);
  const auto c = qft_circuit(4);
  TimingConfig tc;
  Placement small = one_per_node({0, 1});
  EXPECT_THROW(schedule(c, small, t, tc, kBenes), std::invalid_argument);
  Placement off = one_per_node({0, 1, 2, t.switch_id(0)});
  EXPECT_THROW(schedule(c, off, t, tc, kBenes), std::invalid_argument);
  TimingConfig bad = tc;
  bad.bsa_success = 0;
  EXPECT_THROW(schedule(c, place_qubits(4, t, 1), t, bad, kBenes),
               std::invalid_argument);
}
