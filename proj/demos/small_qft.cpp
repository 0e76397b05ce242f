// Library tour: schedule an 8-qubit QFT across a 3-group machine and dump
// the optical rounds it needs.

#include <cstdio>
#include <string>

#include "qfly/io.hpp"
#include "qfly/scheduler.hpp"

int main() {
  using namespace qfly;

  const auto topo = build_topology(QFlyVariant::DualPathHalfDuplex, 3, 4);
  const auto circuit = qft_circuit(8, CPhasePolicy::RotationsAndCnots);
  const auto placement =
      place_qubits(8, topo, 1, PlacementPolicy::Block);  // one qubit per node

  TimingConfig tc;
  tc.t_gs_s = 1e-3;
  const BenesSwitch tech{0.46};
  const auto sched = schedule(circuit, placement, topo, tc, tech);

  const auto errs = validate_schedule(circuit, placement, topo, tc, tech, sched);
  for (const auto& e : errs) std::fprintf(stderr, "invalid: %s\n", e.c_str());
  if (!errs.empty()) return 1;

  std::printf("qft(8), %d remote of %zu gates, %zu rounds, %.4g slots, %.4g s\n",
              sched.remote_gates, circuit.gates.size(), sched.rounds.size(),
              sched.makespan_slots, sched.makespan_s);
  for (const auto& r : sched.rounds) {
    std::printf("round %2d @ %8.4f s: %zu gates,%s %.3g s\n", r.index,
                r.start_s, r.assignment.granted.size(),
                r.switch_state_changed ? " reconfigures," : "", r.duration_s);
    for (const auto& [gate, path] : r.assignment.granted)
      std::printf("  gate %3d %s--%s via %s (%d switch crossings)\n", gate,
                  topo.element_label(path.node_a).c_str(),
                  topo.element_label(path.node_b).c_str(),
                  topo.element_label(path.bsa).c_str(), path.switch_crossings);
  }

  const auto mono = monolithic_baseline(circuit);
  std::printf("monolithic critical path: %.4g slots, slowdown %.3g\n",
              mono.makespan_slots, sched.makespan_slots / mono.makespan_slots);
  return 0;
}
