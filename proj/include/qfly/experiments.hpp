#pragma once

// Bundled evaluation presets: six single-path half-duplex machines that all
// hold ~130-144 qubits but trade nodes-per-group against group count, from
// "few big groups, many qubits per node" (1) to "one qubit per node, many
// groups" (6). Running the same QFT across them isolates the effect of the
// interconnect shape.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfly/lattice.hpp"
#include "qfly/scheduler.hpp"
#include "qfly/switch_loss.hpp"
#include "qfly/topology.hpp"
#include "qfly/workload.hpp"

namespace qfly {

struct EvaluationPreset {
  int number;
  int p;
  int k;
  int g;
  int n_nodes;
  int qubits_per_node;
  int total_qubits;
};

inline const std::vector<EvaluationPreset>& evaluation_presets() {
  static const std::vector<EvaluationPreset> presets = {
      {1, 2, 4, 5, 10, 13, 130},  {2, 6, 8, 5, 30, 4, 120},
      {3, 4, 8, 9, 36, 4, 144},   {4, 2, 8, 13, 26, 5, 130},
      {5, 14, 16, 5, 70, 2, 140}, {6, 8, 16, 17, 136, 1, 136},
  };
  return presets;
}

inline const EvaluationPreset& evaluation_preset(int number) {
  for (const auto& p : evaluation_presets())
    if (p.number == number) return p;
  throw std::invalid_argument("evaluation_preset: no preset " +
                              std::to_string(number));
}

struct ExperimentResult {
  EvaluationPreset preset{};
  int qft_n = 0;
  double inter_loss_db = 0;  // minimum-hop inter-group budget
  Schedule schedule;
};

// run one preset: build its machine, place qubits block-wise, schedule the
// QFT. qft_n <= 0 means the preset's full qubit count.
inline ExperimentResult run_experiment(const EvaluationPreset& preset,
                                       const TimingConfig& tc,
                                       const SwitchTechnology& tech,
                                       int qft_n = 0,
                                       int qubits_per_node = 0,
                                       CPhasePolicy policy =
                                           CPhasePolicy::RotationsAndCnots,
                                       PlacementPolicy place =
                                           PlacementPolicy::Block) {
  ExperimentResult res;
  res.preset = preset;
  res.qft_n = qft_n > 0 ? qft_n : preset.total_qubits;
  const int q =
      qubits_per_node > 0 ? qubits_per_node : preset.qubits_per_node;
  const auto topo =
      build_topology(QFlyVariant::SinglePathHalfDuplex, preset.g, preset.p);
  if (topo.k != preset.k)
    throw std::logic_error("run_experiment: preset radix mismatch");
  res.inter_loss_db =
      loss_budget(min_switch_crossings(topo.variant, PathKind::InterGroup),
                  tech, topo.k, tc.fiber_km, tc.fiber_db_per_km,
                  tc.bsa_success)
          .total_db;
  const auto circuit = qft_circuit(res.qft_n, policy);
  const auto placement = place_qubits(res.qft_n, topo, q, place);
  res.schedule = schedule(circuit, placement, topo, tc, tech);
  return res;
}

struct SlowdownRow {
  std::string name;
  double loss_db = 0;
  std::int64_t rounds = 0;
  double makespan_slots = 0;
  double slowdown = 0;
  std::vector<std::int64_t> concurrency_histogram;  // [i] = rounds with i grants
};

struct SlowdownReport {
  double monolithic_slots = 0;
  std::vector<SlowdownRow> rows;
};

namespace detail {

inline void bump_histogram(std::vector<std::int64_t>& h, size_t grants) {
  if (h.size() <= grants) h.resize(grants + 1, 0);
  ++h[grants];
}

}  // namespace detail

// Side-by-side comparison of schedules of one circuit. Every entry must
// descend from the same circuit as the monolithic reference.
inline SlowdownReport slowdown_report(
    const MonolithicResult& mono,
    const std::vector<std::pair<std::string, const Schedule*>>& entries,
    const std::vector<std::pair<std::string, const LatticeSchedule*>>&
        lattice_entries = {},
    const std::vector<double>& entry_loss_db = {}) {
  SlowdownReport rep;
  rep.monolithic_slots = mono.makespan_slots;
  if (!(mono.makespan_slots > 0))
    throw std::invalid_argument("slowdown_report: empty reference circuit");
  size_t i = 0;
  for (const auto& [name, sched] : entries) {
    if (sched->circuit_digest != mono.circuit_digest)
      throw std::invalid_argument("slowdown_report: '" + name +
                                  "' was scheduled from a different circuit");
    SlowdownRow row;
    row.name = name;
    row.loss_db = i < entry_loss_db.size() ? entry_loss_db[i] : 0;
    row.rounds = static_cast<std::int64_t>(sched->rounds.size());
    row.makespan_slots = sched->makespan_slots;
    row.slowdown = sched->makespan_slots / mono.makespan_slots;
    for (const auto& r : sched->rounds)
      detail::bump_histogram(row.concurrency_histogram,
                             r.assignment.granted.size());
    rep.rows.push_back(std::move(row));
    ++i;
  }
  for (const auto& [name, sched] : lattice_entries) {
    if (sched->circuit_digest != mono.circuit_digest)
      throw std::invalid_argument("slowdown_report: '" + name +
                                  "' was scheduled from a different circuit");
    SlowdownRow row;
    row.name = name;
    row.rounds = static_cast<std::int64_t>(sched->rounds.size());
    row.makespan_slots = sched->makespan_slots;
    row.slowdown = sched->makespan_slots / mono.makespan_slots;
    for (const auto& r : sched->rounds)
      detail::bump_histogram(row.concurrency_histogram, r.gate_ids.size());
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace qfly
