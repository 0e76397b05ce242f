#pragma once

// QFT benchmark circuit, already decomposed for a machine whose only
// two-qubit primitive is a CNOT consuming one shared Bell pair. The n-qubit
// QFT applies H to qubit i, then controlled-phase(i, j) for j > i; the final
// qubit reversal is bookkeeping and is not emitted. Rotation angles are not
// tracked: every single-qubit rotation is a unit-cost slot.
//
// Controlled-phase decompositions:
//   rot-cnot (default):  Rz(c), Rz(t), CNOT, Rz(t), CNOT
//   cnot-only:           CNOT, CNOT            (remote-traffic ablation)
//
// Gates are listed in program order; per-qubit order in the list is the
// dependency order a scheduler must respect.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qfly/topology.hpp"

namespace qfly {

enum class GateKind { Hadamard, RotationSlot, Cnot };

// where in the QFT a gate came from: layer = the H/controlled-phase layer
// index of its control qubit, (control, target) the phase pair, target = -1
// for the layer Hadamard
struct GateOrigin {
  int layer = -1;
  int control = -1;
  int target = -1;
};

struct Gate {
  GateKind kind;
  int q0 = -1;  // Hadamard/rotation operand, or CNOT control
  int q1 = -1;  // CNOT target, -1 otherwise
  GateOrigin origin;

  bool two_qubit() const { return kind == GateKind::Cnot; }
};

struct Circuit {
  int n = 0;
  std::vector<Gate> gates;

  std::int64_t count(GateKind k) const {
    std::int64_t c = 0;
    for (const auto& gt : gates)
      if (gt.kind == k) ++c;
    return c;
  }
};

enum class CPhasePolicy { RotationsAndCnots, CnotOnly };

inline std::string_view cphase_policy_code(CPhasePolicy p) {
  return p == CPhasePolicy::RotationsAndCnots ? "rot-cnot" : "cnot-only";
}

inline std::optional<CPhasePolicy> parse_cphase_policy(std::string_view s) {
  if (s == "rot-cnot") return CPhasePolicy::RotationsAndCnots;
  if (s == "cnot-only") return CPhasePolicy::CnotOnly;
  return std::nullopt;
}

enum class CPhaseOperand { Control, Target };

struct TemplateGate {
  GateKind kind;
  CPhaseOperand on;  // rotation operand; CNOTs always run control -> target
};

inline std::vector<TemplateGate> decompose_cphase(
    CPhasePolicy policy = CPhasePolicy::RotationsAndCnots) {
  if (policy == CPhasePolicy::CnotOnly)
    return {{GateKind::Cnot, CPhaseOperand::Control},
            {GateKind::Cnot, CPhaseOperand::Control}};
  return {{GateKind::RotationSlot, CPhaseOperand::Control},
          {GateKind::RotationSlot, CPhaseOperand::Target},
          {GateKind::Cnot, CPhaseOperand::Control},
          {GateKind::RotationSlot, CPhaseOperand::Target},
          {GateKind::Cnot, CPhaseOperand::Control}};
}

inline Circuit qft_circuit(int n,
                           CPhasePolicy policy = CPhasePolicy::RotationsAndCnots) {
  if (n < 1)
    throw std::invalid_argument("qft_circuit: need at least 1 qubit, got " +
                                std::to_string(n));
  Circuit c;
  c.n = n;
  const auto tmpl = decompose_cphase(policy);
  for (int i = 0; i < n; ++i) {
    c.gates.push_back({GateKind::Hadamard, i, -1, {i, i, -1}});
    for (int j = i + 1; j < n; ++j) {
      for (const auto& tg : tmpl) {
        Gate gt;
        gt.kind = tg.kind;
        gt.origin = {i, i, j};
        if (tg.kind == GateKind::Cnot) {
          gt.q0 = i;
          gt.q1 = j;
        } else {
          gt.q0 = tg.on == CPhaseOperand::Control ? i : j;
        }
        c.gates.push_back(gt);
      }
    }
  }
  return c;
}

enum class PlacementPolicy { Block, RoundRobin };

inline std::string_view placement_policy_code(PlacementPolicy p) {
  return p == PlacementPolicy::Block ? "block" : "round-robin";
}

inline std::optional<PlacementPolicy> parse_placement_policy(
    std::string_view s) {
  if (s == "block") return PlacementPolicy::Block;
  if (s == "round-robin") return PlacementPolicy::RoundRobin;
  return std::nullopt;
}

struct Placement {
  int qubits_per_node = 0;
  std::vector<int> node_of;  // qubit -> node id
  std::vector<int> slot_of;  // qubit -> slot within its node

  bool local_pair(int qa, int qb) const { return node_of[qa] == node_of[qb]; }
};

inline Placement place_qubits(int n_qubits, const QFlyTopology& t,
                              int qubits_per_node,
                              PlacementPolicy policy = PlacementPolicy::Block) {
  if (qubits_per_node < 1)
    throw std::invalid_argument("place_qubits: qubits_per_node must be >= 1");
  const std::int64_t capacity =
      static_cast<std::int64_t>(t.num_nodes()) * qubits_per_node;
  if (n_qubits > capacity)
    throw std::invalid_argument(
        "place_qubits: " + std::to_string(n_qubits) + " qubits exceed " +
        std::to_string(t.num_nodes()) + " nodes x " +
        std::to_string(qubits_per_node) + " qubits/node");
  Placement pl;
  pl.qubits_per_node = qubits_per_node;
  pl.node_of.resize(n_qubits);
  pl.slot_of.resize(n_qubits);
  std::vector<int> fill(t.num_nodes(), 0);
  for (int q = 0; q < n_qubits; ++q) {
    const int node = policy == PlacementPolicy::Block
                         ? q / qubits_per_node
                         : q % t.num_nodes();
    pl.node_of[q] = node;
    pl.slot_of[q] = fill[node]++;
  }
  return pl;
}

// CNOT count whose endpoints land on different nodes
inline std::int64_t remote_gate_count(const Circuit& c, const Placement& pl) {
  std::int64_t r = 0;
  for (const auto& gt : c.gates)
    if (gt.two_qubit() && !pl.local_pair(gt.q0, gt.q1)) ++r;
  return r;
}

}  // namespace qfly
