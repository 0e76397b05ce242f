#pragma once

// 2D-lattice baseline: the same nodes on a rows x cols grid with fixed
// nearest-neighbor links and no optical switching. A remote CNOT reserves
// the whole Manhattan chain between its endpoints (rows first, then
// columns); every node and link on the chain is unavailable to other
// connections for that round. End-to-end loss grows linearly in chain
// length (one full link budget per hop), so attempt overhead grows
// exponentially with distance. No switches means no reconfiguration charge;
// this is the generous reading for the baseline.
//
// Round mechanics, local-gate handling, and timing mirror scheduler.hpp so
// makespans are directly comparable.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfly/linkmodel.hpp"
#include "qfly/scheduler.hpp"
#include "qfly/workload.hpp"

namespace qfly {

inline constexpr double kDefaultLatticeLinkLossDb = 3.010299956639812;

struct LatticeConfig {
  int rows = 0;
  int cols = 0;
  int qubits_per_node = 1;
  double per_link_loss_db = kDefaultLatticeLinkLossDb;
  TimingConfig timing;  // t_gs is ignored: the lattice has nothing to switch
};

// smallest near-square grid holding `nodes`
inline std::pair<int, int> lattice_dimensions(int nodes) {
  if (nodes < 1)
    throw std::invalid_argument("lattice_dimensions: need at least one node");
  int r = static_cast<int>(std::sqrt(static_cast<double>(nodes)));
  while (r * (nodes + r - 1) / r < nodes) ++r;  // defensive; sqrt truncation
  const int c = (nodes + r - 1) / r;
  return {r, c};
}

struct LatticeRound {
  int index = 0;
  std::vector<int> gate_ids;
  std::map<int, std::vector<int>> chains;  // gate -> node chain (endpoints incl.)
  double start_s = 0;
  double duration_s = 0;
  double max_leg_s = 0;

  double end_s() const { return start_s + duration_s; }
};

struct LatticeSchedule {
  std::vector<LatticeRound> rounds;
  std::vector<ScheduledGate> gate_times;
  double makespan_s = 0;
  double makespan_slots = 0;
  double slot_seconds = 0;
  std::int64_t remote_gates = 0;
  std::int64_t blocked_retries = 0;
  std::uint64_t circuit_digest = 0;
};

namespace detail {

// canonical Manhattan chain: walk rows first, then columns
inline std::vector<int> lattice_chain(int rows, int cols, int a, int b) {
  (void)rows;
  std::vector<int> chain{a};
  int r = a / cols, c = a % cols;
  const int rb = b / cols, cb = b % cols;
  while (r != rb) {
    r += rb > r ? 1 : -1;
    chain.push_back(r * cols + c);
  }
  while (c != cb) {
    c += cb > c ? 1 : -1;
    chain.push_back(r * cols + c);
  }
  return chain;
}

}  // namespace detail

inline LatticeSchedule lattice_baseline(const Circuit& c, const Placement& pl,
                                        const LatticeConfig& lc) {
  validate_timing(lc.timing);
  if (lc.rows < 1 || lc.cols < 1)
    throw std::invalid_argument("lattice_baseline: grid must be at least 1x1");
  if (lc.per_link_loss_db < 0)
    throw std::invalid_argument("lattice_baseline: negative link loss");
  const int n_nodes = lc.rows * lc.cols;
  if (static_cast<int>(pl.node_of.size()) < c.n)
    throw std::invalid_argument("lattice_baseline: placement too small");
  for (int q = 0; q < c.n; ++q)
    if (pl.node_of[q] < 0 || pl.node_of[q] >= n_nodes)
      throw std::invalid_argument("lattice_baseline: qubit " +
                                  std::to_string(q) + " placed off-grid");

  const double slot = effective_slot_seconds(lc.timing);
  const int n_gates = static_cast<int>(c.gates.size());
  detail::DependencyTracker dep(c);

  auto is_remote = [&](int g) {
    const auto& gt = c.gates[g];
    return gt.two_qubit() && !pl.local_pair(gt.q0, gt.q1);
  };

  std::set<int> ready_local, ready_remote;
  for (int g = 0; g < n_gates; ++g)
    if (dep.indeg[g] == 0) (is_remote(g) ? ready_remote : ready_local).insert(g);

  LatticeSchedule s;
  s.slot_seconds = slot;
  s.circuit_digest = digest_of(c);
  s.gate_times.assign(n_gates, {});
  std::vector<double> node_avail(n_nodes, 0.0);
  int finished = 0;

  auto commit = [&](int g, double start, double end, int round_id) {
    s.gate_times[g] = {start, end, round_id};
    ++finished;
    for (int nxt : dep.succs[g]) {
      dep.pred_ready[nxt] = std::max(dep.pred_ready[nxt], end);
      if (--dep.indeg[nxt] == 0)
        (is_remote(nxt) ? ready_remote : ready_local).insert(nxt);
    }
  };

  auto local_cost = [&](GateKind k) {
    return k == GateKind::RotationSlot ? lc.timing.rotation_slot_weight * slot
                                       : slot;
  };

  std::map<int, int> blocked_rounds;
  std::int64_t total_remote = 0;
  for (int g = 0; g < n_gates; ++g)
    if (is_remote(g)) ++total_remote;
  const std::int64_t retry_limit = 10 * std::max<std::int64_t>(1, total_remote);
  double prev_round_end = 0;

  while (finished < n_gates) {
    while (!ready_local.empty()) {
      const int g = *ready_local.begin();
      ready_local.erase(ready_local.begin());
      const auto& gt = c.gates[g];
      const double start = dep.pred_ready[g];
      const double end = start + local_cost(gt.kind);
      commit(g, start, end, -1);
      node_avail[pl.node_of[gt.q0]] =
          std::max(node_avail[pl.node_of[gt.q0]], end);
      if (gt.q1 >= 0)
        node_avail[pl.node_of[gt.q1]] =
            std::max(node_avail[pl.node_of[gt.q1]], end);
    }
    if (finished == n_gates) break;
    if (ready_remote.empty())
      throw std::logic_error("lattice_baseline: dependency graph stalled");

    auto earliest = [&](int g) {
      const auto& gt = c.gates[g];
      return std::max({dep.pred_ready[g], node_avail[pl.node_of[gt.q0]],
                       node_avail[pl.node_of[gt.q1]]});
    };
    double min_earliest = std::numeric_limits<double>::infinity();
    for (int g : ready_remote) min_earliest = std::min(min_earliest, earliest(g));
    const double round_start = std::max(prev_round_end, min_earliest);

    LatticeRound round;
    round.index = static_cast<int>(s.rounds.size());
    round.start_s = round_start;
    std::set<int> reserved;  // nodes; links follow from node chains
    std::vector<int> submitted;
    for (int g : ready_remote) {
      if (earliest(g) > round_start) continue;
      const auto& gt = c.gates[g];
      const int na = pl.node_of[gt.q0], nb = pl.node_of[gt.q1];
      if (reserved.count(na) || reserved.count(nb)) {
        submitted.push_back(g);  // endpoint already reserved: blocked
        continue;
      }
      auto chain = detail::lattice_chain(lc.rows, lc.cols, na, nb);
      bool clash = false;
      for (int nd : chain)
        if (reserved.count(nd)) {
          clash = true;
          break;
        }
      submitted.push_back(g);
      if (clash) continue;
      for (int nd : chain) reserved.insert(nd);
      // one full link budget per hop; a single hop at the default equals the
      // bare detector-pair projection, i.e. exactly one slot of link time
      const double loss =
          static_cast<double>(chain.size() - 1) * lc.per_link_loss_db;
      const double leg = link_timing(lc.timing.t_attempt_s, loss, 0,
                                     lc.timing.purification_factor)
                             .t_leg_s;
      round.max_leg_s = std::max(round.max_leg_s, leg);
      round.gate_ids.push_back(g);
      round.chains.emplace(g, std::move(chain));
    }
    if (round.gate_ids.empty())
      throw std::runtime_error(
          "lattice_baseline: no request routable in an empty round");
    round.duration_s = round.max_leg_s;
    const double round_end = round.start_s + round.duration_s;
    for (int g : round.gate_ids) {
      ready_remote.erase(g);
      blocked_rounds.erase(g);
      commit(g, round.start_s, round_end, round.index);
    }
    for (int nd : reserved) node_avail[nd] = round_end;
    for (int g : submitted) {
      if (round.chains.count(g)) continue;
      ++s.blocked_retries;
      if (++blocked_rounds[g] > retry_limit)
        throw std::runtime_error("lattice_baseline: gate " + std::to_string(g) +
                                 " blocked for more than " +
                                 std::to_string(retry_limit) +
                                 " rounds (livelock)");
    }
    s.rounds.push_back(std::move(round));
    prev_round_end = round_end;
  }

  for (int g = 0; g < n_gates; ++g) {
    s.makespan_s = std::max(s.makespan_s, s.gate_times[g].end_s);
    if (is_remote(g)) ++s.remote_gates;
  }
  s.makespan_slots = s.makespan_s / slot;
  return s;
}

}  // namespace qfly
