#pragma once

// Round-based execution model. Remote CNOTs consume one logical Bell pair
// each; pairs are produced in rounds. A round grants a node-disjoint batch
// of connections (route_round), runs every granted link long enough for the
// slowest one to distill its pair, and charges one switch-reconfiguration
// window t_gs exactly when the required switch pairings differ from the
// state the fabric is already holding. Local gates run between rounds;
// qubits on one node execute concurrently, but a node engaged in a round is
// unavailable to all its qubits for the whole round.
//
// Greedy ASAP list scheduling, deterministic, ties broken by gate index:
// each round starts at max(previous round end, earliest start among ready
// remote gates) and admits the ready gates that can start by then.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "qfly/linkmodel.hpp"
#include "qfly/routing.hpp"
#include "qfly/switch_loss.hpp"
#include "qfly/topology.hpp"
#include "qfly/workload.hpp"

namespace qfly {

struct TimingConfig {
  double t_attempt_s = kDefaultAttemptSeconds;
  double t_gs_s = 1e-3;
  double t_slot_s = 0;  // <= 0 picks the default below
  double purification_factor = kDefaultPurificationFactor;
  double fiber_km = 0;
  double fiber_db_per_km = 0.2;
  double bsa_success = kDefaultBsaSuccess;
  int max_extra_hops = 1;
  double rotation_slot_weight = 1.0;
};

// one local slot = the time a link at the bare detector-pair reference loss
// (10*log10 2 dB) needs for one logical pair: factor * 2 * t_attempt
inline double default_slot_seconds(double t_attempt_s,
                                   double purification_factor) {
  return purification_factor * 2.0 * t_attempt_s;
}

inline double effective_slot_seconds(const TimingConfig& tc) {
  return tc.t_slot_s > 0
             ? tc.t_slot_s
             : default_slot_seconds(tc.t_attempt_s, tc.purification_factor);
}

inline void validate_timing(const TimingConfig& tc) {
  if (tc.t_attempt_s <= 0)
    throw std::invalid_argument("timing: t_attempt must be > 0");
  if (tc.t_gs_s < 0)
    throw std::invalid_argument("timing: t_gs must be >= 0");
  if (tc.purification_factor < 1)
    throw std::invalid_argument("timing: purification factor must be >= 1");
  if (tc.fiber_km < 0 || tc.fiber_db_per_km < 0)
    throw std::invalid_argument("timing: negative fiber attenuation");
  if (!(tc.bsa_success > 0) || tc.bsa_success > 1)
    throw std::invalid_argument("timing: BSA success must be in (0, 1]");
  if (tc.max_extra_hops < 0)
    throw std::invalid_argument("timing: max_extra_hops must be >= 0");
  if (tc.rotation_slot_weight <= 0)
    throw std::invalid_argument("timing: rotation slot weight must be > 0");
}

struct Round {
  int index = 0;
  RoundAssignment assignment;
  bool switch_state_changed = false;
  std::vector<int> gate_ids;  // granted CNOT gate indices
  double start_s = 0;
  double duration_s = 0;
  double duration_slots = 0;
  double max_leg_s = 0;  // slowest granted link's distillation time

  double end_s() const { return start_s + duration_s; }
};

struct ScheduledGate {
  double start_s = -1;
  double end_s = -1;
  int round = -1;  // -1 for local gates
};

struct LocalEpoch {
  int node = -1;
  int after_round = -1;  // last round engaging this node before the epoch
  std::vector<int> gate_ids;
  double start_s = 0;
  double end_s = 0;
};

struct Schedule {
  std::vector<Round> rounds;
  std::vector<ScheduledGate> gate_times;
  std::vector<LocalEpoch> local_epochs;
  double makespan_s = 0;
  double makespan_slots = 0;
  double slot_seconds = 0;
  std::int64_t remote_gates = 0;
  std::int64_t blocked_retries = 0;
  std::uint64_t circuit_digest = 0;
};

inline std::uint64_t digest_of(const Circuit& c) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(static_cast<std::uint64_t>(c.n));
  for (const auto& gt : c.gates) {
    mix(static_cast<std::uint64_t>(gt.kind) + 1);
    mix(static_cast<std::uint64_t>(gt.q0 + 1));
    mix(static_cast<std::uint64_t>(gt.q1 + 1));
  }
  return h;
}

namespace detail {

// The optical fabric remembers its pairings between rounds. apply() returns
// true when any demanded (in, out) pairing is not already held; it then
// unplugs whatever those ports held and installs the demand.
struct SwitchState {
  std::map<std::pair<int, int>, int> out_of_in;
  std::map<std::pair<int, int>, int> in_of_out;

  bool holds(int sw, int fin, int fout) const {
    auto it = out_of_in.find({sw, fin});
    return it != out_of_in.end() && it->second == fout;
  }

  bool apply(const std::set<std::tuple<int, int, int>>& pairings) {
    bool changed = false;
    for (const auto& [sw, fin, fout] : pairings) {
      if (holds(sw, fin, fout)) continue;
      changed = true;
      auto old_out = out_of_in.find({sw, fin});
      if (old_out != out_of_in.end()) in_of_out.erase({sw, old_out->second});
      auto old_in = in_of_out.find({sw, fout});
      if (old_in != in_of_out.end()) out_of_in.erase({sw, old_in->second});
      out_of_in[{sw, fin}] = fout;
      in_of_out[{sw, fout}] = fin;
    }
    return changed;
  }
};

struct DependencyTracker {
  const Circuit* circuit;
  std::vector<std::vector<int>> succs;
  std::vector<int> indeg;
  std::vector<double> pred_ready;

  explicit DependencyTracker(const Circuit& c) : circuit(&c) {
    const int n_gates = static_cast<int>(c.gates.size());
    succs.resize(n_gates);
    indeg.assign(n_gates, 0);
    pred_ready.assign(n_gates, 0.0);
    std::vector<int> last(c.n, -1);
    for (int g = 0; g < n_gates; ++g) {
      const auto& gt = c.gates[g];
      for (int q : {gt.q0, gt.q1}) {
        if (q < 0) continue;
        if (q >= c.n)
          throw std::invalid_argument("circuit references qubit " +
                                      std::to_string(q) + " >= n");
        if (last[q] >= 0) {
          succs[last[q]].push_back(g);
          ++indeg[g];
        }
        last[q] = g;
      }
    }
  }
};

}  // namespace detail

inline Schedule schedule(const Circuit& c, const Placement& pl,
                         const QFlyTopology& t, const TimingConfig& tc,
                         const SwitchTechnology& tech) {
  validate_timing(tc);
  if (static_cast<int>(pl.node_of.size()) < c.n)
    throw std::invalid_argument("schedule: placement covers fewer qubits than the circuit uses");
  for (int q = 0; q < c.n; ++q)
    if (!t.is_node(pl.node_of[q]))
      throw std::invalid_argument("schedule: qubit " + std::to_string(q) +
                                  " placed on a node outside the topology");

  const double slot = effective_slot_seconds(tc);
  const int n_gates = static_cast<int>(c.gates.size());
  detail::DependencyTracker dep(c);

  auto is_remote = [&](int g) {
    const auto& gt = c.gates[g];
    return gt.two_qubit() && !pl.local_pair(gt.q0, gt.q1);
  };

  std::set<int> ready_local, ready_remote;
  for (int g = 0; g < n_gates; ++g)
    if (dep.indeg[g] == 0) (is_remote(g) ? ready_remote : ready_local).insert(g);

  Schedule s;
  s.slot_seconds = slot;
  s.circuit_digest = digest_of(c);
  s.gate_times.assign(n_gates, {});
  std::vector<double> node_avail(t.num_nodes(), 0.0);
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
    return k == GateKind::RotationSlot ? tc.rotation_slot_weight * slot : slot;
  };

  detail::SwitchState machine;
  std::map<int, int> blocked_rounds;
  std::int64_t total_remote = 0;
  for (int g = 0; g < n_gates; ++g)
    if (is_remote(g)) ++total_remote;
  // livelock net: a request outwaiting ten times the entire remote workload
  // cannot be legitimate queueing
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
      throw std::logic_error("schedule: dependency graph stalled");

    auto earliest = [&](int g) {
      const auto& gt = c.gates[g];
      return std::max({dep.pred_ready[g], node_avail[pl.node_of[gt.q0]],
                       node_avail[pl.node_of[gt.q1]]});
    };
    double min_earliest = std::numeric_limits<double>::infinity();
    for (int g : ready_remote) min_earliest = std::min(min_earliest, earliest(g));
    const double round_start = std::max(prev_round_end, min_earliest);

    std::vector<ConnectionRequest> reqs;
    std::set<int> engaged;
    for (int g : ready_remote) {
      if (earliest(g) > round_start) continue;
      const auto& gt = c.gates[g];
      const int na = pl.node_of[gt.q0], nb = pl.node_of[gt.q1];
      if (engaged.count(na) || engaged.count(nb)) continue;
      engaged.insert(na);
      engaged.insert(nb);
      reqs.push_back({g, na, nb});
    }

    RoundAssignment ra = route_round(t, reqs, tc.max_extra_hops);
    if (ra.granted.empty())
      throw std::runtime_error(
          "schedule: no request routable in an empty round (radix/topology "
          "mismatch with the placement)");

    double max_leg = 0;
    for (const auto& [gid, path] : ra.granted) {
      const LossBudget lb =
          loss_budget(path.switch_crossings, tech, t.k, tc.fiber_km,
                      tc.fiber_db_per_km, tc.bsa_success);
      const double leg =
          link_timing(tc.t_attempt_s, lb.total_db, 0, tc.purification_factor)
              .t_leg_s;
      max_leg = std::max(max_leg, leg);
    }
    const bool changed = machine.apply(ra.switch_pairings);
    const double duration = max_leg + (changed ? tc.t_gs_s : 0.0);
    const double round_end = round_start + duration;

    Round round;
    round.index = static_cast<int>(s.rounds.size());
    round.switch_state_changed = changed;
    round.start_s = round_start;
    round.duration_s = duration;
    round.duration_slots = duration / slot;
    round.max_leg_s = max_leg;
    for (const auto& [gid, path] : ra.granted) {
      round.gate_ids.push_back(gid);
      ready_remote.erase(gid);
      blocked_rounds.erase(gid);
      commit(gid, round_start, round_end, round.index);
      node_avail[path.node_a] = round_end;
      node_avail[path.node_b] = round_end;
    }
    for (int gid : ra.blocked) {
      ++s.blocked_retries;
      if (++blocked_rounds[gid] > retry_limit)
        throw std::runtime_error(
            "schedule: request for gate " + std::to_string(gid) +
            " blocked for more than " + std::to_string(retry_limit) +
            " consecutive rounds (livelock)");
    }
    round.assignment = std::move(ra);
    s.rounds.push_back(std::move(round));
    prev_round_end = round_end;
  }

  for (int g = 0; g < n_gates; ++g) {
    s.makespan_s = std::max(s.makespan_s, s.gate_times[g].end_s);
    if (is_remote(g)) ++s.remote_gates;
  }
  s.makespan_slots = s.makespan_s / slot;

  // fold local activity into per-node epochs split by that node's rounds
  {
    std::vector<std::vector<std::pair<double, int>>> engagements(
        t.num_nodes());  // (round end, round index)
    for (const auto& r : s.rounds)
      for (const auto& [gid, path] : r.assignment.granted) {
        engagements[path.node_a].push_back({r.end_s(), r.index});
        engagements[path.node_b].push_back({r.end_s(), r.index});
      }
    std::map<std::pair<int, int>, LocalEpoch> epochs;  // (node, #rounds before)
    for (int g = 0; g < n_gates; ++g) {
      if (s.gate_times[g].round >= 0) continue;
      const auto& gt = c.gates[g];
      const double start = s.gate_times[g].start_s;
      for (int q : {gt.q0, gt.q1}) {
        if (q < 0) continue;
        const int node = pl.node_of[q];
        const auto& eng = engagements[node];
        int before = 0;
        while (before < static_cast<int>(eng.size()) &&
               eng[before].first <= start + 1e-15)
          ++before;
        auto& ep = epochs[{node, before}];
        if (ep.gate_ids.empty()) {
          ep.node = node;
          ep.after_round = before > 0 ? eng[before - 1].second : -1;
          ep.start_s = start;
          ep.end_s = s.gate_times[g].end_s;
        }
        ep.gate_ids.push_back(g);
        ep.start_s = std::min(ep.start_s, start);
        ep.end_s = std::max(ep.end_s, s.gate_times[g].end_s);
      }
    }
    for (auto& [key, ep] : epochs) s.local_epochs.push_back(std::move(ep));
  }
  return s;
}

// Full replay audit of a schedule against its inputs. Checks dependency
// order, round bookkeeping (resources, durations, t_gs charging), and that
// no node runs local gates while one of its rounds is in flight.
inline std::vector<std::string> validate_schedule(
    const Circuit& c, const Placement& pl, const QFlyTopology& t,
    const TimingConfig& tc, const SwitchTechnology& tech, const Schedule& s) {
  std::vector<std::string> errs;
  auto fail = [&errs](std::string m) {
    if (errs.size() < 50) errs.push_back(std::move(m));
  };
  const double eps = 1e-9 * std::max(1.0, s.makespan_s);

  if (s.circuit_digest != digest_of(c)) fail("circuit digest mismatch");
  if (s.gate_times.size() != c.gates.size()) {
    fail("gate_times size mismatch");
    return errs;
  }
  if (!(s.slot_seconds > 0)) fail("slot_seconds must be > 0");

  auto is_remote = [&](int g) {
    const auto& gt = c.gates[g];
    return gt.two_qubit() && !pl.local_pair(gt.q0, gt.q1);
  };

  for (size_t g = 0; g < c.gates.size(); ++g) {
    const auto& gt = s.gate_times[g];
    if (gt.start_s < 0 || gt.end_s < gt.start_s - eps)
      fail("gate " + std::to_string(g) + " has a malformed interval");
    if (is_remote(static_cast<int>(g))) {
      if (gt.round < 0 || gt.round >= static_cast<int>(s.rounds.size()))
        fail("remote gate " + std::to_string(g) + " not tied to a round");
    } else if (gt.round != -1) {
      fail("local gate " + std::to_string(g) + " claims a round");
    }
  }

  // program order per qubit
  std::vector<int> last(c.n, -1);
  for (int g = 0; g < static_cast<int>(c.gates.size()); ++g) {
    for (int q : {c.gates[g].q0, c.gates[g].q1}) {
      if (q < 0) continue;
      if (last[q] >= 0 &&
          s.gate_times[g].start_s < s.gate_times[last[q]].end_s - eps)
        fail("gate " + std::to_string(g) + " starts before its qubit-" +
             std::to_string(q) + " predecessor finishes");
      last[q] = g;
    }
  }

  // rounds: order, resources, durations, state charging
  detail::SwitchState machine;
  double prev_end = 0;
  std::set<int> round_gates;
  for (size_t i = 0; i < s.rounds.size(); ++i) {
    const Round& r = s.rounds[i];
    if (r.index != static_cast<int>(i)) fail("round indices out of order");
    if (r.start_s < prev_end - eps)
      fail("round " + std::to_string(i) + " overlaps its predecessor");
    prev_end = r.end_s();

    std::set<int> bsas, fibers, nodes;
    double max_leg = 0;
    if (r.gate_ids.empty()) fail("round " + std::to_string(i) + " grants nothing");
    std::set<int> listed(r.gate_ids.begin(), r.gate_ids.end());
    if (listed.size() != r.assignment.granted.size())
      fail("round " + std::to_string(i) + " gate list != granted set");
    for (const auto& [gid, path] : r.assignment.granted) {
      if (!listed.count(gid))
        fail("round grant " + std::to_string(gid) + " missing from gate list");
      if (!round_gates.insert(gid).second)
        fail("gate " + std::to_string(gid) + " granted in two rounds");
      if (gid < 0 || gid >= static_cast<int>(c.gates.size()) ||
          !is_remote(gid)) {
        fail("round grants non-remote gate " + std::to_string(gid));
        continue;
      }
      const auto& gt = c.gates[gid];
      const auto want = std::minmax(pl.node_of[gt.q0], pl.node_of[gt.q1]);
      const auto got = std::minmax(path.node_a, path.node_b);
      if (want != got)
        fail("gate " + std::to_string(gid) + " routed between wrong nodes");
      if (s.gate_times[gid].round != r.index ||
          std::abs(s.gate_times[gid].start_s - r.start_s) > eps ||
          std::abs(s.gate_times[gid].end_s - r.end_s()) > eps)
        fail("gate " + std::to_string(gid) + " times disagree with its round");
      for (auto e : validate_path(t, path))
        fail("round " + std::to_string(i) + ": " + e);
      if (!bsas.insert(path.bsa).second)
        fail("round " + std::to_string(i) + " reuses a BSA");
      for (const auto* arm : {&path.arm_a, &path.arm_b})
        for (int f : *arm)
          if (!fibers.insert(f).second)
            fail("round " + std::to_string(i) + " reuses fiber " +
                 std::to_string(f));
      for (int nd : {path.node_a, path.node_b})
        if (!nodes.insert(nd).second)
          fail("round " + std::to_string(i) + " engages node " +
               std::to_string(nd) + " twice");
      const auto lb = loss_budget(path.switch_crossings, tech, t.k,
                                  tc.fiber_km, tc.fiber_db_per_km,
                                  tc.bsa_success);
      max_leg = std::max(
          max_leg, link_timing(tc.t_attempt_s, lb.total_db, 0,
                               tc.purification_factor)
                       .t_leg_s);
    }
    const bool changed = machine.apply(r.assignment.switch_pairings);
    if (changed != r.switch_state_changed)
      fail("round " + std::to_string(i) +
           " mislabels its switch reconfiguration");
    const double want_dur = max_leg + (changed ? tc.t_gs_s : 0.0);
    if (std::abs(r.duration_s - want_dur) > eps)
      fail("round " + std::to_string(i) + " duration " +
           std::to_string(r.duration_s) + " != replayed " +
           std::to_string(want_dur));
    if (std::abs(r.duration_slots - r.duration_s / s.slot_seconds) > 1e-9)
      fail("round " + std::to_string(i) + " slot conversion wrong");
  }

  // every node's local gates stay clear of its rounds
  std::vector<std::vector<std::pair<double, double>>> busy(t.num_nodes());
  for (const auto& r : s.rounds)
    for (const auto& [gid, path] : r.assignment.granted) {
      busy[path.node_a].push_back({r.start_s, r.end_s()});
      busy[path.node_b].push_back({r.start_s, r.end_s()});
    }
  for (int g = 0; g < static_cast<int>(c.gates.size()); ++g) {
    if (s.gate_times[g].round >= 0) continue;
    for (int q : {c.gates[g].q0, c.gates[g].q1}) {
      if (q < 0) continue;
      for (const auto& [bs, be] : busy[pl.node_of[q]])
        if (s.gate_times[g].start_s < be - eps &&
            s.gate_times[g].end_s > bs + eps)
          fail("local gate " + std::to_string(g) +
               " overlaps a round engaging node " +
               std::to_string(pl.node_of[q]));
    }
  }

  double max_end = 0;
  for (const auto& gt : s.gate_times) max_end = std::max(max_end, gt.end_s);
  if (std::abs(max_end - s.makespan_s) > eps)
    fail("makespan_s disagrees with the latest gate end");
  if (std::abs(s.makespan_slots - s.makespan_s / s.slot_seconds) > 1e-9)
    fail("makespan slot conversion wrong");
  return errs;
}

// ideal monolithic machine: every gate costs one slot (rotations weighted),
// unlimited concurrency, so the makespan is the weighted critical path
struct MonolithicResult {
  double makespan_slots = 0;
  std::uint64_t circuit_digest = 0;
};

inline MonolithicResult monolithic_baseline(const Circuit& c,
                                            double rotation_slot_weight = 1.0) {
  detail::DependencyTracker dep(c);
  std::vector<double> finish(c.gates.size(), 0.0);
  MonolithicResult res;
  res.circuit_digest = digest_of(c);
  for (size_t g = 0; g < c.gates.size(); ++g) {
    const double cost = c.gates[g].kind == GateKind::RotationSlot
                            ? rotation_slot_weight
                            : 1.0;
    finish[g] = dep.pred_ready[g] + cost;
    for (int nxt : dep.succs[g])
      dep.pred_ready[nxt] = std::max(dep.pred_ready[nxt], finish[g]);
    res.makespan_slots = std::max(res.makespan_slots, finish[g]);
  }
  return res;
}

}  // namespace qfly
