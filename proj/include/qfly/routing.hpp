#pragma once

// Connection routing. A connection between two end nodes is a pair of
// photonic arms meeting at one BSA. Each arm is an ordered fiber list; every
// fiber whose far end is a switch contributes one switch crossing, so
// crossings fall straight out of the arm lists.
//
// The BSA always sits in an endpoint's group. The other endpoint's photons
// travel a directed chain of inter-group fibers; chains longer than the
// minimum bypass intermediate switches (input -> output, no BSA consumed
// there). Half-duplex arms enter their local switch first; a full-duplex
// node that owns the BSA uses its direct fiber instead, saving a crossing.
//
// route_round arbitrates one round: greedy in request order, each request
// takes its first conflict-free candidate path, losers stay blocked until a
// later round. Within a round a BSA serves one connection, a fiber carries
// one connection, and a node interface feeds one arm.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qfly/switch_loss.hpp"
#include "qfly/topology.hpp"

namespace qfly {

struct PathSpec {
  int node_a = -1;
  int node_b = -1;
  int bsa = -1;
  std::vector<int> arm_a;  // fiber ids, node_a outward
  std::vector<int> arm_b;  // fiber ids, node_b outward
  int switch_crossings = 0;
  int inter_group_hops = 0;
};

inline int count_switch_crossings(const QFlyTopology& t,
                                  const std::vector<int>& arm) {
  int c = 0;
  for (int f : arm)
    if (t.is_switch(t.fibers[f].dst)) ++c;
  return c;
}

inline std::vector<int> switches_on_arm(const QFlyTopology& t,
                                        const std::vector<int>& arm) {
  std::vector<int> sw;
  for (int f : arm)
    if (t.is_switch(t.fibers[f].dst)) sw.push_back(t.fibers[f].dst);
  return sw;
}

inline std::vector<std::string> validate_path(const QFlyTopology& t,
                                              const PathSpec& path) {
  std::vector<std::string> errs;
  auto fail = [&errs](std::string m) { errs.push_back(std::move(m)); };
  if (!t.is_node(path.node_a) || !t.is_node(path.node_b))
    fail("path endpoints must be end nodes");
  if (path.node_a == path.node_b) fail("path endpoints must differ");
  if (!t.is_bsa(path.bsa)) fail("path BSA id is not a BSA");
  const int nf = static_cast<int>(t.fibers.size());
  for (const auto* arm : {&path.arm_a, &path.arm_b}) {
    int at = arm == &path.arm_a ? path.node_a : path.node_b;
    for (int f : *arm) {
      if (f < 0 || f >= nf) {
        fail("arm references fiber " + std::to_string(f) +
             " absent from the topology");
        return errs;
      }
      if (t.fibers[f].src != at) {
        fail("arm fibers are not contiguous at " + t.element_label(at));
        return errs;
      }
      at = t.fibers[f].dst;
    }
    if (at != path.bsa) fail("arm does not terminate at the path BSA");
  }
  if (!errs.empty()) return errs;
  const int cross = count_switch_crossings(t, path.arm_a) +
                    count_switch_crossings(t, path.arm_b);
  if (cross != path.switch_crossings)
    fail("switch_crossings field disagrees with the arm lists");
  int hops = 0;
  for (const auto* arm : {&path.arm_a, &path.arm_b})
    for (int f : *arm)
      if (t.fibers[f].kind == FiberKind::InterGroup) ++hops;
  if (hops != path.inter_group_hops)
    fail("inter_group_hops field disagrees with the arm lists");
  // the two arms may only share the BSA
  std::set<int> seen(path.arm_a.begin(), path.arm_a.end());
  for (int f : path.arm_b)
    if (seen.count(f)) fail("arms share fiber " + std::to_string(f));
  return errs;
}

namespace detail {

// all simple directed group chains src -> dst with at most max_hops fibers,
// emitted shortest first, lexicographic by intermediate group within a length
inline void enumerate_group_chains(const QFlyTopology& t, int src, int dst,
                                   int max_hops,
                                   std::vector<std::vector<int>>& out) {
  if (src == dst) {
    out.emplace_back();
    return;
  }
  std::vector<int> chain;  // fiber ids
  std::vector<char> used(t.g, 0);
  for (int hops = 1; hops <= max_hops; ++hops) {
    used.assign(t.g, 0);
    used[src] = 1;
    chain.clear();
    // emit chains of exactly `hops` fibers so shorter ones sort first
    auto dfs = [&](auto&& self, int at) -> void {
      if (static_cast<int>(chain.size()) == hops) {
        if (at == dst) out.push_back(chain);
        return;
      }
      for (int next = 0; next < t.g; ++next) {
        const int f = t.inter_group_fiber(at, next);
        if (f < 0 || used[next] || next == src) continue;
        if (next == dst && static_cast<int>(chain.size()) + 1 != hops)
          continue;
        used[next] = 1;
        chain.push_back(f);
        self(self, next);
        chain.pop_back();
        used[next] = 0;
      }
    };
    dfs(dfs, src);
  }
}

}  // namespace detail

// All candidate paths between two nodes with inter_group_hops at most
// (minimum achievable + max_extra_hops), cheapest first. Ordering key:
// (switch_crossings, inter_group_hops, BSA group, arm fibers, BSA id).
inline std::vector<PathSpec> find_paths(const QFlyTopology& t, int node_a,
                                        int node_b, int max_extra_hops = 0) {
  if (!t.is_node(node_a) || !t.is_node(node_b))
    throw std::invalid_argument("find_paths: endpoints must be end nodes");
  if (node_a == node_b)
    throw std::invalid_argument("find_paths: endpoints must differ");
  if (max_extra_hops < 0)
    throw std::invalid_argument("find_paths: max_extra_hops must be >= 0");

  const int ga = t.group_of_node(node_a);
  const int gb = t.group_of_node(node_b);
  const bool half = is_half_duplex(t.variant);

  std::vector<PathSpec> paths;

  // arm that stays inside the BSA's group
  auto local_arm = [&](int node, int bsa, int port, bool direct) {
    std::vector<int> arm;
    if (direct) {
      arm.push_back(t.node_bsa_fiber[node]);
    } else {
      arm.push_back(t.node_switch_fiber[node]);
      arm.push_back(t.bsa_in_fiber[t.bsa_index(bsa)][port]);
    }
    return arm;
  };

  // arm from `node` through its switch along `chain` into BSA port `port`
  auto travel_arm = [&](int node, const std::vector<int>& chain, int bsa,
                        int port) {
    std::vector<int> arm;
    arm.reserve(chain.size() + 2);
    arm.push_back(t.node_switch_fiber[node]);
    arm.insert(arm.end(), chain.begin(), chain.end());
    arm.push_back(t.bsa_in_fiber[t.bsa_index(bsa)][port]);
    return arm;
  };

  auto emit = [&](int bsa, std::vector<int> arm_a, std::vector<int> arm_b) {
    PathSpec ps;
    ps.node_a = node_a;
    ps.node_b = node_b;
    ps.bsa = bsa;
    ps.arm_a = std::move(arm_a);
    ps.arm_b = std::move(arm_b);
    ps.switch_crossings = count_switch_crossings(t, ps.arm_a) +
                          count_switch_crossings(t, ps.arm_b);
    for (const auto* arm : {&ps.arm_a, &ps.arm_b})
      for (int f : *arm)
        if (t.fibers[f].kind == FiberKind::InterGroup) ++ps.inter_group_hops;
    paths.push_back(std::move(ps));
  };

  if (ga == gb) {
    // same group: every local BSA works, no fibers between groups involved
    if (half) {
      for (int m = 0; m < t.b; ++m) {
        const int bsa = t.bsa_id(ga, m);
        emit(bsa, local_arm(node_a, bsa, 0, false),
             local_arm(node_b, bsa, 1, false));
      }
    } else {
      for (int owner : {node_a, node_b}) {
        const int other = owner == node_a ? node_b : node_a;
        const int bsa = t.bsa_id(ga, t.local_of_node(owner));
        auto own = local_arm(owner, bsa, 0, true);
        auto thru = local_arm(other, bsa, 1, false);
        if (owner == node_a)
          emit(bsa, std::move(own), std::move(thru));
        else
          emit(bsa, std::move(thru), std::move(own));
      }
    }
  } else {
    int min_hops = -1;
    for (int target : {ga, gb}) {
      const int src = target == ga ? gb : ga;
      const int d = directed_group_distance(t, src, target);
      if (d > 0 && (min_hops < 0 || d < min_hops)) min_hops = d;
    }
    if (min_hops < 0)
      throw std::runtime_error("find_paths: groups mutually unreachable");
    const int budget = min_hops + max_extra_hops;

    for (int target : {gb, ga}) {  // BSA beside node_b first, then node_a
      const int src = target == ga ? gb : ga;
      const int local_node = target == ga ? node_a : node_b;
      const int far_node = target == ga ? node_b : node_a;
      std::vector<std::vector<int>> chains;
      detail::enumerate_group_chains(t, src, target, budget, chains);
      for (const auto& chain : chains) {
        if (half) {
          for (int m = 0; m < t.b; ++m) {
            const int bsa = t.bsa_id(target, m);
            auto far = travel_arm(far_node, chain, bsa, 0);
            auto local = local_arm(local_node, bsa, 1, false);
            if (far_node == node_a)
              emit(bsa, std::move(far), std::move(local));
            else
              emit(bsa, std::move(local), std::move(far));
          }
        } else {
          const int bsa = t.bsa_id(target, t.local_of_node(local_node));
          auto far = travel_arm(far_node, chain, bsa, 1);
          auto local = local_arm(local_node, bsa, 0, true);
          if (far_node == node_a)
            emit(bsa, std::move(far), std::move(local));
          else
            emit(bsa, std::move(local), std::move(far));
        }
      }
    }
  }

  std::sort(paths.begin(), paths.end(),
            [&](const PathSpec& x, const PathSpec& y) {
              const auto kx = std::tuple(x.switch_crossings,
                                         x.inter_group_hops,
                                         t.group_of_bsa(x.bsa), x.arm_a,
                                         x.arm_b, x.bsa);
              const auto ky = std::tuple(y.switch_crossings,
                                         y.inter_group_hops,
                                         t.group_of_bsa(y.bsa), y.arm_a,
                                         y.arm_b, y.bsa);
              return kx < ky;
            });
  return paths;
}

// total loss of one concrete path; rejects paths that do not fit `t`
inline LossBudget end_to_end_loss(const QFlyTopology& t, const PathSpec& path,
                                  const SwitchTechnology& tech,
                                  double fiber_km, double fiber_db_per_km,
                                  double bsa_success = kDefaultBsaSuccess) {
  auto errs = validate_path(t, path);
  if (!errs.empty())
    throw std::invalid_argument("end_to_end_loss: " + errs.front());
  return loss_budget(path.switch_crossings, tech, t.k, fiber_km,
                     fiber_db_per_km, bsa_success);
}

struct ConnectionRequest {
  int id = -1;
  int node_a = -1;
  int node_b = -1;
};

struct RoundAssignment {
  std::map<int, PathSpec> granted;  // request id -> path
  std::vector<int> blocked;         // request ids, in submission order
  std::set<int> bsas_used;
  std::set<int> fibers_used;
  std::set<std::pair<int, int>> interfaces_used;  // (node, interface)
  // per-switch fiber-to-fiber pairings this round establishes:
  // (switch id, in fiber, out fiber)
  std::set<std::tuple<int, int, int>> switch_pairings;
};

namespace detail {

// decompose an arm into the switch pairings it needs: consecutive fiber
// pairs around each switch on the arm
inline void collect_pairings(const QFlyTopology& t, const std::vector<int>& arm,
                             std::set<std::tuple<int, int, int>>& pairings) {
  for (size_t i = 0; i + 1 < arm.size(); ++i) {
    const int mid = t.fibers[arm[i]].dst;
    if (t.is_switch(mid)) pairings.emplace(mid, arm[i], arm[i + 1]);
  }
}

inline int interface_for_arm(const QFlyTopology& t,
                             const std::vector<int>& arm) {
  // interface 0 feeds the switch fiber, interface 1 the direct BSA fiber
  return t.fibers[arm.front()].kind == FiberKind::NodeToBsa ? 1 : 0;
}

}  // namespace detail

// Greedy single-round arbitration. Requests must name distinct unordered
// node pairs and no node twice. Deterministic: same inputs, same grants.
inline RoundAssignment route_round(const QFlyTopology& t,
                                   const std::vector<ConnectionRequest>& reqs,
                                   int max_extra_hops = 0) {
  std::set<int> nodes_seen;
  std::set<std::pair<int, int>> pairs_seen;
  std::set<int> ids_seen;
  for (const auto& r : reqs) {
    if (!t.is_node(r.node_a) || !t.is_node(r.node_b) || r.node_a == r.node_b)
      throw std::invalid_argument(
          "route_round: request " + std::to_string(r.id) +
          " endpoints must be two distinct end nodes");
    if (!ids_seen.insert(r.id).second)
      throw std::invalid_argument("route_round: duplicate request id " +
                                  std::to_string(r.id));
    const auto pr = std::minmax(r.node_a, r.node_b);
    if (!pairs_seen.insert({pr.first, pr.second}).second)
      throw std::invalid_argument("route_round: duplicate node pair in round");
    if (!nodes_seen.insert(r.node_a).second ||
        !nodes_seen.insert(r.node_b).second)
      throw std::invalid_argument(
          "route_round: node engaged by two requests in one round");
  }

  RoundAssignment ra;
  for (const auto& r : reqs) {
    bool granted = false;
    for (auto& cand : find_paths(t, r.node_a, r.node_b, max_extra_hops)) {
      if (ra.bsas_used.count(cand.bsa)) continue;
      bool clash = false;
      for (const auto* arm : {&cand.arm_a, &cand.arm_b}) {
        for (int f : *arm)
          if (ra.fibers_used.count(f)) {
            clash = true;
            break;
          }
        if (clash) break;
      }
      if (clash) continue;
      ra.bsas_used.insert(cand.bsa);
      for (const auto* arm : {&cand.arm_a, &cand.arm_b}) {
        for (int f : *arm) ra.fibers_used.insert(f);
        detail::collect_pairings(t, *arm, ra.switch_pairings);
      }
      ra.interfaces_used.emplace(r.node_a,
                                 detail::interface_for_arm(t, cand.arm_a));
      ra.interfaces_used.emplace(r.node_b,
                                 detail::interface_for_arm(t, cand.arm_b));
      ra.granted.emplace(r.id, std::move(cand));
      granted = true;
      break;
    }
    if (!granted) ra.blocked.push_back(r.id);
  }
  return ra;
}

}  // namespace qfly
