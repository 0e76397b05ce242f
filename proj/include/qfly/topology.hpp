#pragma once

// Q-Fly interconnect topology: g groups of p end nodes, one optical switch
// per group, b Bell-state analyzers (BSAs) per group, and a flat layer of
// directed inter-group fibers whose shape depends on the variant.
//
// Variants:
//   single-path half-duplex  k = p + floor(g/2)   2b = p   1 interface/node
//   dual-path   half-duplex  k = p + g - 1        2b = p   1 interface/node
//   dual-path   full-duplex  k = p + g - 1        b  = p   2 interfaces/node
//
// Single-path wiring: group i sends one fiber to groups i+1 .. i+floor(g/2)
// (mod g); for even g exactly one extra diameter fiber per antipodal pair,
// oriented from the lower index. Dual-path wiring: one fiber per ordered
// group pair. Detectors: every BSA carries 4, so d = 4*b*g.
//
// Element ids share one integer space: nodes [0, N), switches [N, N+g),
// BSAs [N+g, N+g+g*b). All id assignments are pure functions of
// (group, local index); rebuilding the same (variant, g, p) yields an
// identical object.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <queue>
#include <tuple>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qfly {

enum class QFlyVariant {
  SinglePathHalfDuplex,
  DualPathHalfDuplex,
  DualPathFullDuplex,
};

constexpr bool is_half_duplex(QFlyVariant v) {
  return v != QFlyVariant::DualPathFullDuplex;
}
constexpr bool is_dual_path(QFlyVariant v) {
  return v != QFlyVariant::SinglePathHalfDuplex;
}

inline std::string_view variant_code(QFlyVariant v) {
  switch (v) {
    case QFlyVariant::SinglePathHalfDuplex: return "sphd";
    case QFlyVariant::DualPathHalfDuplex: return "dphd";
    case QFlyVariant::DualPathFullDuplex: return "dpfd";
  }
  return "?";
}

inline std::string_view variant_name(QFlyVariant v) {
  switch (v) {
    case QFlyVariant::SinglePathHalfDuplex: return "single-path half-duplex";
    case QFlyVariant::DualPathHalfDuplex: return "dual-path half-duplex";
    case QFlyVariant::DualPathFullDuplex: return "dual-path full-duplex";
  }
  return "?";
}

inline std::optional<QFlyVariant> parse_variant(std::string_view s) {
  if (s == "sphd") return QFlyVariant::SinglePathHalfDuplex;
  if (s == "dphd") return QFlyVariant::DualPathHalfDuplex;
  if (s == "dpfd") return QFlyVariant::DualPathFullDuplex;
  return std::nullopt;
}

constexpr QFlyVariant kAllVariants[] = {
    QFlyVariant::SinglePathHalfDuplex,
    QFlyVariant::DualPathHalfDuplex,
    QFlyVariant::DualPathFullDuplex,
};

// Directed optical edges. dst_port distinguishes the two input ports of a
// BSA; -1 for edges that do not end on a BSA.
enum class FiberKind { NodeToSwitch, SwitchToBsa, InterGroup, NodeToBsa };

struct Fiber {
  int id;
  FiberKind kind;
  int src;
  int dst;
  int dst_port;
};

struct EndNode {
  int id;
  int group;
  int local;
  int interfaces;  // 1 half-duplex, 2 full-duplex
};

struct GroupSwitch {
  int id;
  int group;
};

struct Bsa {
  int id;
  int group;
  int local;
};

struct QFlyTopology {
  QFlyVariant variant;
  int g = 0;  // groups
  int p = 0;  // end nodes per group
  int k = 0;  // switch radix
  int b = 0;  // BSAs per group

  std::vector<EndNode> nodes;
  std::vector<GroupSwitch> switches;
  std::vector<Bsa> bsas;
  std::vector<Fiber> fibers;

  // index tables, filled by build_topology
  std::vector<int> node_switch_fiber;          // node -> fiber id
  std::vector<int> node_bsa_fiber;             // node -> fiber id, -1 if none
  std::vector<std::array<int, 2>> bsa_in_fiber;  // bsa index -> fiber per port
  std::vector<int> inter_fiber;                // g*g, fiber id or -1

  int num_nodes() const { return g * p; }
  std::int64_t num_detectors() const { return 4ll * b * g; }

  int node_id(int group, int local) const { return group * p + local; }
  int switch_id(int group) const { return num_nodes() + group; }
  int bsa_id(int group, int local) const {
    return num_nodes() + g + group * b + local;
  }

  bool is_node(int id) const { return id >= 0 && id < num_nodes(); }
  bool is_switch(int id) const {
    return id >= num_nodes() && id < num_nodes() + g;
  }
  bool is_bsa(int id) const {
    return id >= num_nodes() + g && id < num_nodes() + g + g * b;
  }

  int group_of_node(int id) const { return id / p; }
  int local_of_node(int id) const { return id % p; }
  int group_of_switch(int id) const { return id - num_nodes(); }
  int bsa_index(int id) const { return id - num_nodes() - g; }
  int group_of_bsa(int id) const { return bsa_index(id) / b; }
  int local_of_bsa(int id) const { return bsa_index(id) % b; }

  int group_of(int id) const {
    if (is_node(id)) return group_of_node(id);
    if (is_switch(id)) return group_of_switch(id);
    if (is_bsa(id)) return group_of_bsa(id);
    throw std::out_of_range("element id " + std::to_string(id) +
                            " outside topology");
  }

  // fiber id for the directed inter-group edge i -> j, -1 if absent
  int inter_group_fiber(int i, int j) const { return inter_fiber[i * g + j]; }

  std::string element_label(int id) const {
    if (is_node(id))
      return "n" + std::to_string(group_of_node(id)) + "." +
             std::to_string(local_of_node(id));
    if (is_switch(id)) return "sw" + std::to_string(group_of_switch(id));
    if (is_bsa(id))
      return "bsa" + std::to_string(group_of_bsa(id)) + "." +
             std::to_string(local_of_bsa(id));
    return "?" + std::to_string(id);
  }
};

inline int radix_for(QFlyVariant variant, int g, int p) {
  if (variant == QFlyVariant::SinglePathHalfDuplex) return p + g / 2;
  return p + g - 1;
}

inline QFlyTopology build_topology(QFlyVariant variant, int g, int p) {
  if (g < 3)
    throw std::invalid_argument(
        "build_topology: need at least 3 groups, got g=" + std::to_string(g));
  if (p < 2)
    throw std::invalid_argument(
        "build_topology: need at least 2 nodes per group, got p=" +
        std::to_string(p));
  if (is_half_duplex(variant) && p % 2 != 0)
    throw std::invalid_argument(
        "build_topology: half-duplex variants pair node interfaces, 2b = p "
        "requires even p, got p=" +
        std::to_string(p));

  QFlyTopology t;
  t.variant = variant;
  t.g = g;
  t.p = p;
  t.k = radix_for(variant, g, p);
  t.b = is_half_duplex(variant) ? p / 2 : p;

  const int n = g * p;
  t.nodes.reserve(n);
  const int ifaces = is_half_duplex(variant) ? 1 : 2;
  for (int gr = 0; gr < g; ++gr)
    for (int l = 0; l < p; ++l)
      t.nodes.push_back({t.node_id(gr, l), gr, l, ifaces});
  t.switches.reserve(g);
  for (int gr = 0; gr < g; ++gr) t.switches.push_back({t.switch_id(gr), gr});
  t.bsas.reserve(static_cast<size_t>(g) * t.b);
  for (int gr = 0; gr < g; ++gr)
    for (int m = 0; m < t.b; ++m) t.bsas.push_back({t.bsa_id(gr, m), gr, m});

  t.node_switch_fiber.assign(n, -1);
  t.node_bsa_fiber.assign(n, -1);
  t.bsa_in_fiber.assign(static_cast<size_t>(g) * t.b, {-1, -1});
  t.inter_fiber.assign(static_cast<size_t>(g) * g, -1);

  auto add = [&t](FiberKind kind, int src, int dst, int port) {
    const int id = static_cast<int>(t.fibers.size());
    t.fibers.push_back({id, kind, src, dst, port});
    return id;
  };

  for (const auto& node : t.nodes) {
    t.node_switch_fiber[node.id] =
        add(FiberKind::NodeToSwitch, node.id, t.switch_id(node.group), -1);
  }

  if (is_half_duplex(variant)) {
    // both BSA ports fed from the switch
    for (int gr = 0; gr < g; ++gr)
      for (int m = 0; m < t.b; ++m)
        for (int port = 0; port < 2; ++port)
          t.bsa_in_fiber[gr * t.b + m][port] =
              add(FiberKind::SwitchToBsa, t.switch_id(gr), t.bsa_id(gr, m),
                  port);
  } else {
    // port 0 wired straight to the paired node, port 1 to the switch
    for (int gr = 0; gr < g; ++gr)
      for (int m = 0; m < t.b; ++m) {
        const int node = t.node_id(gr, m);
        t.node_bsa_fiber[node] =
            add(FiberKind::NodeToBsa, node, t.bsa_id(gr, m), 0);
        t.bsa_in_fiber[gr * t.b + m][0] = t.node_bsa_fiber[node];
        t.bsa_in_fiber[gr * t.b + m][1] =
            add(FiberKind::SwitchToBsa, t.switch_id(gr), t.bsa_id(gr, m), 1);
      }
  }

  auto add_inter = [&](int i, int j) {
    t.inter_fiber[i * g + j] =
        add(FiberKind::InterGroup, t.switch_id(i), t.switch_id(j), -1);
  };
  if (variant == QFlyVariant::SinglePathHalfDuplex) {
    for (int i = 0; i < g; ++i)
      for (int d = 1; d <= (g - 1) / 2; ++d) add_inter(i, (i + d) % g);
    if (g % 2 == 0)
      for (int i = 0; i < g / 2; ++i) add_inter(i, i + g / 2);
  } else {
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j)
        if (i != j) add_inter(i, j);
  }
  return t;
}

// Structural audit. Empty result means every invariant holds. Kept separate
// from build_topology so tampered or hand-built objects can be checked.
inline std::vector<std::string> validate(const QFlyTopology& t) {
  std::vector<std::string> errs;
  auto fail = [&errs](std::string msg) { errs.push_back(std::move(msg)); };

  const int n = t.g * t.p;
  if (static_cast<int>(t.nodes.size()) != n)
    fail("node count != g*p");
  if (static_cast<int>(t.switches.size()) != t.g) fail("switch count != g");
  if (static_cast<int>(t.bsas.size()) != t.g * t.b)
    fail("bsa count != g*b");
  if (is_half_duplex(t.variant)) {
    if (2 * t.b != t.p) fail("half-duplex requires 2b = p");
  } else {
    if (t.b != t.p) fail("full-duplex requires b = p");
  }
  if (t.k != radix_for(t.variant, t.g, t.p))
    fail("radix k inconsistent with variant/g/p");
  if (t.num_detectors() != 4ll * t.b * t.g) fail("detector count != 4bg");

  const int ifaces = is_half_duplex(t.variant) ? 1 : 2;
  for (const auto& node : t.nodes)
    if (node.interfaces != ifaces) {
      fail("node " + std::to_string(node.id) + " has wrong interface count");
      break;
    }

  // degree bookkeeping
  std::vector<int> sw_in(t.g, 0), sw_out(t.g, 0);
  std::vector<std::array<int, 2>> bsa_port(static_cast<size_t>(t.g) * t.b,
                                           {0, 0});
  std::vector<int> inter_count(static_cast<size_t>(t.g) * t.g, 0);
  for (const auto& f : t.fibers) {
    switch (f.kind) {
      case FiberKind::NodeToSwitch:
        if (!t.is_node(f.src) || !t.is_switch(f.dst)) {
          fail("node->switch fiber with wrong endpoint types");
          break;
        }
        if (t.group_of_node(f.src) != t.group_of_switch(f.dst))
          fail("node wired to a foreign group switch");
        sw_in[t.group_of_switch(f.dst)]++;
        break;
      case FiberKind::SwitchToBsa:
        if (!t.is_switch(f.src) || !t.is_bsa(f.dst)) {
          fail("switch->bsa fiber with wrong endpoint types");
          break;
        }
        if (t.group_of_switch(f.src) != t.group_of_bsa(f.dst))
          fail("switch wired to a foreign group BSA");
        sw_out[t.group_of_switch(f.src)]++;
        if (f.dst_port < 0 || f.dst_port > 1)
          fail("BSA port out of range");
        else
          bsa_port[t.bsa_index(f.dst)][f.dst_port]++;
        break;
      case FiberKind::InterGroup: {
        if (!t.is_switch(f.src) || !t.is_switch(f.dst)) {
          fail("inter-group fiber with wrong endpoint types");
          break;
        }
        const int i = t.group_of_switch(f.src), j = t.group_of_switch(f.dst);
        if (i == j) fail("inter-group fiber loops on one group");
        sw_out[i]++;
        sw_in[j]++;
        inter_count[i * t.g + j]++;
        break;
      }
      case FiberKind::NodeToBsa:
        if (is_half_duplex(t.variant))
          fail("half-duplex topology has a direct node->BSA fiber");
        if (!t.is_node(f.src) || !t.is_bsa(f.dst)) {
          fail("node->bsa fiber with wrong endpoint types");
          break;
        }
        if (t.group_of_node(f.src) != t.group_of_bsa(f.dst))
          fail("node wired to a foreign group BSA");
        if (f.dst_port < 0 || f.dst_port > 1)
          fail("BSA port out of range");
        else
          bsa_port[t.bsa_index(f.dst)][f.dst_port]++;
        break;
    }
  }

  for (size_t i = 0; i < bsa_port.size(); ++i)
    if (bsa_port[i][0] != 1 || bsa_port[i][1] != 1) {
      fail("BSA " + std::to_string(i) +
           " must have exactly one feed per port");
      break;
    }

  // every group pair linked: single-path once per unordered pair, dual-path
  // once per ordered pair
  const bool dual = is_dual_path(t.variant);
  for (int i = 0; i < t.g && errs.size() < 100; ++i)
    for (int j = i + 1; j < t.g; ++j) {
      const int ij = inter_count[i * t.g + j], ji = inter_count[j * t.g + i];
      if (dual) {
        if (ij != 1 || ji != 1) {
          fail("ordered group pair (" + std::to_string(i) + "," +
               std::to_string(j) + ") not linked exactly once each way");
          goto pairs_done;
        }
      } else if (ij + ji != 1) {
        fail("unordered group pair {" + std::to_string(i) + "," +
             std::to_string(j) + "} must have exactly one fiber, has " +
             std::to_string(ij + ji));
        goto pairs_done;
      }
    }
pairs_done:

  // switch degree: in = p + inter_in, out = 2b|b + inter_out. Equal to k for
  // dual-path and odd-g single-path; even-g single-path leaves one port idle
  // on half of the switches (diameter fibers are single, not paired).
  for (int i = 0; i < t.g; ++i) {
    int want_in = t.k, want_out = t.k;
    if (t.variant == QFlyVariant::SinglePathHalfDuplex && t.g % 2 == 0) {
      want_out = t.k - 1 + (i < t.g / 2 ? 1 : 0);
      want_in = t.k - 1 + (i >= t.g / 2 ? 1 : 0);
    }
    if (sw_in[i] != want_in || sw_out[i] != want_out) {
      fail("switch " + std::to_string(i) + " degree in=" +
           std::to_string(sw_in[i]) + " out=" + std::to_string(sw_out[i]) +
           " (expected in=" + std::to_string(want_in) + " out=" +
           std::to_string(want_out) + ")");
      break;
    }
  }

  // index tables must agree with the fiber list
  for (const auto& node : t.nodes) {
    const int f = t.node_switch_fiber[node.id];
    if (f < 0 || t.fibers[f].src != node.id ||
        t.fibers[f].kind != FiberKind::NodeToSwitch) {
      fail("node_switch_fiber index broken");
      break;
    }
  }
  return errs;
}

// Largest-N configuration buildable from switches of radix k. Closed form
// over the handful of (g, p) splits, no topology is materialized.
struct ScalingSummary {
  QFlyVariant variant;
  int k = 0;
  std::int64_t n_nodes = 0;
  int g = 0;
  int p = 0;
  int b = 0;
  std::int64_t detectors = 0;
};

inline ScalingSummary max_topology_for_radix(QFlyVariant variant, int k) {
  if (k < 4)
    throw std::invalid_argument(
        "max_topology_for_radix: radix " + std::to_string(k) +
        " cannot host g >= 3 groups with p >= 2 nodes in any variant");
  bool found = false;
  ScalingSummary best{};
  auto consider = [&](int g, int p) {
    if (g < 3 || p < 2) return;
    if (is_half_duplex(variant) && p % 2 != 0) return;
    const std::int64_t n = static_cast<std::int64_t>(g) * p;
    // tie-breaks: even p beats odd p, then larger g
    const auto key = std::tuple(n, p % 2 == 0 ? 1 : 0, g);
    const auto best_key =
        std::tuple(best.n_nodes, best.p % 2 == 0 ? 1 : 0, best.g);
    if (!found || key > best_key) {
      found = true;
      const int b = is_half_duplex(variant) ? p / 2 : p;
      best = {variant, k, n, g, p, b, 4ll * b * g};
    }
  };
  if (variant == QFlyVariant::SinglePathHalfDuplex) {
    for (int h = 1; h <= k - 2; ++h) {  // h = floor(g/2)
      const int p = k - h;
      if (p < 2) break;
      consider(2 * h, p);
      consider(2 * h + 1, p);
    }
  } else {
    for (int p = 2; p <= k - 2; ++p) consider(k - p + 1, p);
  }
  if (!found)
    throw std::invalid_argument("max_topology_for_radix: no legal (g, p) for " +
                                std::string(variant_code(variant)) +
                                " radix " + std::to_string(k));
  return best;
}

inline std::vector<ScalingSummary> scaling_table(
    QFlyVariant variant, const std::vector<int>& radices) {
  std::vector<ScalingSummary> rows;
  rows.reserve(radices.size());
  for (int k : radices) rows.push_back(max_topology_for_radix(variant, k));
  return rows;
}

// shortest directed hop count over inter-group fibers, -1 if unreachable
inline int directed_group_distance(const QFlyTopology& t, int from, int to) {
  if (from == to) return 0;
  std::vector<int> dist(t.g, -1);
  dist[from] = 0;
  std::queue<int> q;
  q.push(from);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v = 0; v < t.g; ++v) {
      if (t.inter_group_fiber(u, v) < 0 || dist[v] >= 0) continue;
      dist[v] = dist[u] + 1;
      if (v == to) return dist[v];
      q.push(v);
    }
  }
  return dist[to];
}

// minimum fibers traversed in whichever orientation admits a connection
inline int inter_group_distance(const QFlyTopology& t, int i, int j) {
  if (i < 0 || i >= t.g || j < 0 || j >= t.g)
    throw std::out_of_range("inter_group_distance: group index out of range");
  if (i == j) return 0;
  const int a = directed_group_distance(t, i, j);
  const int c = directed_group_distance(t, j, i);
  if (a < 0 && c < 0)
    throw std::runtime_error("inter_group_distance: groups mutually unreachable");
  if (a < 0) return c;
  if (c < 0) return a;
  return std::min(a, c);
}

}  // namespace qfly
