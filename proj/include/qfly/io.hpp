#pragma once

// Serialization. Every format carries a versioned header line; numbers go
// through one fixed printf spec so identical runs produce identical bytes.
//
//   topology text   "qfly-topology v1"      human-readable summary + wiring
//   topology CSV    "# qfly-topology-edges v1"  one row per fiber
//   circuit CSV     "# qfly-circuit v1"     one row per gate
//   schedule trace  line-delimited JSON, header record {"format":...,"v":1}
//   summary CSV     "# qfly-summary v1"     one row per experiment
//   report CSV      "# qfly-slowdown v1"    one row per compared machine

#include <cstdio>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "qfly/experiments.hpp"
#include "qfly/lattice.hpp"
#include "qfly/routing.hpp"
#include "qfly/scheduler.hpp"
#include "qfly/topology.hpp"
#include "qfly/workload.hpp"

namespace qfly {

using TraceJson = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string_view fiber_kind_code(FiberKind k) {
  switch (k) {
    case FiberKind::NodeToSwitch: return "node-switch";
    case FiberKind::SwitchToBsa: return "switch-bsa";
    case FiberKind::InterGroup: return "inter-group";
    case FiberKind::NodeToBsa: return "node-bsa";
  }
  return "?";
}

inline std::string_view gate_kind_code(GateKind k) {
  switch (k) {
    case GateKind::Hadamard: return "h";
    case GateKind::RotationSlot: return "rot";
    case GateKind::Cnot: return "cnot";
  }
  return "?";
}

inline void write_topology_text(std::ostream& out, const QFlyTopology& t) {
  out << "qfly-topology v1\n";
  out << "variant " << variant_code(t.variant) << " (" << variant_name(t.variant)
      << ")\n";
  out << "groups " << t.g << "\n";
  out << "nodes-per-group " << t.p << "\n";
  out << "radix " << t.k << "\n";
  out << "bsas-per-group " << t.b << "\n";
  out << "node-interfaces " << (is_half_duplex(t.variant) ? 1 : 2) << "\n";
  out << "nodes " << t.num_nodes() << "\n";
  out << "detectors " << t.num_detectors() << "\n";
  out << "fibers " << t.fibers.size() << "\n";
  out << "inter-group-fibers:\n";
  for (const auto& f : t.fibers)
    if (f.kind == FiberKind::InterGroup)
      out << "  " << t.group_of_switch(f.src) << " -> "
          << t.group_of_switch(f.dst) << "\n";
}

inline void write_topology_edges_csv(std::ostream& out, const QFlyTopology& t) {
  out << "# qfly-topology-edges v1\n";
  out << "fiber_id,kind,src,dst,dst_port,src_label,dst_label\n";
  for (const auto& f : t.fibers)
    out << f.id << ',' << fiber_kind_code(f.kind) << ',' << f.src << ','
        << f.dst << ',' << f.dst_port << ',' << t.element_label(f.src) << ','
        << t.element_label(f.dst) << "\n";
}

inline void write_circuit_csv(std::ostream& out, const Circuit& c) {
  out << "# qfly-circuit v1\n";
  out << "index,kind,q0,q1,layer,control,target\n";
  for (size_t i = 0; i < c.gates.size(); ++i) {
    const auto& g = c.gates[i];
    out << i << ',' << gate_kind_code(g.kind) << ',' << g.q0 << ',' << g.q1
        << ',' << g.origin.layer << ',' << g.origin.control << ','
        << g.origin.target << "\n";
  }
}

inline TraceJson path_to_json(const QFlyTopology& t, const PathSpec& p) {
  TraceJson j;
  j["nodes"] = {p.node_a, p.node_b};
  j["bsa"] = p.bsa;
  j["bsa_label"] = t.element_label(p.bsa);
  j["switch_crossings"] = p.switch_crossings;
  j["inter_group_hops"] = p.inter_group_hops;
  j["arm_a"] = p.arm_a;
  j["arm_b"] = p.arm_b;
  return j;
}

inline TraceJson round_assignment_to_json(const QFlyTopology& t, int round_id,
                                          const RoundAssignment& ra) {
  TraceJson j;
  j["type"] = "round";
  j["round"] = round_id;
  TraceJson grants = TraceJson::array();
  for (const auto& [id, path] : ra.granted) {
    TraceJson g = path_to_json(t, path);
    TraceJson rec;
    rec["request"] = id;
    for (auto& [k, v] : g.items()) rec[k] = v;
    grants.push_back(std::move(rec));
  }
  j["grants"] = std::move(grants);
  j["blocked"] = ra.blocked;
  return j;
}

// line-delimited JSON; one header record, one record per round, one per
// local epoch, one trailing summary
inline void write_schedule_trace(std::ostream& out, const QFlyTopology& t,
                                 const Schedule& s,
                                 const std::string& label = "") {
  TraceJson head;
  head["format"] = "qfly-trace";
  head["version"] = 1;
  head["label"] = label;
  head["slot_seconds"] = s.slot_seconds;
  head["slot_calibration"] = "logical pair at bare detector-pair loss";
  out << head.dump() << "\n";
  for (const auto& r : s.rounds) {
    TraceJson j = round_assignment_to_json(t, r.index, r.assignment);
    j["gates"] = r.gate_ids;
    j["start_s"] = r.start_s;
    j["duration_s"] = r.duration_s;
    j["duration_slots"] = r.duration_slots;
    j["max_leg_s"] = r.max_leg_s;
    j["switch_state_changed"] = r.switch_state_changed;
    out << j.dump() << "\n";
  }
  for (const auto& ep : s.local_epochs) {
    TraceJson j;
    j["type"] = "local-epoch";
    j["node"] = ep.node;
    j["after_round"] = ep.after_round;
    j["gates"] = ep.gate_ids;
    j["start_s"] = ep.start_s;
    j["end_s"] = ep.end_s;
    out << j.dump() << "\n";
  }
  TraceJson tail;
  tail["type"] = "summary";
  tail["rounds"] = s.rounds.size();
  tail["remote_gates"] = s.remote_gates;
  tail["blocked_retries"] = s.blocked_retries;
  tail["makespan_s"] = s.makespan_s;
  tail["makespan_slots"] = s.makespan_slots;
  out << tail.dump() << "\n";
}

struct SummaryRow {
  std::string experiment;
  std::int64_t n_nodes = 0;
  int k = 0;
  int g = 0;
  int q = 0;
  double loss_db = 0;
  std::int64_t rounds = 0;
  double makespan_slots = 0;
  double slowdown = 0;
};

inline void write_summary_csv(std::ostream& out,
                              const std::vector<SummaryRow>& rows,
                              double slot_seconds) {
  out << "# qfly-summary v1\n";
  out << "# slot_seconds=" << format_double(slot_seconds)
      << " (logical pair at bare detector-pair loss)\n";
  out << "experiment,N,k,g,q,loss_dB,rounds,makespan_slots,slowdown\n";
  for (const auto& r : rows)
    out << r.experiment << ',' << r.n_nodes << ',' << r.k << ',' << r.g << ','
        << r.q << ',' << format_double(r.loss_db) << ',' << r.rounds << ','
        << format_double(r.makespan_slots) << ',' << format_double(r.slowdown)
        << "\n";
}

inline void write_slowdown_csv(std::ostream& out, const SlowdownReport& rep,
                               double slot_seconds) {
  out << "# qfly-slowdown v1\n";
  out << "# slot_seconds=" << format_double(slot_seconds)
      << " (logical pair at bare detector-pair loss)\n";
  out << "# monolithic_slots=" << format_double(rep.monolithic_slots) << "\n";
  out << "name,loss_dB,rounds,makespan_slots,slowdown,concurrency_histogram\n";
  for (const auto& row : rep.rows) {
    out << row.name << ',' << format_double(row.loss_db) << ',' << row.rounds
        << ',' << format_double(row.makespan_slots) << ','
        << format_double(row.slowdown) << ',';
    for (size_t i = 0; i < row.concurrency_histogram.size(); ++i) {
      if (i) out << ' ';
      out << row.concurrency_histogram[i];
    }
    out << "\n";
  }
}

inline void write_scaling_csv(std::ostream& out,
                              const std::vector<ScalingSummary>& rows) {
  out << "# qfly-scaling v1\n";
  out << "variant,k,N,g,p,b,detectors\n";
  for (const auto& r : rows)
    out << variant_code(r.variant) << ',' << r.k << ',' << r.n_nodes << ','
        << r.g << ',' << r.p << ',' << r.b << ',' << r.detectors << "\n";
}

}  // namespace qfly
