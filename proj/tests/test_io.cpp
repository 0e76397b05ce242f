#include "qfly/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "qfly/config.hpp"

using namespace qfly;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST(Io, FormatDoubleIsStable) {
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(3.010299956639812), "3.01029995664");
  EXPECT_EQ(format_double(1e-9), "1e-09");
  EXPECT_EQ(format_double(160e-9), "1.6e-07");
  EXPECT_EQ(format_double(7.1503), "7.1503");
}

TEST(Io, TopologyTextHasVersionedHeader) {
  const auto t = build_topology(QFlyVariant::SinglePathHalfDuplex, 5, 4);
  std::ostringstream out;
  write_topology_text(out, t);
  const auto ls = lines_of(out.str());
  ASSERT_GE(ls.size(), 10u);
  EXPECT_EQ(ls[0], "qfly-topology v1");
  EXPECT_EQ(ls[1], "variant sphd (single-path half-duplex)");
  EXPECT_EQ(ls[2], "groups 5");
  EXPECT_EQ(ls[3], "nodes-per-group 4");
  EXPECT_EQ(ls[4], "radix 6");
  // one wiring line per inter-group fiber
  int wires = 0;
  for (const auto& l : ls)
    if (l.rfind("  ", 0) == 0) ++wires;
  EXPECT_EQ(wires, 10);
}

TEST(Io, EdgeCsvListsEveryFiber) {
  const auto t = build_topology(QFlyVariant::DualPathFullDuplex, 3, 2);
  std::ostringstream out;
  write_topology_edges_csv(out, t);
  const auto ls = lines_of(out.str());
  ASSERT_GE(ls.size(), 3u);
  EXPECT_EQ(ls[0], "# qfly-topology-edges v1");
  EXPECT_EQ(ls[1], "fiber_id,kind,src,dst,dst_port,src_label,dst_label");
  EXPECT_EQ(ls.size(), 2 + t.fibers.size());
  EXPECT_NE(ls[2].find("node-switch"), std::string::npos);
}

TEST(Io, CircuitCsvListsEveryGate) {
  const auto c = qft_circuit(3);
  std::ostringstream out;
  write_circuit_csv(out, c);
  const auto ls = lines_of(out.str());
  EXPECT_EQ(ls[0], "# qfly-circuit v1");
  EXPECT_EQ(ls[1], "index,kind,q0,q1,layer,control,target");
  EXPECT_EQ(ls.size(), 2 + c.gates.size());
  EXPECT_EQ(ls[2], "0,h,0,-1,0,0,-1");
  EXPECT_EQ(ls[5], "3,cnot,0,1,0,0,1");
}

TEST(Io, TraceIsLineDelimitedJson) {
  const auto t = build_topology(QFlyVariant::SinglePathHalfDuplex, 3, 4);
  const auto c = qft_circuit(5);
  const auto pl = place_qubits(5, t, 1, PlacementPolicy::Block);
  TimingConfig tc;
  const SwitchTechnology tech{BenesSwitch{0.46}};
  const auto s = schedule(c, pl, t, tc, tech);

  std::ostringstream out;
  write_schedule_trace(out, t, s, "t5");
  const auto ls = lines_of(out.str());
  ASSERT_EQ(ls.size(), 1 + s.rounds.size() + s.local_epochs.size() + 1);

  const auto head = TraceJson::parse(ls.front());
  EXPECT_EQ(head.at("format"), "qfly-trace");
  EXPECT_EQ(head.at("version"), 1);
  EXPECT_EQ(head.at("label"), "t5");
  EXPECT_DOUBLE_EQ(head.at("slot_seconds").get<double>(), s.slot_seconds);

  int rounds = 0, epochs = 0;
  for (size_t i = 1; i + 1 < ls.size(); ++i) {
    const auto j = TraceJson::parse(ls[i]);  // throws on malformed lines
    if (j.at("type") == "round") {
      ++rounds;
      EXPECT_TRUE(j.contains("grants"));
      EXPECT_TRUE(j.contains("duration_slots"));
      for (const auto& gr : j.at("grants")) {
        EXPECT_TRUE(gr.contains("arm_a"));
        EXPECT_TRUE(gr.contains("bsa_label"));
      }
    } else {
      EXPECT_EQ(j.at("type"), "local-epoch");
      ++epochs;
    }
  }
  EXPECT_EQ(rounds, static_cast<int>(s.rounds.size()));
  EXPECT_EQ(epochs, static_cast<int>(s.local_epochs.size()));

  const auto tail = TraceJson::parse(ls.back());
  EXPECT_EQ(tail.at("type"), "summary");
  EXPECT_EQ(tail.at("rounds").get<size_t>(), s.rounds.size());
  EXPECT_DOUBLE_EQ(tail.at("makespan_s").get<double>(), s.makespan_s);
}

TEST(Io, RepeatedWritesAreByteIdentical) {
  const auto t = build_topology(QFlyVariant::DualPathHalfDuplex, 3, 4);
  const auto c = qft_circuit(6);
  const auto pl = place_qubits(6, t, 2, PlacementPolicy::Block);
  TimingConfig tc;
  const SwitchTechnology tech{BenesSwitch{0.46}};

  std::ostringstream t1, t2;
  write_schedule_trace(t1, t, schedule(c, pl, t, tc, tech), "x");
  write_schedule_trace(t2, t, schedule(c, pl, t, tc, tech), "x");
  EXPECT_EQ(t1.str(), t2.str());

  std::ostringstream e1, e2;
  write_topology_edges_csv(e1, t);
  write_topology_edges_csv(e2, t);
  EXPECT_EQ(e1.str(), e2.str());
}

TEST(Io, SummaryCsvColumnsAreFixed) {
  std::vector<SummaryRow> rows;
  rows.push_back({"exp1", 10, 4, 5, 13, 7.1503, 42, 123.5, 8.8});
  std::ostringstream out;
  write_summary_csv(out, rows, 160e-9);
  const auto ls = lines_of(out.str());
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[0], "# qfly-summary v1");
  EXPECT_EQ(ls[1].rfind("# slot_seconds=1.6e-07", 0), 0u);
  EXPECT_EQ(ls[2], "experiment,N,k,g,q,loss_dB,rounds,makespan_slots,slowdown");
  EXPECT_EQ(ls[3], "exp1,10,4,5,13,7.1503,42,123.5,8.8");
}

TEST(Io, SlowdownCsvCarriesHistogram) {
  SlowdownReport rep;
  rep.monolithic_slots = 100;
  SlowdownRow row;
  row.name = "qfly";
  row.loss_db = 9.9103;
  row.rounds = 3;
  row.makespan_slots = 250;
  row.slowdown = 2.5;
  row.concurrency_histogram = {0, 2, 1};
  rep.rows.push_back(row);
  std::ostringstream out;
  write_slowdown_csv(out, rep, 160e-9);
  const auto ls = lines_of(out.str());
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[0], "# qfly-slowdown v1");
  EXPECT_EQ(ls[2], "# monolithic_slots=100");
  EXPECT_EQ(ls[3],
            "name,loss_dB,rounds,makespan_slots,slowdown,concurrency_histogram");
  EXPECT_EQ(ls[4], "qfly,9.9103,3,250,2.5,0 2 1");
}

TEST(Io, ScalingCsvRoundTrip) {
  std::vector<ScalingSummary> rows;
  for (auto v : kAllVariants)
    rows.push_back(max_topology_for_radix(v, 8));
  std::ostringstream out;
  write_scaling_csv(out, rows);
  const auto ls = lines_of(out.str());
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[0], "# qfly-scaling v1");
  EXPECT_EQ(ls[1], "variant,k,N,g,p,b,detectors");
  EXPECT_EQ(ls[2], "sphd,8,36,9,4,2,72");
  EXPECT_EQ(ls[3], "dphd,8,20,5,4,2,40");
  EXPECT_EQ(ls[4], "dpfd,8,20,5,4,4,80");
}

TEST(Config, DefaultsSurviveTheBundledFile) {
  const auto cfg = load_config(std::string(QFLY_DATA_DIR) + "/default.conf");
  const ExperimentConfig defaults;
  EXPECT_EQ(cfg.variant, defaults.variant);
  EXPECT_EQ(cfg.groups, defaults.groups);
  EXPECT_EQ(cfg.nodes_per_group, defaults.nodes_per_group);
  EXPECT_EQ(cfg.switch_family, defaults.switch_family);
  EXPECT_DOUBLE_EQ(cfg.cell_loss_db, defaults.cell_loss_db);
  EXPECT_DOUBLE_EQ(cfg.bsa_success, defaults.bsa_success);
  EXPECT_DOUBLE_EQ(cfg.t_attempt_s, defaults.t_attempt_s);
  EXPECT_DOUBLE_EQ(cfg.t_gs_s, defaults.t_gs_s);
  EXPECT_DOUBLE_EQ(cfg.purification_factor, defaults.purification_factor);
  EXPECT_EQ(cfg.placement, defaults.placement);
  EXPECT_EQ(cfg.cphase, defaults.cphase);
  EXPECT_EQ(cfg.max_extra_hops, defaults.max_extra_hops);
  EXPECT_DOUBLE_EQ(cfg.lattice_link_loss_db, defaults.lattice_link_loss_db);
  EXPECT_NO_THROW(validate_config(cfg));
}

TEST(Config, ParseOverridesAndComments) {
  std::istringstream in(
      "# a comment\n"
      "\n"
      "variant = dpfd   # trailing comment\n"
      "groups=7\n"
      "  t_gs_s =  1e-6\n"
      "maximize = true\n"
      "radix = 10\n");
  const auto cfg = parse_config(in);
  EXPECT_EQ(cfg.variant, "dpfd");
  EXPECT_EQ(cfg.groups, 7);
  EXPECT_DOUBLE_EQ(cfg.t_gs_s, 1e-6);
  EXPECT_TRUE(cfg.maximize);
  EXPECT_EQ(cfg.radix, 10);
  EXPECT_EQ(config_variant(cfg), QFlyVariant::DualPathFullDuplex);
  // maximize resolves the shape from the radix
  const auto [g, p] = config_shape(cfg);
  EXPECT_EQ(radix_for(QFlyVariant::DualPathFullDuplex, g, p), 10);
}

TEST(Config, RejectsMalformedInput) {
  std::istringstream unknown("no_such_key = 3\n");
  EXPECT_THROW(parse_config(unknown), std::invalid_argument);
  std::istringstream badint("groups = seven\n");
  EXPECT_THROW(parse_config(badint), std::invalid_argument);
  std::istringstream noeq("groups 7\n");
  EXPECT_THROW(parse_config(noeq), std::invalid_argument);
  std::istringstream empty("groups =\n");
  EXPECT_THROW(parse_config(empty), std::invalid_argument);
  EXPECT_THROW(load_config("/nonexistent/qfly.conf"), std::runtime_error);
}

TEST(Config, TechnologyAndShapeResolution) {
  ExperimentConfig cfg;
  EXPECT_EQ(technology_family(make_technology(cfg)), "benes");
  cfg.switch_family = "planar";
  EXPECT_EQ(technology_family(make_technology(cfg)), "planar");
  cfg.switch_family = "monolithic";
  EXPECT_EQ(technology_family(make_technology(cfg)), "monolithic");
  cfg.switch_family = "quantum";
  EXPECT_THROW(make_technology(cfg), std::invalid_argument);

  ExperimentConfig shape;
  shape.radix = 6;  // consistent with sphd g=5 p=4
  EXPECT_NO_THROW(config_shape(shape));
  shape.radix = 7;
  EXPECT_THROW(config_shape(shape), std::invalid_argument);
  shape.radix = 8;
  shape.maximize = true;
  const auto [g, p] = config_shape(shape);
  EXPECT_EQ(g, 9);
  EXPECT_EQ(p, 4);
}
