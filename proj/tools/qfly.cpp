// qfly: build Q-Fly optical interconnect machines, budget their losses, and
// schedule distributed-QFT workloads on them.
//
//   qfly topology  shape queries, scaling tables, wiring exports
//   qfly loss      loss budgets and attempt overheads
//   qfly schedule  round-based workload simulation, traces, summaries
//   qfly sweep     loss/rate curves over a radix range
//
// Configuration: data/default.conf-style file via --config, any key
// overridable by flag. Output files land in --out-dir, else $QFLY_OUT_DIR,
// else the working directory. Exit 0 on success, 1 on any error, with a
// diagnostic on stderr.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "qfly/catalog.hpp"
#include "qfly/config.hpp"
#include "qfly/experiments.hpp"
#include "qfly/io.hpp"
#include "qfly/lattice.hpp"
#include "qfly/linkmodel.hpp"

namespace {

using namespace qfly;

std::string resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("QFLY_OUT_DIR"); env && *env) return env;
  return ".";
}

std::filesystem::path out_path(const std::string& dir,
                               const std::string& name) {
  std::filesystem::create_directories(dir);
  return std::filesystem::path(dir) / name;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  const auto p = out_path(dir, name);
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::string tok;
  std::istringstream in(text);
  while (std::getline(in, tok, ',')) {
    const auto dots = tok.find("..");
    if (dots != std::string::npos) {
      const int a = std::stoi(tok.substr(0, dots));
      const int b = std::stoi(tok.substr(dots + 2));
      for (int v = a; v <= b; ++v) out.push_back(v);
    } else if (!tok.empty()) {
      out.push_back(std::stoi(tok));
    }
  }
  if (out.empty()) throw CLI::ValidationError("empty integer list");
  return out;
}

void print_scaling_rows(const std::vector<ScalingSummary>& rows) {
  std::printf("%-6s %6s %10s %6s %6s %6s %12s\n", "varnt", "k", "N", "g", "p",
              "b", "detectors");
  for (const auto& r : rows)
    std::printf("%-6s %6d %10lld %6d %6d %6d %12lld\n",
                std::string(variant_code(r.variant)).c_str(), r.k,
                static_cast<long long>(r.n_nodes), r.g, r.p, r.b,
                static_cast<long long>(r.detectors));
}

SwitchTechnology technology_for(const ExperimentConfig& cfg,
                                const std::string& catalog_path,
                                const std::string& switch_name) {
  if (switch_name.empty()) return make_technology(cfg);
  const auto entries = load_switch_catalog(catalog_path);
  const auto e = find_entry(entries, switch_name);
  if (!e)
    throw std::runtime_error("switch '" + switch_name + "' not in catalog " +
                             catalog_path);
  return e->tech;
}

struct ExperimentOutput {
  SummaryRow row;
  std::string trace;  // serialized, merged in declared order
};

int run_experiments_fanout(const ExperimentConfig& cfg,
                           const SwitchTechnology& tech,
                           const std::vector<int>& numbers,
                           bool with_lattice, bool write_traces,
                           const std::string& dir,
                           const std::string& summary_name) {
  const TimingConfig tc = make_timing(cfg);
  const auto policy = *parse_cphase_policy(cfg.cphase);
  const auto place = *parse_placement_policy(cfg.placement);

  // independent presets may fan out across workers; results merge by index
  std::vector<ExperimentOutput> outputs(numbers.size());
  std::vector<std::exception_ptr> errors(numbers.size());
  std::vector<MonolithicResult> monos(numbers.size());
  auto run_one = [&](size_t i) {
    try {
      const auto& preset = evaluation_preset(numbers[i]);
      auto res = run_experiment(preset, tc, tech, cfg.qft_n, 0, policy, place);
      monos[i] = monolithic_baseline(qft_circuit(res.qft_n, policy),
                                     tc.rotation_slot_weight);
      auto& out = outputs[i];
      out.row.experiment = "exp" + std::to_string(preset.number);
      out.row.n_nodes = preset.n_nodes;
      out.row.k = preset.k;
      out.row.g = preset.g;
      out.row.q = preset.qubits_per_node;
      out.row.loss_db = res.inter_loss_db;
      out.row.rounds = static_cast<std::int64_t>(res.schedule.rounds.size());
      out.row.makespan_slots = res.schedule.makespan_slots;
      out.row.slowdown =
          res.schedule.makespan_slots / monos[i].makespan_slots;
      if (write_traces) {
        std::ostringstream ts;
        const auto topo = build_topology(QFlyVariant::SinglePathHalfDuplex,
                                         preset.g, preset.p);
        write_schedule_trace(ts, topo, res.schedule, out.row.experiment);
        out.trace = ts.str();
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (hw > 1 && numbers.size() > 1) {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    const unsigned n_workers =
        std::min<unsigned>(hw, static_cast<unsigned>(numbers.size()));
    for (unsigned w = 0; w < n_workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < numbers.size();
             i = next.fetch_add(1))
          run_one(i);
      });
    for (auto& th : pool) th.join();
  } else {
    for (size_t i = 0; i < numbers.size(); ++i) run_one(i);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<SummaryRow> rows;
  for (auto& out : outputs) rows.push_back(out.row);

  if (with_lattice) {
    // lattice baseline sized to the largest requested workload
    int qft_n = 0;
    for (size_t i = 0; i < numbers.size(); ++i)
      qft_n = std::max(qft_n, cfg.qft_n > 0
                                  ? cfg.qft_n
                                  : evaluation_preset(numbers[i]).total_qubits);
    const auto circuit = qft_circuit(qft_n, policy);
    const auto [rows_g, cols_g] = cfg.lattice_rows > 0
                                      ? std::pair(cfg.lattice_rows,
                                                  cfg.lattice_cols > 0
                                                      ? cfg.lattice_cols
                                                      : (qft_n + cfg.lattice_rows - 1) /
                                                            cfg.lattice_rows)
                                      : lattice_dimensions(qft_n);
    Placement pl;
    pl.qubits_per_node = 1;
    pl.node_of.resize(qft_n);
    pl.slot_of.assign(qft_n, 0);
    for (int i = 0; i < qft_n; ++i) pl.node_of[i] = i;
    LatticeConfig lc;
    lc.rows = rows_g;
    lc.cols = cols_g;
    lc.per_link_loss_db = cfg.lattice_link_loss_db;
    lc.timing = tc;
    const auto ls = lattice_baseline(circuit, pl, lc);
    const auto mono = monolithic_baseline(circuit, tc.rotation_slot_weight);
    SummaryRow row;
    row.experiment = "lattice";
    row.n_nodes = qft_n;
    row.k = 0;
    row.g = 0;
    row.q = 1;
    row.loss_db = cfg.lattice_link_loss_db;
    row.rounds = static_cast<std::int64_t>(ls.rounds.size());
    row.makespan_slots = ls.makespan_slots;
    row.slowdown = ls.makespan_slots / mono.makespan_slots;
    rows.push_back(row);
  }

  auto summary = open_out(dir, summary_name);
  write_summary_csv(summary, rows, effective_slot_seconds(tc));
  if (write_traces)
    for (size_t i = 0; i < numbers.size(); ++i) {
      auto f = open_out(dir, "trace-" + outputs[i].row.experiment + ".jsonl");
      f << outputs[i].trace;
    }

  std::printf("%-10s %6s %4s %4s %4s %9s %9s %14s %10s\n", "experiment", "N",
              "k", "g", "q", "loss_dB", "rounds", "makespan_slots",
              "slowdown");
  for (const auto& r : rows)
    std::printf("%-10s %6lld %4d %4d %4d %9.1f %9lld %14.6g %10.3g\n",
                r.experiment.c_str(), static_cast<long long>(r.n_nodes), r.k,
                r.g, r.q, r.loss_db, static_cast<long long>(r.rounds),
                r.makespan_slots, r.slowdown);
  std::printf("summary: %s\n", out_path(dir, summary_name).string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) try {
  CLI::App app{
      "Q-Fly optical interconnect toolkit: topology generation, loss "
      "budgets, and round-based workload scheduling"};
  app.require_subcommand(1);

  std::string config_path, out_dir_flag, catalog_path = "data/switch_catalog.txt";
  app.add_option("--config", config_path,
                 "configuration file (key = value lines)");
  app.add_option("--out-dir", out_dir_flag,
                 "output directory (default $QFLY_OUT_DIR or .)");
  app.add_option("--catalog", catalog_path, "switch catalog file");

  // the config file must be read before flag defaults freeze: scan early
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = load_config(config_path);

  std::string switch_name;
  app.add_option("--switch", switch_name, "pick a switch from the catalog");

  // shared shape/timing/workload overrides
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--variant", cfg.variant, "sphd|dphd|dpfd");
    sub->add_option("-g,--groups", cfg.groups, "group count");
    sub->add_option("-p,--nodes-per-group", cfg.nodes_per_group,
                    "end nodes per group");
    sub->add_option("--radix", cfg.radix, "switch radix");
    sub->add_flag("--maximize", cfg.maximize,
                  "pick the largest machine for --radix");
    sub->add_option("--switch-family", cfg.switch_family,
                    "benes|planar|monolithic");
    sub->add_option("--cell-loss-db", cfg.cell_loss_db, "2x2 cell loss");
    sub->add_option("--coupling-loss-db", cfg.coupling_loss_db,
                    "planar chip coupling loss");
    sub->add_option("--insertion-loss-db", cfg.insertion_loss_db,
                    "monolithic insertion loss");
    sub->add_option("--fiber-km", cfg.fiber_km, "fiber run per path");
    sub->add_option("--fiber-db-per-km", cfg.fiber_db_per_km,
                    "fiber attenuation");
    sub->add_option("--bsa-success", cfg.bsa_success,
                    "detector-pair success probability");
  };

  // ---- topology -----------------------------------------------------------
  auto* topo_cmd = app.add_subcommand(
      "topology", "build or size machines, export wiring");
  topo_cmd->fallthrough();
  std::string table_list, export_prefix;
  add_common(topo_cmd);
  topo_cmd->add_option("--table", table_list,
                       "scaling table for radices, e.g. 6,8,12 or 6..24");
  topo_cmd->add_option("-o,--export", export_prefix,
                       "write <prefix>.txt and <prefix>.csv wiring files");

  // ---- loss ---------------------------------------------------------------
  auto* loss_cmd =
      app.add_subcommand("loss", "loss budgets and attempt overheads");
  loss_cmd->fallthrough();
  bool loss_experiments = false;
  add_common(loss_cmd);
  loss_cmd->add_flag("--experiments", loss_experiments,
                     "budget the bundled evaluation presets");

  // ---- schedule -----------------------------------------------------------
  auto* sched_cmd = app.add_subcommand(
      "schedule", "simulate a distributed QFT, write trace and summary");
  sched_cmd->fallthrough();
  std::string experiments_list, summary_name = "summary.csv",
              trace_name = "trace.jsonl";
  bool with_lattice = false, monolithic_only = false, no_trace = false;
  add_common(sched_cmd);
  sched_cmd->add_option("--qft-n", cfg.qft_n, "QFT width (0: fill machine)");
  sched_cmd->add_option("-q,--qubits-per-node", cfg.qubits_per_node,
                        "logical qubits per node");
  sched_cmd->add_option("--placement", cfg.placement, "block|round-robin");
  sched_cmd->add_option("--cphase", cfg.cphase, "rot-cnot|cnot-only");
  sched_cmd->add_option("--max-extra-hops", cfg.max_extra_hops,
                        "detour budget past the shortest route");
  sched_cmd->add_option("--t-attempt", cfg.t_attempt_s, "attempt window, s");
  sched_cmd->add_option("--t-gs", cfg.t_gs_s, "switch reconfiguration, s");
  sched_cmd->add_option("--t-slot", cfg.t_slot_s, "local slot, s (0: auto)");
  sched_cmd->add_option("--purification-factor", cfg.purification_factor,
                        "raw pairs per logical pair");
  sched_cmd->add_option("--rotation-slot-weight", cfg.rotation_slot_weight,
                        "rotation cost in slots");
  sched_cmd->add_option("--seed", cfg.seed, "reproducibility seed");
  sched_cmd->add_option("--experiments", experiments_list,
                        "run bundled presets, e.g. 1..6 or 2,5");
  sched_cmd->add_flag("--with-lattice", with_lattice,
                      "add the 2D-lattice baseline");
  sched_cmd->add_flag("--monolithic-only", monolithic_only,
                      "report only the ideal monolithic machine");
  sched_cmd->add_flag("--no-trace", no_trace, "skip trace files");
  sched_cmd->add_option("--summary", summary_name, "summary CSV name");
  sched_cmd->add_option("--trace", trace_name, "trace file name");

  // ---- sweep --------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "loss and rate versus radix for each variant");
  sweep_cmd->fallthrough();
  std::string sweep_radices = "4..64";
  std::string sweep_out = "sweep.csv";
  add_common(sweep_cmd);
  sweep_cmd->add_option("--radix-list", sweep_radices,
                        "radices to sweep, e.g. 4..64 or 8,16,32");
  sweep_cmd->add_option("--t-attempt", cfg.t_attempt_s, "attempt window, s");
  sweep_cmd->add_option("--t-gs", cfg.t_gs_s, "switch reconfiguration, s");
  sweep_cmd->add_option("--purification-factor", cfg.purification_factor,
                        "raw pairs per logical pair");
  sweep_cmd->add_option("-o,--output", sweep_out, "output CSV name");

  CLI11_PARSE(app, argc, argv);
  const std::string out_dir = resolve_out_dir(out_dir_flag);
  validate_config(cfg);
  const SwitchTechnology tech = technology_for(cfg, catalog_path, switch_name);
  const QFlyVariant variant = config_variant(cfg);

  if (topo_cmd->parsed()) {
    if (!table_list.empty()) {
      std::vector<ScalingSummary> rows;
      for (int k : parse_int_list(table_list))
        for (auto v : kAllVariants)
          rows.push_back(max_topology_for_radix(v, k));
      print_scaling_rows(rows);
      auto csv = open_out(out_dir, "scaling.csv");
      write_scaling_csv(csv, rows);
      std::printf("table: %s\n", out_path(out_dir, "scaling.csv").string().c_str());
      return 0;
    }
    auto [g, p] = config_shape(cfg);
    if (cfg.maximize)
      print_scaling_rows({max_topology_for_radix(variant, cfg.radix)});
    const auto topo = build_topology(variant, g, p);
    const auto errs = validate(topo);
    if (!errs.empty()) {
      for (const auto& e : errs) std::cerr << "invalid: " << e << "\n";
      return 1;
    }
    std::printf("%s: g=%d p=%d k=%d b=%d N=%d detectors=%lld fibers=%zu\n",
                std::string(variant_code(topo.variant)).c_str(), topo.g,
                topo.p, topo.k, topo.b, topo.num_nodes(),
                static_cast<long long>(topo.num_detectors()),
                topo.fibers.size());
    if (!export_prefix.empty()) {
      auto txt = open_out(out_dir, export_prefix + ".txt");
      write_topology_text(txt, topo);
      auto csv = open_out(out_dir, export_prefix + ".csv");
      write_topology_edges_csv(csv, topo);
      std::printf("wrote %s.txt and %s.csv in %s\n", export_prefix.c_str(),
                  export_prefix.c_str(), out_dir.c_str());
    }
    return 0;
  }

  if (loss_cmd->parsed()) {
    if (loss_experiments) {
      std::printf("%-5s %4s %4s %4s %10s %10s %10s\n", "exp", "k", "g", "q",
                  "loss_dB", "overhead", "t_leg_us");
      for (const auto& pre : evaluation_presets()) {
        const auto lb = loss_budget(
            min_switch_crossings(QFlyVariant::SinglePathHalfDuplex,
                                 PathKind::InterGroup),
            tech, pre.k, cfg.fiber_km, cfg.fiber_db_per_km, cfg.bsa_success);
        const auto lt = link_timing(cfg.t_attempt_s, lb.total_db, cfg.t_gs_s,
                                    cfg.purification_factor);
        std::printf("%-5d %4d %4d %4d %10.1f %10.2f %10.3f\n", pre.number,
                    pre.k, pre.g, pre.qubits_per_node, lb.total_db,
                    overhead_factor(lb.total_db), lt.t_leg_s * 1e6);
      }
      return 0;
    }
    auto [g, p] = config_shape(cfg);
    const int k = radix_for(variant, g, p);
    std::printf("machine %s g=%d p=%d k=%d, switch family %s\n",
                std::string(variant_code(variant)).c_str(), g, p, k,
                std::string(technology_family(tech)).c_str());
    std::printf("group switch loss: %.1f dB\n", group_loss(tech, k));
    std::printf("%-12s %9s %8s %9s %10s %10s %9s\n", "path", "crossings",
                "bsa_dB", "fiber_dB", "switch_dB", "total_dB", "overhead");
    for (auto kind : {PathKind::IntraGroup, PathKind::InterGroup}) {
      const int crossings = min_switch_crossings(variant, kind);
      const auto lb = loss_budget(crossings, tech, k, cfg.fiber_km,
                                  cfg.fiber_db_per_km, cfg.bsa_success);
      std::printf("%-12s %9d %8.1f %9.1f %10.1f %10.1f %9.2f\n",
                  kind == PathKind::IntraGroup ? "intra-group" : "inter-group",
                  crossings, lb.bsa_term_db, lb.fiber_term_db,
                  lb.switch_term_db, lb.total_db,
                  overhead_factor(lb.total_db));
    }
    return 0;
  }

  if (sched_cmd->parsed()) {
    const TimingConfig tc = make_timing(cfg);
    const auto policy = *parse_cphase_policy(cfg.cphase);
    const auto place = *parse_placement_policy(cfg.placement);
    if (monolithic_only) {
      const int n = cfg.qft_n > 0 ? cfg.qft_n : 32;
      const auto mono =
          monolithic_baseline(qft_circuit(n, policy), tc.rotation_slot_weight);
      std::vector<SummaryRow> rows{{"monolithic", 1, 0, 0, n, 0.0, 0,
                                    mono.makespan_slots, 1.0}};
      auto f = open_out(out_dir, summary_name);
      write_summary_csv(f, rows, effective_slot_seconds(tc));
      std::printf("monolithic qft(%d): %.6g slots (slowdown 1)\n", n,
                  mono.makespan_slots);
      return 0;
    }
    if (!experiments_list.empty())
      return run_experiments_fanout(cfg, tech, parse_int_list(experiments_list),
                                    with_lattice, !no_trace, out_dir,
                                    summary_name);

    auto [g, p] = config_shape(cfg);
    const auto topo = build_topology(variant, g, p);
    const int qft_n =
        cfg.qft_n > 0 ? cfg.qft_n : topo.num_nodes() * cfg.qubits_per_node;
    const auto circuit = qft_circuit(qft_n, policy);
    const auto placement =
        place_qubits(qft_n, topo, cfg.qubits_per_node, place);
    const auto sched = schedule(circuit, placement, topo, tc, tech);
    const auto mono = monolithic_baseline(circuit, tc.rotation_slot_weight);
    const auto lb = loss_budget(
        min_switch_crossings(variant, PathKind::InterGroup), tech, topo.k,
        cfg.fiber_km, cfg.fiber_db_per_km, cfg.bsa_success);
    std::vector<SummaryRow> rows;
    rows.push_back({"custom", topo.num_nodes(), topo.k, topo.g,
                    cfg.qubits_per_node, lb.total_db,
                    static_cast<std::int64_t>(sched.rounds.size()),
                    sched.makespan_slots,
                    sched.makespan_slots / mono.makespan_slots});
    if (with_lattice) {
      const auto [lr, lcg] = lattice_dimensions(qft_n);
      Placement lpl;
      lpl.qubits_per_node = 1;
      lpl.node_of.resize(qft_n);
      lpl.slot_of.assign(qft_n, 0);
      for (int i = 0; i < qft_n; ++i) lpl.node_of[i] = i;
      LatticeConfig lc;
      lc.rows = lr;
      lc.cols = lcg;
      lc.per_link_loss_db = cfg.lattice_link_loss_db;
      lc.timing = tc;
      const auto ls = lattice_baseline(circuit, lpl, lc);
      rows.push_back({"lattice", qft_n, 0, 0, 1, cfg.lattice_link_loss_db,
                      static_cast<std::int64_t>(ls.rounds.size()),
                      ls.makespan_slots,
                      ls.makespan_slots / mono.makespan_slots});
    }
    auto f = open_out(out_dir, summary_name);
    write_summary_csv(f, rows, sched.slot_seconds);
    if (!no_trace) {
      auto tf = open_out(out_dir, trace_name);
      write_schedule_trace(tf, topo, sched, "custom");
    }
    std::printf(
        "qft(%d) on %s g=%d p=%d q=%d: %zu rounds, %.6g slots, %.3g s, "
        "slowdown %.3g\n",
        qft_n, std::string(variant_code(variant)).c_str(), topo.g, topo.p,
        cfg.qubits_per_node, sched.rounds.size(), sched.makespan_slots,
        sched.makespan_s, sched.makespan_slots / mono.makespan_slots);
    return 0;
  }

  if (sweep_cmd->parsed()) {
    auto csv = open_out(out_dir, sweep_out);
    csv << "# qfly-rate-sweep v1\n";
    csv << "variant,k,N,g,p,group_loss_dB,intra_dB,inter_dB,overhead_inter,"
           "t_leg_inter_s,r_leg_inter_hz,duty\n";
    for (int k : parse_int_list(sweep_radices)) {
      for (auto v : kAllVariants) {
        ScalingSummary row;
        try {
          row = max_topology_for_radix(v, k);
        } catch (const std::invalid_argument&) {
          continue;  // radix too small for this variant
        }
        const double gl = group_loss(tech, k);
        const auto intra =
            loss_budget(min_switch_crossings(v, PathKind::IntraGroup), tech, k,
                        cfg.fiber_km, cfg.fiber_db_per_km, cfg.bsa_success);
        const auto inter =
            loss_budget(min_switch_crossings(v, PathKind::InterGroup), tech, k,
                        cfg.fiber_km, cfg.fiber_db_per_km, cfg.bsa_success);
        const auto lt = link_timing(cfg.t_attempt_s, inter.total_db,
                                    cfg.t_gs_s, cfg.purification_factor);
        csv << variant_code(v) << ',' << k << ',' << row.n_nodes << ','
            << row.g << ',' << row.p << ',' << format_double(gl) << ','
            << format_double(intra.total_db) << ','
            << format_double(inter.total_db) << ','
            << format_double(overhead_factor(inter.total_db)) << ','
            << format_double(lt.t_leg_s) << ',' << format_double(lt.r_leg_hz)
            << ',' << format_double(lt.duty) << "\n";
      }
    }
    std::printf("sweep: %s\n", out_path(out_dir, sweep_out).string().c_str());
    return 0;
  }

  return 0;
} catch (const std::exception& e) {
  std::cerr << "qfly: " << e.what() << "\n";
  return 1;
}
