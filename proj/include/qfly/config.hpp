#pragma once

// Experiment configuration: one flat key = value text file ('#' comments),
// every key overridable from the command line. Unknown keys are errors so
// typos fail loudly.

#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qfly/catalog.hpp"
#include "qfly/lattice.hpp"
#include "qfly/scheduler.hpp"
#include "qfly/switch_loss.hpp"
#include "qfly/topology.hpp"
#include "qfly/workload.hpp"

namespace qfly {

struct ExperimentConfig {
  // machine shape
  std::string variant = "sphd";
  int groups = 5;
  int nodes_per_group = 4;
  int radix = 0;          // with maximize: pick the largest machine for it
  bool maximize = false;

  // switch technology
  std::string switch_family = "benes";  // benes | planar | monolithic
  double cell_loss_db = 0.46;
  double coupling_loss_db = 2.0;
  double insertion_loss_db = 2.5;

  // optics
  double fiber_km = 0.0;
  double fiber_db_per_km = 0.2;
  double bsa_success = 0.5;
  double infidelity = 0.10;

  // timing
  double t_attempt_s = 1e-9;
  double t_gs_s = 1e-3;
  double t_slot_s = 0.0;  // 0: logical pair at bare detector-pair loss
  double purification_factor = 80.0;
  double rotation_slot_weight = 1.0;

  // workload
  int qft_n = 0;  // 0: fill the machine
  int qubits_per_node = 1;
  std::string placement = "block";     // block | round-robin
  std::string cphase = "rot-cnot";     // rot-cnot | cnot-only

  // routing / simulation
  int max_extra_hops = 1;
  std::uint64_t seed = 1;

  // lattice baseline
  double lattice_link_loss_db = kDefaultLatticeLinkLossDb;
  int lattice_rows = 0;  // 0: near-square auto
  int lattice_cols = 0;
};

inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
  auto as_int = [&] {
    size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size())
      throw std::invalid_argument("config: bad integer for " + key);
    return v;
  };
  auto as_u64 = [&] {
    size_t pos = 0;
    const auto v = std::stoull(value, &pos);
    if (pos != value.size())
      throw std::invalid_argument("config: bad integer for " + key);
    return static_cast<std::uint64_t>(v);
  };
  auto as_double = [&] {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size())
      throw std::invalid_argument("config: bad number for " + key);
    return v;
  };
  auto as_bool = [&] {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config: bad boolean for " + key);
  };

  if (key == "variant") cfg.variant = value;
  else if (key == "groups") cfg.groups = as_int();
  else if (key == "nodes_per_group") cfg.nodes_per_group = as_int();
  else if (key == "radix") cfg.radix = as_int();
  else if (key == "maximize") cfg.maximize = as_bool();
  else if (key == "switch_family") cfg.switch_family = value;
  else if (key == "cell_loss_db") cfg.cell_loss_db = as_double();
  else if (key == "coupling_loss_db") cfg.coupling_loss_db = as_double();
  else if (key == "insertion_loss_db") cfg.insertion_loss_db = as_double();
  else if (key == "fiber_km") cfg.fiber_km = as_double();
  else if (key == "fiber_db_per_km") cfg.fiber_db_per_km = as_double();
  else if (key == "bsa_success") cfg.bsa_success = as_double();
  else if (key == "infidelity") cfg.infidelity = as_double();
  else if (key == "t_attempt_s") cfg.t_attempt_s = as_double();
  else if (key == "t_gs_s") cfg.t_gs_s = as_double();
  else if (key == "t_slot_s") cfg.t_slot_s = as_double();
  else if (key == "purification_factor") cfg.purification_factor = as_double();
  else if (key == "rotation_slot_weight") cfg.rotation_slot_weight = as_double();
  else if (key == "qft_n") cfg.qft_n = as_int();
  else if (key == "qubits_per_node") cfg.qubits_per_node = as_int();
  else if (key == "placement") cfg.placement = value;
  else if (key == "cphase") cfg.cphase = value;
  else if (key == "max_extra_hops") cfg.max_extra_hops = as_int();
  else if (key == "seed") cfg.seed = as_u64();
  else if (key == "lattice_link_loss_db") cfg.lattice_link_loss_db = as_double();
  else if (key == "lattice_rows") cfg.lattice_rows = as_int();
  else if (key == "lattice_cols") cfg.lattice_cols = as_int();
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    std::string key, value;
    if (eq == std::string::npos) {
      std::istringstream probe(line);
      std::string tok;
      if (!(probe >> tok)) continue;  // blank
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    key = trim(line.substr(0, eq));
    value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key or value");
    apply_config_entry(cfg, key, value);
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  return parse_config(in);
}

inline QFlyVariant config_variant(const ExperimentConfig& cfg) {
  const auto v = parse_variant(cfg.variant);
  if (!v)
    throw std::invalid_argument("config: unknown variant '" + cfg.variant +
                                "' (expected sphd|dphd|dpfd)");
  return *v;
}

inline SwitchTechnology make_technology(const ExperimentConfig& cfg) {
  if (cfg.switch_family == "benes") return BenesSwitch{cfg.cell_loss_db};
  if (cfg.switch_family == "planar")
    return PlanarChipSwitch{cfg.coupling_loss_db, cfg.cell_loss_db};
  if (cfg.switch_family == "monolithic")
    return MonolithicSwitch{cfg.insertion_loss_db};
  throw std::invalid_argument("config: unknown switch family '" +
                              cfg.switch_family +
                              "' (expected benes|planar|monolithic)");
}

inline TimingConfig make_timing(const ExperimentConfig& cfg) {
  TimingConfig tc;
  tc.t_attempt_s = cfg.t_attempt_s;
  tc.t_gs_s = cfg.t_gs_s;
  tc.t_slot_s = cfg.t_slot_s;
  tc.purification_factor = cfg.purification_factor;
  tc.fiber_km = cfg.fiber_km;
  tc.fiber_db_per_km = cfg.fiber_db_per_km;
  tc.bsa_success = cfg.bsa_success;
  tc.max_extra_hops = cfg.max_extra_hops;
  tc.rotation_slot_weight = cfg.rotation_slot_weight;
  return tc;
}

// (g, p) the config describes; resolves radix+maximize if requested
inline std::pair<int, int> config_shape(const ExperimentConfig& cfg) {
  const auto variant = config_variant(cfg);
  if (cfg.maximize) {
    if (cfg.radix < 2)
      throw std::invalid_argument("config: maximize needs a radix");
    const auto row = max_topology_for_radix(variant, cfg.radix);
    return {row.g, row.p};
  }
  if (cfg.radix > 0 &&
      cfg.radix != radix_for(variant, cfg.groups, cfg.nodes_per_group))
    throw std::invalid_argument(
        "config: radix " + std::to_string(cfg.radix) +
        " inconsistent with groups/nodes_per_group for variant " +
        cfg.variant + " (computed " +
        std::to_string(radix_for(variant, cfg.groups, cfg.nodes_per_group)) +
        ")");
  return {cfg.groups, cfg.nodes_per_group};
}

inline void validate_config(const ExperimentConfig& cfg) {
  config_variant(cfg);
  make_technology(cfg);
  validate_timing(make_timing(cfg));
  config_shape(cfg);
  if (!parse_placement_policy(cfg.placement))
    throw std::invalid_argument("config: unknown placement '" + cfg.placement +
                                "'");
  if (!parse_cphase_policy(cfg.cphase))
    throw std::invalid_argument("config: unknown cphase policy '" + cfg.cphase +
                                "'");
  if (cfg.qubits_per_node < 1)
    throw std::invalid_argument("config: qubits_per_node must be >= 1");
  if (cfg.qft_n < 0)
    throw std::invalid_argument("config: qft_n must be >= 0");
  if (!(cfg.infidelity >= 0 && cfg.infidelity < 1))
    throw std::invalid_argument("config: infidelity must be in [0, 1)");
  if (cfg.lattice_link_loss_db < 0)
    throw std::invalid_argument("config: negative lattice link loss");
}

}  // namespace qfly
