#pragma once

// Switch technology catalog: a line-oriented text format so loss studies can
// swap hardware assumptions without recompiling.
//
//   # comment
//   name  family  k_min  k_max  <loss params...>
//
// families: benes <cell_db> | planar <coupling_db> <cell_db> |
//           monolithic <insertion_db>

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfly/switch_loss.hpp"

namespace qfly {

struct CatalogEntry {
  std::string name;
  SwitchTechnology tech;
  int k_min = 2;
  int k_max = 1 << 20;

  bool supports(int radix) const { return radix >= k_min && radix <= k_max; }
};

inline std::vector<CatalogEntry> parse_switch_catalog(std::istream& in) {
  std::vector<CatalogEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string name, family;
    if (!(ls >> name)) continue;  // blank
    CatalogEntry e;
    e.name = name;
    auto die = [&](const std::string& why) {
      throw std::runtime_error("switch catalog line " +
                               std::to_string(lineno) + ": " + why);
    };
    if (!(ls >> family >> e.k_min >> e.k_max)) die("truncated entry");
    if (e.k_min < 2 || e.k_max < e.k_min) die("bad radix range");
    double a = 0, b = 0;
    if (family == "benes") {
      if (!(ls >> a)) die("benes needs a cell loss");
      e.tech = BenesSwitch{a};
    } else if (family == "planar") {
      if (!(ls >> a >> b)) die("planar needs coupling and cell losses");
      e.tech = PlanarChipSwitch{a, b};
    } else if (family == "monolithic") {
      if (!(ls >> a)) die("monolithic needs an insertion loss");
      e.tech = MonolithicSwitch{a};
    } else {
      die("unknown family '" + family + "'");
    }
    if (a < 0 || b < 0) die("negative loss");
    std::string extra;
    if (ls >> extra) die("trailing token '" + extra + "'");
    entries.push_back(std::move(e));
  }
  return entries;
}

inline std::vector<CatalogEntry> load_switch_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open switch catalog: " + path);
  return parse_switch_catalog(in);
}

inline std::optional<CatalogEntry> find_entry(
    const std::vector<CatalogEntry>& entries, const std::string& name) {
  for (const auto& e : entries)
    if (e.name == name) return e;
  return std::nullopt;
}

}  // namespace qfly
