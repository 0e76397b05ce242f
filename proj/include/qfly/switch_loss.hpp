#pragma once

// Optical loss bookkeeping. A connection's photon budget has three parts:
// the 50/50 detector-pair projection (10*log10 2 dB at the default success
// probability 1/2), fiber attenuation, and one group-switch insertion loss
// per switch crossed. Loss maps to expected attempt overhead 10^(dB/10).

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "qfly/topology.hpp"

namespace qfly {

// Benes fabric of 2x2 cells: a k-port network crosses 2*ceil(log2 k) - 1
// cell stages.
struct BenesSwitch {
  double cell_loss_db;
};

// integrated chip: fixed in/out coupling plus one cell column per port
struct PlanarChipSwitch {
  double coupling_loss_db;
  double cell_loss_db;
};

// single fabric quoted with one port-to-port insertion figure
struct MonolithicSwitch {
  double insertion_loss_db;
};

using SwitchTechnology =
    std::variant<BenesSwitch, PlanarChipSwitch, MonolithicSwitch>;

inline std::string_view technology_family(const SwitchTechnology& tech) {
  if (std::holds_alternative<BenesSwitch>(tech)) return "benes";
  if (std::holds_alternative<PlanarChipSwitch>(tech)) return "planar";
  return "monolithic";
}

inline int benes_stage_count(int radix) {
  int stages = 0;
  int span = 1;
  while (span < radix) {
    span *= 2;
    ++stages;
  }
  return 2 * stages - 1;
}

// insertion loss of one radix-k group switch, in dB
inline double group_loss(const SwitchTechnology& tech, int radix) {
  if (radix < 2)
    throw std::invalid_argument("group_loss: radix must be >= 2, got " +
                                std::to_string(radix));
  return std::visit(
      [radix](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, BenesSwitch>) {
          if (t.cell_loss_db < 0)
            throw std::invalid_argument("group_loss: negative cell loss");
          return benes_stage_count(radix) * t.cell_loss_db;
        } else if constexpr (std::is_same_v<T, PlanarChipSwitch>) {
          if (t.coupling_loss_db < 0 || t.cell_loss_db < 0)
            throw std::invalid_argument("group_loss: negative loss parameter");
          return t.coupling_loss_db + radix * t.cell_loss_db;
        } else {
          if (t.insertion_loss_db < 0)
            throw std::invalid_argument("group_loss: negative insertion loss");
          return t.insertion_loss_db;
        }
      },
      tech);
}

enum class PathKind { IntraGroup, InterGroup };

// switch crossings on a minimum-hop path
inline int min_switch_crossings(QFlyVariant variant, PathKind kind) {
  const int base = kind == PathKind::IntraGroup ? 1 : 2;
  return is_half_duplex(variant) ? base + 1 : base;
}

// switch contribution of a minimum-hop path, in dB
inline double path_loss(QFlyVariant variant, PathKind kind,
                        const SwitchTechnology& tech, int radix) {
  return min_switch_crossings(variant, kind) * group_loss(tech, radix);
}

inline constexpr double kDefaultBsaSuccess = 0.5;

// photon survival penalty of the probabilistic detector-pair projection
inline double bsa_projection_loss_db(double success_probability) {
  if (!(success_probability > 0.0) || success_probability > 1.0)
    throw std::invalid_argument(
        "bsa_projection_loss_db: success probability must be in (0, 1]");
  return -10.0 * std::log10(success_probability);
}

// expected attempts per success for a given end-to-end loss
inline double overhead_factor(double loss_db) {
  if (loss_db < 0)
    throw std::invalid_argument("overhead_factor: loss must be >= 0 dB");
  return std::pow(10.0, loss_db / 10.0);
}

struct LossBudget {
  double bsa_term_db = 0;
  double fiber_term_db = 0;
  double switch_term_db = 0;
  double total_db = 0;
  int switch_crossings = 0;
};

inline LossBudget loss_budget(int switch_crossings,
                              const SwitchTechnology& tech, int radix,
                              double fiber_km, double fiber_db_per_km,
                              double bsa_success = kDefaultBsaSuccess) {
  if (switch_crossings < 0)
    throw std::invalid_argument("loss_budget: negative switch crossings");
  if (fiber_km < 0 || fiber_db_per_km < 0)
    throw std::invalid_argument("loss_budget: negative fiber attenuation");
  LossBudget lb;
  lb.switch_crossings = switch_crossings;
  lb.bsa_term_db = bsa_projection_loss_db(bsa_success);
  lb.fiber_term_db = fiber_km * fiber_db_per_km;
  lb.switch_term_db = switch_crossings * group_loss(tech, radix);
  lb.total_db = lb.bsa_term_db + lb.fiber_term_db + lb.switch_term_db;
  return lb;
}

}  // namespace qfly
