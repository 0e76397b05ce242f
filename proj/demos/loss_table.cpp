// Library tour: size machines for a radix range, then budget the optical
// path losses and the entanglement rates they imply.

#include <cstdio>
#include <string>

#include "qfly/linkmodel.hpp"
#include "qfly/switch_loss.hpp"
#include "qfly/topology.hpp"

int main() {
  using namespace qfly;

  const BenesSwitch tech{0.46};  // MEMS-actuated 2x2 cells

  std::printf("largest machine per radix (Benes group switches)\n");
  std::printf("%-6s %6s %10s %6s %6s %10s %10s\n", "varnt", "k", "N", "g", "p",
              "inter_dB", "t_leg_us");
  for (int k : {8, 16, 24, 64}) {
    for (auto v : kAllVariants) {
      const auto row = max_topology_for_radix(v, k);
      const auto lb = loss_budget(min_switch_crossings(v, PathKind::InterGroup),
                                  tech, k, 0.0, 0.2);
      const auto lt = link_timing(1e-9, lb.total_db, 1e-3);
      std::printf("%-6s %6d %10lld %6d %6d %10.1f %10.3f\n",
                  std::string(variant_code(v)).c_str(), k,
                  static_cast<long long>(row.n_nodes), row.g, row.p,
                  lb.total_db, lt.t_leg_s * 1e6);
    }
  }

  // one concrete machine, validated, with its full budget decomposition
  const auto topo = build_topology(QFlyVariant::SinglePathHalfDuplex, 5, 4);
  if (!validate(topo).empty()) return 1;
  std::printf("\nsphd g=5 p=4: k=%d, %d nodes, %lld detectors\n", topo.k,
              topo.num_nodes(), static_cast<long long>(topo.num_detectors()));
  const auto lb =
      loss_budget(min_switch_crossings(topo.variant, PathKind::InterGroup),
                  tech, topo.k, 0.0, 0.2);
  std::printf("inter-group: %.4f dB = %.4f (detector pair) + %.4f (fiber) "
              "+ %.4f (switches), overhead %.2fx\n",
              lb.total_db, lb.bsa_term_db, lb.fiber_term_db, lb.switch_term_db,
              overhead_factor(lb.total_db));
  return 0;
}
