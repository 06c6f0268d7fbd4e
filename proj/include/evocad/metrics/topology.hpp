#pragma once

#include "evocad/geometry/mesh.hpp"

#include <cstdlib>
#include <optional>

namespace evocad {

/// Topology error |χ(gt) − χ(gen)| and correctness 𝟙[χ(gen) = χ(gt)]. All four
/// fields are absent when either mesh is not watertight, since χ is only
/// meaningful for closed 2-manifolds.
struct Topology {
  std::optional<long> t_err;
  std::optional<bool> t_corr;
  std::optional<long> chi_gen;
  std::optional<long> chi_gt;
};

inline Topology topology(const TriMesh &gen, const TriMesh &gt) {
  if (!is_watertight(gen) || !is_watertight(gt))
    return {};
  const long cg = euler_characteristic(gen);
  const long ct = euler_characteristic(gt);
  return {std::labs(ct - cg), cg == ct, cg, ct};
}

} // namespace evocad
