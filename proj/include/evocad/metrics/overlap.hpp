#pragma once

#include "evocad/error.hpp"
#include "evocad/geometry/voxel.hpp"

namespace evocad {

inline constexpr int kDefaultVoxelResolution = 64;
inline constexpr double kUnionPadding = 0.02;

struct Overlap {
  double iou = 0.0;
  double dsc = 0.0;
};

/// Volumetric IoU and Dice of two aligned watertight meshes, voxelized on a
/// shared grid over their union bounds padded by 2%.
inline Overlap iou_dsc(const TriMesh &a, const TriMesh &b,
                       int resolution = kDefaultVoxelResolution) {
  if (!is_watertight(a) || !is_watertight(b))
    throw NotWatertight("IoU/DSC need two watertight meshes");
  const Aabb box = Aabb::merged(bounds(a), bounds(b)).padded(kUnionPadding);
  const auto ga = voxelize(a, box, resolution);
  const auto gb = voxelize(b, box, resolution);
  std::size_t inter = 0, uni = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < ga.occupancy.size(); ++i) {
    const bool x = ga.occupancy[i] != 0, y = gb.occupancy[i] != 0;
    inter += x && y;
    uni += x || y;
    na += x;
    nb += y;
  }
  if (uni == 0)
    throw EmptyUnion("no occupied voxels in either mesh");
  return {static_cast<double>(inter) / static_cast<double>(uni),
          2.0 * static_cast<double>(inter) / static_cast<double>(na + nb)};
}

} // namespace evocad
