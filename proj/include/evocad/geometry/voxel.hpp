#pragma once

#include "evocad/error.hpp"
#include "evocad/geometry/mesh.hpp"
#include "evocad/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace evocad {

struct VoxelGrid {
  Vec3 origin;
  double cell_size = 1.0;
  std::array<int, 3> dims{1, 1, 1};
  std::vector<std::uint8_t> occupancy; ///< x fastest, then y, then z

  std::size_t index(int ix, int iy, int iz) const noexcept {
    return (std::size_t(iz) * dims[1] + iy) * dims[0] + ix;
  }
  bool occupied(int ix, int iy, int iz) const noexcept {
    return occupancy[index(ix, iy, iz)] != 0;
  }
  std::size_t count() const noexcept {
    return static_cast<std::size_t>(std::count(occupancy.begin(), occupancy.end(), 1));
  }
  double occupied_volume() const noexcept {
    return static_cast<double>(count()) * cell_size * cell_size * cell_size;
  }
};

/// Distance below which a ray is considered to graze a triangle edge.
inline constexpr double kGrazeTolerance = 1e-9;

namespace detail {

struct ProjectedTriangle {
  std::array<Vec3, 3> p;
  double area2;  ///< signed doubled area of the xy projection
  double min_x, max_x, min_y, max_y;
};

enum class RayHit { Miss, Hit, Graze };

/// Vertical ray through (x, y) against one triangle. On Hit, `z` receives the
/// crossing height.
inline RayHit cast_vertical(const ProjectedTriangle &t, double x, double y,
                            double &z) noexcept {
  double w[3];
  double min_dist = INFINITY;
  for (int e = 0; e < 3; ++e) {
    const Vec3 &a = t.p[(e + 1) % 3];
    const Vec3 &b = t.p[(e + 2) % 3];
    // Edge function opposite corner e, positive inside for ccw projection.
    const double ex = b.x - a.x, ey = b.y - a.y;
    w[e] = ex * (y - a.y) - ey * (x - a.x);
    const double len = std::hypot(ex, ey);
    const double signed_dist = (t.area2 > 0 ? w[e] : -w[e]) / (len > 0 ? len : 1.0);
    if (signed_dist < -kGrazeTolerance)
      return RayHit::Miss;
    min_dist = std::min(min_dist, signed_dist);
  }
  if (min_dist <= kGrazeTolerance)
    return RayHit::Graze;
  const double inv = 1.0 / t.area2;
  z = (w[0] * t.p[0].z + w[1] * t.p[1].z + w[2] * t.p[2].z) * inv;
  return RayHit::Hit;
}

} // namespace detail

/// Solid occupancy of a watertight mesh: a cell is occupied iff its center is
/// inside, by even-odd parity of crossings along a vertical ray. Rays that
/// graze an edge or vertex are re-cast with a deterministic per-column offset.
/// `resolution` cells span the longest axis of `box`.
inline VoxelGrid voxelize(const TriMesh &mesh, const Aabb &box, int resolution) {
  if (resolution < 2)
    throw ConstraintError("voxel resolution must be at least 2");
  if (!is_watertight(mesh))
    throw NotWatertight("voxelize requires a watertight mesh");
  const double longest = box.max_extent();
  if (!(longest > 0.0))
    throw DegenerateMesh("voxel bounds have zero extent");

  VoxelGrid grid;
  grid.origin = box.min;
  grid.cell_size = longest / resolution;
  const Vec3 ext = box.extent();
  for (int a = 0; a < 3; ++a)
    grid.dims[a] = std::max(1, static_cast<int>(std::ceil(ext[a] / grid.cell_size - 1e-9)));
  grid.occupancy.assign(std::size_t(grid.dims[0]) * grid.dims[1] * grid.dims[2], 0);

  std::vector<detail::ProjectedTriangle> tris;
  tris.reserve(mesh.faces().size());
  for (std::size_t f = 0; f < mesh.faces().size(); ++f) {
    const auto t = mesh.triangle(f);
    const double area2 =
        (t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[1].y - t[0].y) * (t[2].x - t[0].x);
    if (area2 == 0.0)
      continue; // parallel to the ray
    tris.push_back({t, area2, std::min({t[0].x, t[1].x, t[2].x}),
                    std::max({t[0].x, t[1].x, t[2].x}),
                    std::min({t[0].y, t[1].y, t[2].y}),
                    std::max({t[0].y, t[1].y, t[2].y})});
  }

  const int nx = grid.dims[0], ny = grid.dims[1], nz = grid.dims[2];
  const double cs = grid.cell_size;
  const double margin = cs; // covers the jitter and the graze band

  // Bin triangles by row so each column only scans nearby candidates.
  std::vector<std::vector<std::uint32_t>> rows(ny);
  for (std::uint32_t i = 0; i < tris.size(); ++i) {
    const int lo = std::max(0, static_cast<int>(std::floor((tris[i].min_y - margin - box.min.y) / cs - 0.5)));
    const int hi = std::min(ny - 1, static_cast<int>(std::ceil((tris[i].max_y + margin - box.min.y) / cs - 0.5)));
    for (int r = lo; r <= hi; ++r)
      rows[r].push_back(i);
  }

  std::vector<double> crossings;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      double x = box.min.x + (ix + 0.5) * cs;
      double y = box.min.y + (iy + 0.5) * cs;
      for (int attempt = 0;; ++attempt) {
        crossings.clear();
        bool grazed = false;
        for (auto i : rows[iy]) {
          const auto &t = tris[i];
          if (x < t.min_x - margin || x > t.max_x + margin)
            continue;
          double z = 0.0;
          const auto hit = detail::cast_vertical(t, x, y, z);
          if (hit == detail::RayHit::Graze) {
            grazed = true;
            break;
          }
          if (hit == detail::RayHit::Hit)
            crossings.push_back(z);
        }
        if (!grazed || attempt >= 16)
          break;
        // Deterministic jitter inside the cell: a function of (column, attempt).
        Rng jitter(mix64((std::uint64_t(ix) << 32) ^ std::uint64_t(iy)) ^ std::uint64_t(attempt));
        x = box.min.x + (ix + 0.5 + 1e-3 * (jitter.uniform() - 0.5)) * cs;
        y = box.min.y + (iy + 0.5 + 1e-3 * (jitter.uniform() - 0.5)) * cs;
      }
      std::sort(crossings.begin(), crossings.end());
      std::size_t below = 0;
      for (int iz = 0; iz < nz; ++iz) {
        const double z = box.min.z + (iz + 0.5) * cs;
        while (below < crossings.size() && crossings[below] < z)
          ++below;
        if (below % 2 == 1)
          grid.occupancy[grid.index(ix, iy, iz)] = 1;
      }
    }
  }
  return grid;
}

} // namespace evocad
