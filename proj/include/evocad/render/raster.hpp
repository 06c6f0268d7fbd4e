#pragma once

#include "evocad/error.hpp"
#include "evocad/geometry/mesh.hpp"
#include "evocad/render/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace evocad {

inline constexpr std::array<std::uint8_t, 3> kBackground{255, 255, 255};

/// Orthographic camera: screen basis (right, up) and `toward`, the unit
/// direction from the object to the viewer.
struct OrthoView {
  Vec3 right;
  Vec3 up;
  Vec3 toward;

  static OrthoView looking_from(Vec3 toward, Vec3 world_up) {
    const Vec3 d = normalized(toward);
    const Vec3 r = normalized(cross(world_up, d));
    return {r, cross(d, r), d};
  }
};

/// Isometric, front, top, right; laid out row-major in a 2x2 grid.
inline std::array<OrthoView, 4> canonical_views() {
  return {OrthoView::looking_from({1, -1, 1}, {0, 0, 1}),
          OrthoView::looking_from({0, -1, 0}, {0, 0, 1}),
          OrthoView::looking_from({0, 0, 1}, {0, 1, 0}),
          OrthoView::looking_from({1, 0, 0}, {0, 0, 1})};
}

namespace detail {

inline void rasterize_view(const TriMesh &mesh, const OrthoView &view, Image &img, int x0,
                           int y0, int cell, std::vector<double> &depth) {
  static const Vec3 light = normalized({0.35, -0.55, 0.75});
  static constexpr std::array<double, 3> base{150.0, 180.0, 220.0};
  // Normalized meshes fit in a unit cube, so any projection stays within ±0.87.
  const double scale = 0.5 * cell / 0.9;
  const double cx = x0 + 0.5 * cell, cy = y0 + 0.5 * cell;
  std::fill(depth.begin(), depth.end(), -std::numeric_limits<double>::infinity());

  for (std::size_t f = 0; f < mesh.faces().size(); ++f) {
    const auto t = mesh.triangle(f);
    std::array<double, 3> sx, sy, sz;
    for (int c = 0; c < 3; ++c) {
      sx[c] = cx + dot(t[c], view.right) * scale;
      sy[c] = cy - dot(t[c], view.up) * scale;
      sz[c] = dot(t[c], view.toward);
    }
    const double area = (sx[1] - sx[0]) * (sy[2] - sy[0]) - (sy[1] - sy[0]) * (sx[2] - sx[0]);
    if (area == 0.0)
      continue;
    const Vec3 n = normalized(cross(t[1] - t[0], t[2] - t[0]));
    const double shade = 0.3 + 0.7 * std::abs(dot(n, light));
    const std::array<std::uint8_t, 3> color{static_cast<std::uint8_t>(base[0] * shade),
                                            static_cast<std::uint8_t>(base[1] * shade),
                                            static_cast<std::uint8_t>(base[2] * shade)};
    const int px0 = std::max(x0, static_cast<int>(std::floor(std::min({sx[0], sx[1], sx[2]}))));
    const int px1 = std::min(x0 + cell - 1, static_cast<int>(std::ceil(std::max({sx[0], sx[1], sx[2]}))));
    const int py0 = std::max(y0, static_cast<int>(std::floor(std::min({sy[0], sy[1], sy[2]}))));
    const int py1 = std::min(y0 + cell - 1, static_cast<int>(std::ceil(std::max({sy[0], sy[1], sy[2]}))));
    const double inv = 1.0 / area;
    for (int py = py0; py <= py1; ++py) {
      const double y = py + 0.5;
      for (int px = px0; px <= px1; ++px) {
        const double x = px + 0.5;
        const double w0 = ((sx[2] - sx[1]) * (y - sy[1]) - (sy[2] - sy[1]) * (x - sx[1])) * inv;
        const double w1 = ((sx[0] - sx[2]) * (y - sy[2]) - (sy[0] - sy[2]) * (x - sx[2])) * inv;
        const double w2 = 1.0 - w0 - w1;
        if (w0 < 0 || w1 < 0 || w2 < 0)
          continue;
        const double z = w0 * sz[0] + w1 * sz[1] + w2 * sz[2];
        auto &d = depth[std::size_t(py - y0) * cell + (px - x0)];
        if (z > d) {
          d = z;
          img.set_pixel(px, py, color);
        }
      }
    }
  }
}

} // namespace detail

/// Deterministic 2x2 multiview render (isometric, front, top, right) with
/// flat shading and a z-buffer. The mesh is framed by its bounding box, so
/// translation and uniform scale do not change the picture.
inline Image render_multiview(const TriMesh &mesh, int size = 256) {
  if (size < 64)
    throw ConstraintError("render size must be at least 64");
  if (mesh.faces().empty())
    throw DegenerateMesh("cannot render a mesh without faces");
  const Aabb box = bounds(mesh);
  const double extent = box.max_extent();
  if (!(extent > 0.0))
    throw DegenerateMesh("cannot render a mesh with zero extent");
  const Vec3 center = box.center();
  const TriMesh framed =
      transformed(mesh, [&](const Vec3 &p) { return (p - center) * (1.0 / extent); });

  Image img(size, size, kBackground);
  const int cell = size / 2;
  std::vector<double> depth(std::size_t(cell) * cell);
  const auto views = canonical_views();
  for (int v = 0; v < 4; ++v)
    detail::rasterize_view(framed, views[v], img, (v % 2) * cell, (v / 2) * cell, cell, depth);
  return img;
}

} // namespace evocad
