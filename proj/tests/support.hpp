#pragma once

// Shared fixtures for the test suites.

#include "evocad/csg.hpp"
#include "evocad/geometry.hpp"
#include "evocad/random.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace evocad::test {

/// 12 outward facets of an axis-aligned box, corners duplicated per facet.
inline std::vector<Triangle> box_triangles(Vec3 lo, Vec3 hi) {
  const Vec3 c[8] = {{lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z},
                     {lo.x, hi.y, lo.z}, {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z},
                     {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z}};
  const int quads[6][4] = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                           {2, 3, 7, 6}, {1, 2, 6, 5}, {0, 4, 7, 3}};
  std::vector<Triangle> tris;
  for (const auto &q : quads) {
    tris.push_back({c[q[0]], c[q[1]], c[q[2]]});
    tris.push_back({c[q[0]], c[q[2]], c[q[3]]});
  }
  return tris;
}

inline TriMesh box_mesh(Vec3 lo, Vec3 hi) { return weld_vertices(box_triangles(lo, hi)); }
inline TriMesh unit_cube() { return box_mesh({0, 0, 0}, {1, 1, 1}); }

/// Rectangular plate with `holes` square holes in a row.
inline std::string plate_source(int holes, double thickness = 0.2) {
  std::string src = "part z 0 " + std::to_string(thickness) + " { rect 4 3;";
  for (int i = 0; i < holes; ++i) {
    const double x = -1.5 + 3.0 * (i + 0.5) / holes;
    src += " hole rect 0.4 0.4 at " + std::to_string(x) + " 0;";
  }
  return src + " }";
}

inline TriMesh plate_mesh(int holes) { return csg::compile(csg::parse(plate_source(holes))); }

/// Random valid program: 1–3 parts stacked in z, outers of every shape kind,
/// 0–4 holes of every shape kind on a non-overlapping grid.
inline csg::CsgProgram random_program(Rng &rng) {
  using csg::Shape;
  using csg::Vec2;
  csg::CsgProgram prog;
  const int parts = 1 + static_cast<int>(rng.below(3));
  double z = rng.uniform();
  for (int p = 0; p < parts; ++p) {
    csg::Part part;
    part.z0 = z;
    part.z1 = z + 0.1 + rng.uniform();
    z = part.z1 + 0.05 + 0.5 * rng.uniform();
    const double half = 2.0 + rng.uniform() * 2.0; // inscribed half-size
    switch (rng.below(3)) {
    case 0:
      part.outer = Shape::rect(2 * half, 2 * half * (1.0 + 0.4 * rng.uniform()));
      break;
    case 1:
      part.outer = Shape::circ(half * 1.35);
      break;
    default: { // star-shaped polygon around the origin, radius ≥ half
      std::vector<Vec2> pts;
      const int n = 8 + static_cast<int>(rng.below(8));
      for (int i = 0; i < n; ++i) {
        const double a = 2 * 3.141592653589793 * (i + 0.3 * rng.uniform()) / n;
        const double r = half * (1.6 + 0.4 * rng.uniform());
        pts.push_back({r * std::cos(a), r * std::sin(a)});
      }
      if (rng.bernoulli(0.5))
        std::reverse(pts.begin(), pts.end());
      part.outer = Shape::poly(std::move(pts));
    }
    }
    // Holes live in cells of a 3x3 grid inside [-half*0.9, half*0.9]².
    std::vector<int> cells{0, 1, 2, 3, 4, 5, 6, 7, 8};
    const int holes = static_cast<int>(rng.below(5));
    const double cell = 2 * half * 0.9 / 3;
    for (int h = 0; h < holes; ++h) {
      const auto pick = rng.below(cells.size());
      const int c = cells[pick];
      cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(pick));
      const Vec2 at{-half * 0.9 + cell * (c % 3 + 0.5), -half * 0.9 + cell * (c / 3 + 0.5)};
      const double s = cell * (0.2 + 0.25 * rng.uniform());
      csg::Hole hole;
      hole.at = at;
      switch (rng.below(3)) {
      case 0:
        hole.shape = Shape::rect(s * 2, s * 1.5);
        break;
      case 1:
        hole.shape = Shape::circ(s);
        break;
      default:
        hole.shape = Shape::poly({{-s, -s}, {s, -s * 0.5}, {s * 0.2, 0}, {s, s}, {-s, s * 0.7}});
      }
      part.holes.push_back(std::move(hole));
    }
    prog.parts.push_back(std::move(part));
  }
  csg::validate(prog);
  return prog;
}

inline std::filesystem::path fresh_temp_dir(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / ("evocad_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace evocad::test
