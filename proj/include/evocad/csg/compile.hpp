#pragma once

#include "evocad/csg/polygon.hpp"
#include "evocad/csg/program.hpp"
#include "evocad/geometry/mesh.hpp"

#include <vector>

namespace evocad::csg {

/// Closed extrusion of one profile between z0 and z1, outward winding.
inline TriMesh extrude(const Profile &prof, double z0, double z1) {
  std::vector<Vec2> flat(prof.outer.begin(), prof.outer.end());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> loops; // (offset, size)
  loops.emplace_back(0u, static_cast<std::uint32_t>(prof.outer.size()));
  for (const auto &h : prof.holes) {
    loops.emplace_back(static_cast<std::uint32_t>(flat.size()),
                       static_cast<std::uint32_t>(h.size()));
    flat.insert(flat.end(), h.begin(), h.end());
  }
  const auto cap = triangulate(prof.outer, prof.holes);
  const auto n = static_cast<std::uint32_t>(flat.size());
  if (cap.size() != n + 2 * prof.holes.size() - 2)
    throw TriangulationError("cap triangulation has the wrong triangle count");

  std::vector<Vec3> vertices;
  vertices.reserve(2 * n);
  for (const auto &p : flat)
    vertices.push_back({p.x, p.y, z0});
  for (const auto &p : flat)
    vertices.push_back({p.x, p.y, z1});

  std::vector<Face> faces;
  faces.reserve(2 * cap.size() + 2 * n);
  for (const auto &t : cap) {
    faces.push_back({t[0] + n, t[1] + n, t[2] + n}); // top, +z
    faces.push_back({t[0], t[2], t[1]});             // bottom, -z
  }
  for (const auto &[offset, size] : loops)
    for (std::uint32_t j = 0; j < size; ++j) {
      const std::uint32_t a = offset + j, b = offset + (j + 1) % size;
      faces.push_back({a, b, b + n});
      faces.push_back({a, b + n, a + n});
    }
  return TriMesh(std::move(vertices), std::move(faces));
}

/// φ for csg_mini: every part extruded, concatenated and welded. The result
/// is watertight with χ = expected_chi(prog).
inline TriMesh compile(const CsgProgram &prog) {
  std::vector<TriMesh> meshes;
  meshes.reserve(prog.parts.size());
  for (const auto &part : prog.parts)
    meshes.push_back(extrude(profile_of(part), part.z0, part.z1));
  return merge_meshes(meshes);
}

} // namespace evocad::csg
