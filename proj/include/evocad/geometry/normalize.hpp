#pragma once

#include "evocad/error.hpp"
#include "evocad/geometry/mesh.hpp"

namespace evocad {

struct NormalizedMesh {
  TriMesh mesh;
  SimilarityTransform applied; ///< maps input coordinates to output coordinates
};

/// Vertex centroid moved to the origin, then uniform scale so the largest
/// bounding-box extent is 1.
inline NormalizedMesh normalize(const TriMesh &mesh) {
  if (mesh.faces().empty())
    throw DegenerateMesh("cannot normalize a mesh without faces");
  const double extent = bounds(mesh).max_extent();
  if (!(extent > 0.0))
    throw DegenerateMesh("cannot normalize a mesh with zero extent");
  Vec3 centroid;
  for (const auto &v : mesh.vertices())
    centroid += v;
  centroid *= 1.0 / static_cast<double>(mesh.vertices().size());
  const double scale = 1.0 / extent;
  SimilarityTransform applied{scale, {identity_mat3(), centroid * -scale}};
  auto out = transformed(mesh, [&](const Vec3 &p) { return (p - centroid) * scale; });
  return {std::move(out), applied};
}

} // namespace evocad
