#pragma once

#include "evocad/error.hpp"
#include "evocad/geometry/vec3.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace evocad {

using Face = std::array<std::uint32_t, 3>;
using Triangle = std::array<Vec3, 3>;

/// Welded indexed triangle mesh. Immutable once built.
class TriMesh {
public:
  TriMesh() = default;

  /// Takes ownership of already-indexed data. Throws ConstraintError when a
  /// face index is out of range or a face repeats a vertex.
  TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces,
          std::size_t dropped_faces = 0)
      : vertices_(std::move(vertices)), faces_(std::move(faces)),
        dropped_faces_(dropped_faces) {
    const auto n = vertices_.size();
    for (const auto &f : faces_) {
      if (f[0] >= n || f[1] >= n || f[2] >= n)
        throw ConstraintError("face index out of range");
      if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
        throw ConstraintError("face repeats a vertex index");
    }
    for (const auto &v : vertices_)
      if (!is_finite(v))
        throw ConstraintError("non-finite vertex coordinate");
  }

  const std::vector<Vec3> &vertices() const noexcept { return vertices_; }
  const std::vector<Face> &faces() const noexcept { return faces_; }
  /// Faces removed by welding because two corners merged.
  std::size_t dropped_faces() const noexcept { return dropped_faces_; }
  bool empty() const noexcept { return faces_.empty(); }

  Triangle triangle(std::size_t f) const {
    const auto &i = faces_[f];
    return {vertices_[i[0]], vertices_[i[1]], vertices_[i[2]]};
  }

  std::vector<Triangle> triangles() const {
    std::vector<Triangle> out;
    out.reserve(faces_.size());
    for (std::size_t f = 0; f < faces_.size(); ++f)
      out.push_back(triangle(f));
    return out;
  }

  friend bool operator==(const TriMesh &, const TriMesh &) = default;

private:
  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  std::size_t dropped_faces_ = 0;
};

/// Absolute quantization step of the weld key.
inline constexpr double kWeldGrid = 1e-7;

namespace detail {

struct WeldKey {
  std::int64_t x, y, z;
  friend bool operator==(const WeldKey &, const WeldKey &) = default;
};

struct WeldKeyHash {
  std::size_t operator()(const WeldKey &k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<std::uint64_t>(k.y) + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.z) + 0x94d049bb133111ebULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

inline WeldKey weld_key(const Vec3 &p) noexcept {
  return {std::llround(p.x / kWeldGrid), std::llround(p.y / kWeldGrid),
          std::llround(p.z / kWeldGrid)};
}

} // namespace detail

/// Merge corners that share a quantized key. Vertices are numbered in order of
/// first appearance; faces whose corners collapse are dropped and counted.
inline TriMesh weld_vertices(std::span<const Triangle> raw) {
  std::unordered_map<detail::WeldKey, std::uint32_t, detail::WeldKeyHash> index;
  index.reserve(raw.size() * 2);
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  faces.reserve(raw.size());
  std::size_t dropped = 0;
  for (const auto &tri : raw) {
    Face f{};
    for (int c = 0; c < 3; ++c) {
      if (!is_finite(tri[c]))
        throw ConstraintError("non-finite vertex coordinate");
      auto [it, inserted] = index.try_emplace(
          detail::weld_key(tri[c]), static_cast<std::uint32_t>(vertices.size()));
      if (inserted)
        vertices.push_back(tri[c]);
      f[c] = it->second;
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
      ++dropped;
      continue;
    }
    faces.push_back(f);
  }
  // Vertices only referenced by dropped faces are removed.
  std::vector<std::uint32_t> remap(vertices.size(),
                                   std::numeric_limits<std::uint32_t>::max());
  std::vector<Vec3> kept;
  kept.reserve(vertices.size());
  for (auto &f : faces)
    for (auto &i : f) {
      if (remap[i] == std::numeric_limits<std::uint32_t>::max()) {
        remap[i] = static_cast<std::uint32_t>(kept.size());
        kept.push_back(vertices[i]);
      }
      i = remap[i];
    }
  return TriMesh(std::move(kept), std::move(faces), dropped);
}

inline TriMesh weld(const TriMesh &mesh) {
  const auto tris = mesh.triangles();
  return weld_vertices(tris);
}

/// Concatenate meshes and weld the result.
inline TriMesh merge_meshes(std::span<const TriMesh> parts) {
  std::vector<Triangle> tris;
  for (const auto &m : parts) {
    auto t = m.triangles();
    tris.insert(tris.end(), t.begin(), t.end());
  }
  return weld_vertices(tris);
}

struct EdgeCount {
  std::uint32_t a; ///< smaller vertex index
  std::uint32_t b;
  int faces;
  friend bool operator==(const EdgeCount &, const EdgeCount &) = default;
};

/// Undirected edge -> incident face count, sorted by (a, b). Derived from
/// faces only.
inline std::vector<EdgeCount> edge_table(const TriMesh &mesh) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(mesh.faces().size() * 3);
  for (const auto &f : mesh.faces())
    for (int c = 0; c < 3; ++c) {
      auto a = f[c], b = f[(c + 1) % 3];
      if (a > b)
        std::swap(a, b);
      edges.emplace_back(a, b);
    }
  std::sort(edges.begin(), edges.end());
  std::vector<EdgeCount> table;
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i;
    while (j < edges.size() && edges[j] == edges[i])
      ++j;
    table.push_back({edges[i].first, edges[i].second, static_cast<int>(j - i)});
    i = j;
  }
  return table;
}

/// V - E + F over the whole mesh (summed over components). Only vertices
/// referenced by a face are counted.
inline long euler_characteristic(const TriMesh &mesh) {
  std::vector<bool> used(mesh.vertices().size(), false);
  for (const auto &f : mesh.faces())
    for (auto i : f)
      used[i] = true;
  const long v = std::count(used.begin(), used.end(), true);
  const long e = static_cast<long>(edge_table(mesh).size());
  const long f = static_cast<long>(mesh.faces().size());
  return v - e + f;
}

/// Closed 2-manifold edge condition: every edge shared by exactly two faces.
inline bool is_watertight(const TriMesh &mesh) {
  if (mesh.faces().size() < 4)
    return false;
  const auto table = edge_table(mesh);
  return std::all_of(table.begin(), table.end(),
                     [](const EdgeCount &e) { return e.faces == 2; });
}

inline Aabb bounds(const TriMesh &mesh) {
  if (mesh.vertices().empty())
    throw DegenerateMesh("mesh has no vertices");
  Aabb box{mesh.vertices().front(), mesh.vertices().front()};
  for (const auto &v : mesh.vertices())
    box.expand(v);
  return box;
}

inline double triangle_area(const Triangle &t) noexcept {
  return 0.5 * norm(cross(t[1] - t[0], t[2] - t[0]));
}

inline double surface_area(const TriMesh &mesh) {
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.faces().size(); ++f)
    total += triangle_area(mesh.triangle(f));
  return total;
}

/// Signed enclosed volume (divergence theorem); positive for outward winding.
inline double signed_volume(const TriMesh &mesh) {
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.faces().size(); ++f) {
    const auto t = mesh.triangle(f);
    total += dot(t[0], cross(t[1], t[2]));
  }
  return total / 6.0;
}

/// Apply a point map to every vertex; connectivity is untouched.
template <class PointMap>
TriMesh transformed(const TriMesh &mesh, PointMap &&map) {
  std::vector<Vec3> v;
  v.reserve(mesh.vertices().size());
  for (const auto &p : mesh.vertices())
    v.push_back(map(p));
  return TriMesh(std::move(v), mesh.faces(), mesh.dropped_faces());
}

} // namespace evocad
