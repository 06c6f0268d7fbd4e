#pragma once

#include "evocad/error.hpp"
#include "evocad/geometry/mesh.hpp"
#include "evocad/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace evocad {

inline constexpr std::size_t kDistanceSampleCount = 10'000;
inline constexpr std::size_t kIcpSampleCount = 2'048;

struct PointCloud {
  std::vector<Vec3> points;
  std::uint64_t source_seed = 0;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

/// Area-weighted face choice, uniform barycentric point within the face.
/// Meshes with identical connectivity and proportional face areas draw the
/// same faces and barycentric coordinates for the same seed.
inline PointCloud sample_surface(const TriMesh &mesh, std::size_t n,
                                 std::uint64_t seed) {
  if (n == 0)
    throw ConstraintError("sample count must be at least 1");
  std::vector<double> cumulative;
  cumulative.reserve(mesh.faces().size());
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.faces().size(); ++f) {
    total += triangle_area(mesh.triangle(f));
    cumulative.push_back(total);
  }
  if (!(total > 0.0))
    throw DegenerateMesh("mesh has zero surface area");

  Rng rng(seed);
  PointCloud cloud{{}, seed};
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pick = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    if (it == cumulative.end())
      --it;
    const auto t = mesh.triangle(static_cast<std::size_t>(it - cumulative.begin()));
    const double r1 = std::sqrt(rng.uniform());
    const double r2 = rng.uniform();
    const double a = 1.0 - r1, b = r1 * (1.0 - r2), c = r1 * r2;
    cloud.points.push_back(t[0] * a + t[1] * b + t[2] * c);
  }
  return cloud;
}

} // namespace evocad
