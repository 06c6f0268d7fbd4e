#pragma once

#include "evocad/error.hpp"
#include "evocad/geometry/mesh.hpp"
#include "evocad/geometry/sampling.hpp"
#include "evocad/metrics/kdtree.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace evocad {

struct IcpConfig {
  int max_iterations = 50;
  double convergence_tol = 1e-6; ///< on the change of RMS residual
  std::size_t sample_count = kIcpSampleCount;
  std::uint64_t seed = 0;
};

struct IcpResult {
  RigidTransform transform;
  TriMesh aligned;
  int iterations = 0;
  double rms = 0.0;
};

/// Least-squares rigid map src -> dst for paired points (Kabsch, no scale).
inline RigidTransform kabsch(std::span<const Vec3> src, std::span<const Vec3> dst) {
  const double n = static_cast<double>(src.size());
  Vec3 cs, cd;
  for (std::size_t i = 0; i < src.size(); ++i) {
    cs += src[i];
    cd += dst[i];
  }
  cs *= 1.0 / n;
  cd *= 1.0 / n;
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Vec3 a = src[i] - cs, b = dst[i] - cd;
    h += Eigen::Vector3d(a.x, a.y, a.z) * Eigen::Vector3d(b.x, b.y, b.z).transpose();
  }
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0 ? -1.0 : 1.0;
  const Eigen::Matrix3d r = svd.matrixV() * d * svd.matrixU().transpose();
  RigidTransform t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      t.rotation[i][j] = r(i, j);
  t.translation = cd - t.rotation * cs;
  return t;
}

/// Point-to-point ICP of `moving` onto `fixed`. Both meshes are sampled with
/// the same seed; correspondences are exact nearest neighbours.
inline IcpResult icp_align(const TriMesh &moving, const TriMesh &fixed, const IcpConfig &cfg) {
  if (cfg.max_iterations < 1 || !(cfg.convergence_tol > 0))
    throw ConstraintError("invalid ICP configuration");
  const auto src = sample_surface(moving, cfg.sample_count, cfg.seed).points;
  const auto target = sample_surface(fixed, cfg.sample_count, cfg.seed).points;
  const KdTree tree(target);

  IcpResult result;
  std::vector<Vec3> matched(src.size());
  double previous = INFINITY;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    double sum = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      const auto hit = tree.nearest(result.transform.apply(src[i]));
      matched[i] = target[hit.index];
      sum += hit.squared_distance;
    }
    const double rms = std::sqrt(sum / static_cast<double>(src.size()));
    result.iterations = it;
    result.rms = rms;
    if (rms == 0.0 || previous - rms < cfg.convergence_tol)
      break;
    previous = rms;
    result.transform = kabsch(src, matched);
  }
  result.aligned = transformed(moving, [&](const Vec3 &p) { return result.transform.apply(p); });
  return result;
}

/// Rotation angle of a rigid transform, radians.
inline double rotation_angle(const RigidTransform &t) noexcept {
  const double trace = t.rotation[0][0] + t.rotation[1][1] + t.rotation[2][2];
  return std::acos(std::clamp((trace - 1.0) / 2.0, -1.0, 1.0));
}

} // namespace evocad
