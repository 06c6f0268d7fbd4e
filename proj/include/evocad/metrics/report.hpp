#pragma once

#include "evocad/geometry/normalize.hpp"
#include "evocad/metrics/distance.hpp"
#include "evocad/metrics/icp.hpp"
#include "evocad/metrics/overlap.hpp"
#include "evocad/metrics/topology.hpp"

#include <json.hpp>

#include <numbers>
#include <optional>

namespace evocad {

struct MetricReport {
  std::optional<double> pcd;
  std::optional<double> hdd;
  std::optional<double> iou;
  std::optional<double> dsc;
  std::optional<long> t_err;
  std::optional<bool> t_corr;
  bool gen_watertight = false;
  bool gt_watertight = false;
  std::optional<long> chi_gen;
  std::optional<long> chi_gt;

  friend bool operator==(const MetricReport &, const MetricReport &) = default;
};

/// Upper bound on normalize/ICP rounds in the alignment protocol.
inline constexpr int kAlignmentRounds = 3;

/// Extra ICP starts for the first round, rotated by this angle about each
/// coordinate axis in both directions; near-symmetric outlines otherwise trap
/// point-to-point ICP in a neighbouring minimum.
inline constexpr double kIcpStartAngle = 10.0 * std::numbers::pi / 180.0;

namespace detail {

inline IcpResult best_start_icp(const TriMesh &moving, const TriMesh &fixed, const IcpConfig &cfg) {
  IcpResult best = icp_align(moving, fixed, cfg);
  for (int axis = 0; axis < 3; ++axis)
    for (double sign : {1.0, -1.0}) {
      Vec3 a;
      (axis == 0 ? a.x : axis == 1 ? a.y : a.z) = 1.0;
      const Mat3 r = axis_angle(a, sign * kIcpStartAngle);
      auto icp = icp_align(transformed(moving, [&](const Vec3 &p) { return r * p; }), fixed, cfg);
      if (icp.rms < best.rms) {
        icp.transform = icp.transform.after(RigidTransform{r, {}});
        best = std::move(icp);
      }
    }
  return best;
}

} // namespace detail

/// Normalize both meshes, then rigidly register gen onto gt. Normalization by
/// bounding box is not rotation invariant, so after each ICP round that
/// rotated the mesh the result is re-normalized and registered again.
inline TriMesh align_for_metrics(const TriMesh &gen, const TriMesh &gt_normalized,
                                 const IcpConfig &cfg) {
  TriMesh current = normalize(gen).mesh;
  for (int round = 0; round < kAlignmentRounds; ++round) {
    auto icp = round == 0 ? detail::best_start_icp(current, gt_normalized, cfg)
                          : icp_align(current, gt_normalized, cfg);
    current = std::move(icp.aligned);
    if (round + 1 == kAlignmentRounds || rotation_angle(icp.transform) < 1e-9)
      break;
    current = normalize(current).mesh;
  }
  return current;
}

/// Full metric protocol for one (generated, ground-truth) pair. Topology is
/// taken on the input meshes; PCD/HDD after alignment on sampled surfaces;
/// IoU/DSC only when both meshes are watertight and occupy at least one voxel.
inline MetricReport full_report(const TriMesh &gen, const TriMesh &gt, const IcpConfig &cfg,
                                int resolution = kDefaultVoxelResolution,
                                std::uint64_t seed = 0) {
  MetricReport r;
  r.gen_watertight = is_watertight(gen);
  r.gt_watertight = is_watertight(gt);
  const auto topo = topology(gen, gt);
  r.t_err = topo.t_err;
  r.t_corr = topo.t_corr;
  r.chi_gen = topo.chi_gen;
  r.chi_gt = topo.chi_gt;

  const TriMesh gt_n = normalize(gt).mesh;
  const TriMesh gen_n = align_for_metrics(gen, gt_n, cfg);
  const auto a = sample_surface(gen_n, kDistanceSampleCount, seed);
  const auto b = sample_surface(gt_n, kDistanceSampleCount, seed);
  r.pcd = pcd(a, b);
  r.hdd = hdd(a, b);
  if (r.gen_watertight && r.gt_watertight) {
    try {
      const auto o = iou_dsc(gen_n, gt_n, resolution);
      r.iou = o.iou;
      r.dsc = o.dsc;
    } catch (const EmptyUnion &) {
      // Solids thinner than a voxel leave IoU/DSC absent.
    }
  }
  return r;
}

namespace detail {
template <class T> nlohmann::json opt(const std::optional<T> &v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}
template <class T> std::optional<T> get_opt(const nlohmann::json &j, const char *key) {
  if (!j.contains(key) || j.at(key).is_null())
    return std::nullopt;
  return j.at(key).get<T>();
}
} // namespace detail

inline void to_json(nlohmann::json &j, const MetricReport &r) {
  j = nlohmann::json{{"pcd", detail::opt(r.pcd)},
                     {"hdd", detail::opt(r.hdd)},
                     {"iou", detail::opt(r.iou)},
                     {"dsc", detail::opt(r.dsc)},
                     {"t_err", detail::opt(r.t_err)},
                     {"t_corr", detail::opt(r.t_corr)},
                     {"chi_gen", detail::opt(r.chi_gen)},
                     {"chi_gt", detail::opt(r.chi_gt)},
                     {"gen_watertight", r.gen_watertight},
                     {"gt_watertight", r.gt_watertight}};
}

inline void from_json(const nlohmann::json &j, MetricReport &r) {
  r.pcd = detail::get_opt<double>(j, "pcd");
  r.hdd = detail::get_opt<double>(j, "hdd");
  r.iou = detail::get_opt<double>(j, "iou");
  r.dsc = detail::get_opt<double>(j, "dsc");
  r.t_err = detail::get_opt<long>(j, "t_err");
  r.t_corr = detail::get_opt<bool>(j, "t_corr");
  r.chi_gen = detail::get_opt<long>(j, "chi_gen");
  r.chi_gt = detail::get_opt<long>(j, "chi_gt");
  r.gen_watertight = j.at("gen_watertight").get<bool>();
  r.gt_watertight = j.at("gt_watertight").get<bool>();
}

} // namespace evocad
