#pragma once

#include "evocad/error.hpp"
#include "evocad/geometry/sampling.hpp"
#include "evocad/metrics/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace evocad {

namespace detail {

/// Euclidean distance from each point of `from` to its nearest point in `to`.
inline std::vector<double> nearest_distances(const PointCloud &from, const PointCloud &to) {
  const KdTree tree(to.points);
  std::vector<double> out;
  out.reserve(from.size());
  for (const auto &p : from.points)
    out.push_back(std::sqrt(tree.nearest(p).squared_distance));
  return out;
}

inline void require_points(const PointCloud &a, const PointCloud &b) {
  if (a.empty() || b.empty())
    throw EmptyCloud("point cloud distance needs two non-empty clouds");
}

} // namespace detail

/// Symmetric mean nearest-neighbour distance:
/// ½·mean_a min_b d + ½·mean_b min_a d.
inline double pcd(const PointCloud &a, const PointCloud &b) {
  detail::require_points(a, b);
  double sum_ab = 0.0, sum_ba = 0.0;
  for (double d : detail::nearest_distances(a, b))
    sum_ab += d;
  for (double d : detail::nearest_distances(b, a))
    sum_ba += d;
  return 0.5 * sum_ab / static_cast<double>(a.size()) +
         0.5 * sum_ba / static_cast<double>(b.size());
}

/// Hausdorff distance: the larger of the two directed sup-inf distances.
inline double hdd(const PointCloud &a, const PointCloud &b) {
  detail::require_points(a, b);
  const auto ab = detail::nearest_distances(a, b);
  const auto ba = detail::nearest_distances(b, a);
  return std::max(*std::max_element(ab.begin(), ab.end()),
                  *std::max_element(ba.begin(), ba.end()));
}

} // namespace evocad
