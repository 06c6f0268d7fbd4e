#pragma once

#include "evocad/geometry/vec3.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace evocad {

/// Exact nearest-neighbour index over a fixed point set.
class KdTree {
public:
  struct Hit {
    std::uint32_t index = 0;
    double squared_distance = std::numeric_limits<double>::infinity();
  };

  explicit KdTree(std::span<const Vec3> points) : points_(points.begin(), points.end()) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0u);
    nodes_.reserve(points_.size());
    if (!points_.empty())
      build(0, order_.size());
  }

  std::size_t size() const noexcept { return points_.size(); }

  Hit nearest(const Vec3 &q) const noexcept {
    Hit best;
    if (!nodes_.empty())
      search(0, q, best);
    return best;
  }

private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  static constexpr std::size_t kLeafSize = 8;

  struct Node {
    std::uint32_t begin, end; ///< range into order_
    std::uint32_t left = kNone, right = kNone;
    int axis = 0;
    double split = 0.0;
  };

  std::uint32_t build(std::size_t begin, std::size_t end) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(end)});
    if (end - begin <= kLeafSize)
      return id;
    Aabb box{points_[order_[begin]], points_[order_[begin]]};
    for (std::size_t i = begin; i < end; ++i)
      box.expand(points_[order_[i]]);
    const Vec3 e = box.extent();
    const int axis = e.x >= e.y && e.x >= e.z ? 0 : (e.y >= e.z ? 1 : 2);
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::uint32_t a, std::uint32_t b) { return points_[a][axis] < points_[b][axis]; });
    const double split = points_[order_[mid]][axis];
    const auto left = build(begin, mid);
    const auto right = build(mid, end);
    auto &n = nodes_[id];
    n.axis = axis;
    n.split = split;
    n.left = left;
    n.right = right;
    return id;
  }

  void search(std::uint32_t id, const Vec3 &q, Hit &best) const noexcept {
    const Node &n = nodes_[id];
    if (n.left == kNone) {
      for (std::uint32_t i = n.begin; i < n.end; ++i) {
        const auto idx = order_[i];
        const double d = squared_distance(q, points_[idx]);
        if (d < best.squared_distance || (d == best.squared_distance && idx < best.index))
          best = {idx, d};
      }
      return;
    }
    const double diff = q[n.axis] - n.split;
    const auto near = diff < 0 ? n.left : n.right;
    const auto far = diff < 0 ? n.right : n.left;
    search(near, q, best);
    if (diff * diff <= best.squared_distance)
      search(far, q, best);
  }

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

} // namespace evocad
