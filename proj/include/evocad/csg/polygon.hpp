#pragma once

#include "evocad/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace evocad::csg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend constexpr bool operator==(const Vec2 &, const Vec2 &) = default;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
/// > 0 when c is left of the directed line a->b.
constexpr double orient(Vec2 a, Vec2 b, Vec2 c) noexcept { return cross(b - a, c - a); }

using Polygon = std::vector<Vec2>;

/// Minimum gap between distinct polygon features. Keeps every vertex clear of
/// the 1e-7 weld grid so extrusions stay manifold.
inline constexpr double kMinClearance = 1e-6;

inline double signed_area(std::span<const Vec2> poly) noexcept {
  double a = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i)
    a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * a;
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) noexcept {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec2 q{a.x + t * ab.x - p.x, a.y + t * ab.y - p.y};
  return std::hypot(q.x, q.y);
}

inline bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) noexcept {
  const double d1 = orient(c, d, a), d2 = orient(c, d, b);
  const double d3 = orient(a, b, c), d4 = orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on = [](Vec2 p, Vec2 q, Vec2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
  };
  return (d1 == 0 && on(c, d, a)) || (d2 == 0 && on(c, d, b)) ||
         (d3 == 0 && on(a, b, c)) || (d4 == 0 && on(a, b, d));
}

inline double segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) noexcept {
  if (segments_intersect(a, b, c, d))
    return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

/// Even-odd containment; boundary points may go either way.
inline bool point_in_polygon(Vec2 p, std::span<const Vec2> poly) noexcept {
  bool inside = false;
  for (std::size_t i = 0, n = poly.size(), j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) &&
        p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
      inside = !inside;
  }
  return inside;
}

inline double polygon_distance(std::span<const Vec2> a, std::span<const Vec2> b) noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      best = std::min(best, segment_distance(a[i], a[(i + 1) % a.size()], b[j],
                                             b[(j + 1) % b.size()]));
  return best;
}

/// Simple (non-self-intersecting) with clearance between non-adjacent edges,
/// and non-zero area.
inline bool is_simple(std::span<const Vec2> poly) noexcept {
  const std::size_t n = poly.size();
  if (n < 3)
    return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = poly[(i + 1) % n] - poly[i];
    if (std::hypot(e.x, e.y) <= kMinClearance)
      return false;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent)
        continue;
      if (segment_distance(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]) <=
          kMinClearance)
        return false;
    }
  // Adjacent edges folding back onto each other.
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = poly[(i + n - 1) % n], c = poly[i], q = poly[(i + 1) % n];
    if (orient(p, c, q) == 0 && dot(p - c, q - c) > 0)
      return false;
  }
  return std::abs(signed_area(poly)) > kMinClearance * kMinClearance;
}

/// `inner` lies strictly inside `outer` with at least kMinClearance gap.
inline bool strictly_contains(std::span<const Vec2> outer, std::span<const Vec2> inner) noexcept {
  if (polygon_distance(outer, inner) <= kMinClearance)
    return false;
  return std::all_of(inner.begin(), inner.end(),
                     [&](Vec2 p) { return point_in_polygon(p, outer); });
}

/// Neither polygon touches or contains the other.
inline bool disjoint(std::span<const Vec2> a, std::span<const Vec2> b) noexcept {
  if (polygon_distance(a, b) <= kMinClearance)
    return false;
  return !point_in_polygon(a.front(), b) && !point_in_polygon(b.front(), a);
}

using IndexTriangle = std::array<std::uint32_t, 3>;

namespace detail {

inline bool point_in_triangle_closed(Vec2 p, Vec2 a, Vec2 b, Vec2 c) noexcept {
  return orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0;
}

/// Whether direction d from vertex v points into the interior wedge of a ccw
/// polygon at v, whose neighbours are prev and next.
inline bool in_wedge(Vec2 prev, Vec2 v, Vec2 next, Vec2 target) noexcept {
  const Vec2 a = next - v, b = prev - v, d = target - v;
  if (cross(a, b) >= 0) // convex corner: between a and b counter-clockwise
    return cross(a, d) > 0 && cross(d, b) > 0;
  return !(cross(b, d) >= 0 && cross(d, a) >= 0); // reflex corner
}

} // namespace detail

/// Triangulate a polygon with holes by ear clipping after bridging every hole
/// into the outer loop. `outer` must be counter-clockwise and each hole
/// clockwise. Returned triangles index the concatenation outer ++ holes[0] ++
/// holes[1] ... and are counter-clockwise.
inline std::vector<IndexTriangle> triangulate(std::span<const Vec2> outer,
                                              std::span<const Polygon> holes) {
  std::vector<Vec2> pts(outer.begin(), outer.end());
  std::vector<std::uint32_t> loop(outer.size());
  for (std::uint32_t i = 0; i < loop.size(); ++i)
    loop[i] = i;

  struct HoleRef {
    std::uint32_t offset;
    std::uint32_t size;
    std::uint32_t rightmost;
  };
  std::vector<HoleRef> refs;
  for (const auto &h : holes) {
    const auto offset = static_cast<std::uint32_t>(pts.size());
    std::uint32_t right = 0;
    for (std::uint32_t i = 0; i < h.size(); ++i)
      if (h[i].x > h[right].x || (h[i].x == h[right].x && h[i].y < h[right].y))
        right = i;
    refs.push_back({offset, static_cast<std::uint32_t>(h.size()), right});
    pts.insert(pts.end(), h.begin(), h.end());
  }
  std::sort(refs.begin(), refs.end(), [&](const HoleRef &a, const HoleRef &b) {
    return pts[a.offset + a.rightmost].x > pts[b.offset + b.rightmost].x;
  });

  for (const auto &hole : refs) {
    const std::uint32_t m_index = hole.offset + hole.rightmost;
    const Vec2 m = pts[m_index];
    // Nearest crossing of the +x ray from m with the current loop.
    double best_x = std::numeric_limits<double>::infinity();
    std::size_t best_edge = loop.size();
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec2 a = pts[loop[i]], b = pts[loop[(i + 1) % loop.size()]];
      if ((a.y > m.y) == (b.y > m.y) && !(a.y == m.y && b.y == m.y))
        continue;
      if (a.y == b.y) {
        const double x = std::min(a.x, b.x);
        if (x >= m.x && x < best_x) {
          best_x = x;
          best_edge = i;
        }
        continue;
      }
      const double x = a.x + (m.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (x >= m.x && x < best_x) {
        best_x = x;
        best_edge = i;
      }
    }
    if (best_edge == loop.size())
      throw TriangulationError("hole bridge: no visible outer edge");
    const Vec2 ray_hit{best_x, m.y};
    const std::size_t ea = best_edge, eb = (best_edge + 1) % loop.size();
    std::uint32_t candidate = pts[loop[ea]].x > pts[loop[eb]].x ? loop[ea] : loop[eb];
    if (pts[loop[ea]] == ray_hit)
      candidate = loop[ea];
    else if (pts[loop[eb]] == ray_hit)
      candidate = loop[eb];
    else {
      // A reflex vertex inside triangle (m, hit, candidate) blocks the view;
      // take the one with the smallest angle to the ray.
      const Vec2 p = pts[candidate];
      const Vec2 t0 = m, t1 = p.y < m.y ? p : ray_hit, t2 = p.y < m.y ? ray_hit : p;
      double best_angle = std::numeric_limits<double>::infinity();
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < loop.size(); ++i) {
        const Vec2 v = pts[loop[i]];
        if (loop[i] == candidate || v.x < m.x)
          continue;
        const Vec2 prev = pts[loop[(i + loop.size() - 1) % loop.size()]];
        const Vec2 next = pts[loop[(i + 1) % loop.size()]];
        if (orient(prev, v, next) > 0)
          continue; // convex
        if (!detail::point_in_triangle_closed(v, t0, t1, t2))
          continue;
        const double angle = std::abs(std::atan2(v.y - m.y, v.x - m.x));
        const double dist = std::hypot(v.x - m.x, v.y - m.y);
        if (angle < best_angle || (angle == best_angle && dist < best_dist)) {
          best_angle = angle;
          best_dist = dist;
          candidate = loop[i];
        }
      }
    }
    // The candidate may occur more than once after earlier bridges; use the
    // occurrence whose interior wedge faces m.
    std::size_t at = loop.size();
    for (std::size_t i = 0; i < loop.size(); ++i) {
      if (pts[loop[i]] != pts[candidate])
        continue;
      const Vec2 prev = pts[loop[(i + loop.size() - 1) % loop.size()]];
      const Vec2 next = pts[loop[(i + 1) % loop.size()]];
      if (at == loop.size())
        at = i;
      if (detail::in_wedge(prev, pts[loop[i]], next, m)) {
        at = i;
        break;
      }
    }
    std::vector<std::uint32_t> merged;
    merged.reserve(loop.size() + hole.size + 2);
    merged.insert(merged.end(), loop.begin(), loop.begin() + at + 1);
    for (std::uint32_t k = 0; k <= hole.size; ++k)
      merged.push_back(hole.offset + (hole.rightmost + k) % hole.size);
    merged.insert(merged.end(), loop.begin() + at, loop.end());
    loop = std::move(merged);
  }

  // Ear clipping over the (weakly simple) bridged loop.
  std::vector<IndexTriangle> tris;
  tris.reserve(loop.size());
  auto is_ear = [&](std::size_t i, bool allow_flat) {
    const std::size_t n = loop.size();
    const std::uint32_t ia = loop[(i + n - 1) % n], ib = loop[i], ic = loop[(i + 1) % n];
    const Vec2 a = pts[ia], b = pts[ib], c = pts[ic];
    const double o = orient(a, b, c);
    if (allow_flat ? o < 0 : o <= 0)
      return false;
    if (o == 0)
      return true;
    for (std::size_t j = 0; j < n; ++j) {
      const Vec2 p = pts[loop[j]];
      if (p == a || p == b || p == c)
        continue;
      if (detail::point_in_triangle_closed(p, a, b, c))
        return false;
    }
    return true;
  };
  while (loop.size() > 3) {
    bool clipped = false;
    for (int pass = 0; pass < 2 && !clipped; ++pass) {
      for (std::size_t i = 0; i < loop.size(); ++i) {
        if (!is_ear(i, pass == 1))
          continue;
        const std::size_t n = loop.size();
        tris.push_back({loop[(i + n - 1) % n], loop[i], loop[(i + 1) % n]});
        loop.erase(loop.begin() + static_cast<std::ptrdiff_t>(i));
        clipped = true;
        break;
      }
    }
    if (!clipped)
      throw TriangulationError("ear clipping found no ear");
  }
  if (orient(pts[loop[0]], pts[loop[1]], pts[loop[2]]) < 0)
    throw TriangulationError("final triangle is inverted");
  tris.push_back({loop[0], loop[1], loop[2]});
  return tris;
}

} // namespace evocad::csg
