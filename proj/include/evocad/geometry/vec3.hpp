#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace evocad {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 &operator+=(const Vec3 &o) noexcept {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3 &operator-=(const Vec3 &o) noexcept {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3 &operator*=(double s) noexcept {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  constexpr double operator[](int i) const noexcept {
    return i == 0 ? x : (i == 1 ? y : z);
  }
  friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3 &b) noexcept { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3 &b) noexcept { return a -= b; }
constexpr Vec3 operator*(Vec3 a, double s) noexcept { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) noexcept { return a *= s; }
constexpr Vec3 operator-(const Vec3 &a) noexcept { return {-a.x, -a.y, -a.z}; }

constexpr double dot(const Vec3 &a, const Vec3 &b) noexcept {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
constexpr Vec3 cross(const Vec3 &a, const Vec3 &b) noexcept {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3 &a) noexcept { return std::sqrt(dot(a, a)); }
inline double distance(const Vec3 &a, const Vec3 &b) noexcept {
  return norm(a - b);
}
constexpr double squared_distance(const Vec3 &a, const Vec3 &b) noexcept {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}
inline Vec3 normalized(const Vec3 &a) noexcept {
  const double n = norm(a);
  return n > 0.0 ? a * (1.0 / n) : Vec3{};
}
inline bool is_finite(const Vec3 &a) noexcept {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

struct Aabb {
  Vec3 min;
  Vec3 max;

  Vec3 extent() const noexcept { return max - min; }
  Vec3 center() const noexcept { return (min + max) * 0.5; }
  double max_extent() const noexcept {
    const Vec3 e = extent();
    return std::max({e.x, e.y, e.z});
  }
  void expand(const Vec3 &p) noexcept {
    min = {std::min(min.x, p.x), std::min(min.y, p.y), std::min(min.z, p.z)};
    max = {std::max(max.x, p.x), std::max(max.y, p.y), std::max(max.z, p.z)};
  }
  static Aabb merged(const Aabb &a, const Aabb &b) noexcept {
    Aabb r = a;
    r.expand(b.min);
    r.expand(b.max);
    return r;
  }
  /// Grow each side by `fraction` of the largest extent.
  Aabb padded(double fraction) const noexcept {
    const double pad = max_extent() * fraction;
    return {min - Vec3{pad, pad, pad}, max + Vec3{pad, pad, pad}};
  }
};

using Mat3 = std::array<std::array<double, 3>, 3>;

constexpr Mat3 identity_mat3() noexcept {
  return {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
}

constexpr Vec3 operator*(const Mat3 &m, const Vec3 &v) noexcept {
  return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
          m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
          m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

constexpr Mat3 operator*(const Mat3 &a, const Mat3 &b) noexcept {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        r[i][j] += a[i][k] * b[k][j];
  return r;
}

constexpr Mat3 transpose(const Mat3 &m) noexcept {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r[i][j] = m[j][i];
  return r;
}

constexpr double determinant(const Mat3 &m) noexcept {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Rotation of `radians` about a unit `axis` (Rodrigues).
inline Mat3 axis_angle(const Vec3 &axis, double radians) noexcept {
  const Vec3 a = normalized(axis);
  const double c = std::cos(radians), s = std::sin(radians), t = 1.0 - c;
  return {{{t * a.x * a.x + c, t * a.x * a.y - s * a.z, t * a.x * a.z + s * a.y},
           {t * a.x * a.y + s * a.z, t * a.y * a.y + c, t * a.y * a.z - s * a.x},
           {t * a.x * a.z - s * a.y, t * a.y * a.z + s * a.x, t * a.z * a.z + c}}};
}

/// x -> rotation * x + translation. rotation is orthonormal with det +1.
struct RigidTransform {
  Mat3 rotation = identity_mat3();
  Vec3 translation;

  Vec3 apply(const Vec3 &p) const noexcept { return rotation * p + translation; }

  /// (this ∘ inner)(x) = this(inner(x))
  RigidTransform after(const RigidTransform &inner) const noexcept {
    return {rotation * inner.rotation, rotation * inner.translation + translation};
  }

  static RigidTransform identity() noexcept { return {}; }
};

/// x -> rigid(scale * x)
struct SimilarityTransform {
  double scale = 1.0;
  RigidTransform rigid;

  Vec3 apply(const Vec3 &p) const noexcept { return rigid.apply(p * scale); }
};

} // namespace evocad
