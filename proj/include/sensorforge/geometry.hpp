#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace sensorforge {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  bool operator==(const Vec3& o) const = default;

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm_sq(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm_sq(v)); }

inline Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  return n > 0.0 ? v / n : Vec3{};
}

inline bool is_unit(const Vec3& v, double tol = 1e-9) {
  return std::abs(norm(v) - 1.0) <= tol;
}

// Mirror reflection of a direction about a unit normal.
inline Vec3 reflect(const Vec3& dir, const Vec3& unit_normal) {
  return dir - unit_normal * (2.0 * dot(dir, unit_normal));
}

// Row-major 3x3 matrix; used for cached object rotations.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
  Mat3 transposed() const {
    return Mat3{{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
  }
};

struct Quat {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Quat identity() { return {}; }

  static Quat from_yaw(double yaw_rad) {
    return {std::cos(yaw_rad * 0.5), 0.0, 0.0, std::sin(yaw_rad * 0.5)};
  }

  static Quat from_axis_angle(const Vec3& axis, double angle_rad) {
    const Vec3 a = normalized(axis);
    const double s = std::sin(angle_rad * 0.5);
    return {std::cos(angle_rad * 0.5), a.x * s, a.y * s, a.z * s};
  }

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quat normalized() const {
    const double n = norm();
    return {w / n, x / n, y / n, z / n};
  }

  Quat conjugate() const { return {w, -x, -y, -z}; }

  Quat operator*(const Quat& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x,
            w * o.z + x * o.y - y * o.x + z * o.w};
  }

  Vec3 rotate(const Vec3& v) const {
    // v' = v + 2w(q x v) + 2 q x (q x v)
    const Vec3 q{x, y, z};
    const Vec3 t = cross(q, v) * 2.0;
    return v + t * w + cross(q, t);
  }

  Mat3 to_matrix() const {
    const double xx = x * x, yy = y * y, zz = z * z;
    const double xy = x * y, xz = x * z, yz = y * z;
    const double wx = w * x, wy = w * y, wz = w * z;
    return Mat3{{1 - 2 * (yy + zz), 2 * (xy - wz), 2 * (xz + wy),
                 2 * (xy + wz), 1 - 2 * (xx + zz), 2 * (yz - wx),
                 2 * (xz - wy), 2 * (yz + wx), 1 - 2 * (xx + yy)}};
  }

  double yaw() const { return std::atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z)); }

  bool is_unit(double tol = 1e-9) const { return std::abs(norm() - 1.0) <= tol; }
};

// Shortest-arc spherical interpolation.
inline Quat slerp(const Quat& a, Quat b, double u) {
  double d = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
  if (d < 0.0) {
    b = {-b.w, -b.x, -b.y, -b.z};
    d = -d;
  }
  if (d > 1.0 - 1e-12) {
    // Nearly parallel: lerp and renormalize.
    Quat q{a.w + (b.w - a.w) * u, a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u,
           a.z + (b.z - a.z) * u};
    return q.normalized();
  }
  const double theta = std::acos(d);
  const double s = std::sin(theta);
  const double ka = std::sin((1.0 - u) * theta) / s;
  const double kb = std::sin(u * theta) / s;
  return {ka * a.w + kb * b.w, ka * a.x + kb * b.x, ka * a.y + kb * b.y, ka * a.z + kb * b.z};
}

struct Pose {
  Vec3 position;
  Quat orientation = Quat::identity();

  Vec3 transform_point(const Vec3& p) const { return orientation.rotate(p) + position; }
  Vec3 rotate(const Vec3& v) const { return orientation.rotate(v); }

  Pose compose(const Pose& local) const {
    return {transform_point(local.position), (orientation * local.orientation).normalized()};
  }

  Pose inverse() const {
    const Quat inv = orientation.conjugate();
    return {inv.rotate(-position), inv};
  }
};

// Wrap an angle to (-pi, pi].
inline double normalize_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

struct Aabb {
  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity()};

  bool empty() const { return lo.x > hi.x; }

  void expand(const Vec3& p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }

  void expand(const Aabb& b) {
    expand(b.lo);
    expand(b.hi);
  }

  Vec3 center() const { return (lo + hi) * 0.5; }
  Vec3 extent() const { return hi - lo; }

  double surface_area() const {
    if (empty()) return 0.0;
    const Vec3 e = extent();
    return 2.0 * (e.x * e.y + e.y * e.z + e.z * e.x);
  }

  bool contains(const Vec3& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
  }

  bool overlaps(const Aabb& b) const {
    return lo.x <= b.hi.x && hi.x >= b.lo.x && lo.y <= b.hi.y && hi.y >= b.lo.y &&
           lo.z <= b.hi.z && hi.z >= b.lo.z;
  }

  // Slab test against a ray given precomputed reciprocal direction.
  // std::min/max drop NaNs from 0*inf on degenerate axes, keeping the test
  // conservative there.
  bool hit_by(const Vec3& origin, const Vec3& inv_dir, double tmax) const {
    double tnear = -std::numeric_limits<double>::infinity();
    double tfar = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < 3; ++axis) {
      const double o = origin[axis];
      const double inv = axis == 0 ? inv_dir.x : (axis == 1 ? inv_dir.y : inv_dir.z);
      double t0 = (lo[axis] - o) * inv;
      double t1 = (hi[axis] - o) * inv;
      if (inv < 0.0) std::swap(t0, t1);
      tnear = std::max(tnear, t0);
      tfar = std::min(tfar, t1);
    }
    return tnear <= tfar && tfar >= 0.0 && tnear <= tmax;
  }
};

}  // namespace sensorforge
