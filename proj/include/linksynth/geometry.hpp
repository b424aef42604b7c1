#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace linksynth {

/// Planar point / vector in length units.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(const Vec2 &o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2 &operator-=(const Vec2 &o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2 &operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return a *= (1.0 / s); }
  friend constexpr Vec2 operator-(const Vec2 &a) { return {-a.x, -a.y}; }
  friend constexpr bool operator==(const Vec2 &, const Vec2 &) = default;
};

constexpr double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2 &a) { return std::sqrt(a.x * a.x + a.y * a.y); }
constexpr double squared_norm(const Vec2 &a) { return a.x * a.x + a.y * a.y; }
inline double distance(const Vec2 &a, const Vec2 &b) { return norm(a - b); }

inline bool is_finite(const Vec2 &p) { return std::isfinite(p.x) && std::isfinite(p.y); }

using PointSet = std::vector<Vec2>;

/// Time-ordered planar samples. `dt` is the crank-phase fraction between
/// consecutive samples.
struct Trajectory {
  PointSet samples;
  double dt = 1.0;

  std::size_t size() const { return samples.size(); }
  const Vec2 &operator[](std::size_t i) const { return samples[i]; }
  Vec2 &operator[](std::size_t i) { return samples[i]; }
  friend bool operator==(const Trajectory &, const Trajectory &) = default;
};

/// Throws unless the trajectory has >= min_len finite samples.
inline void check_trajectory(const Trajectory &traj, std::size_t min_len = 2) {
  if (traj.samples.size() < min_len)
    throw std::invalid_argument("trajectory needs at least " + std::to_string(min_len) +
                                " samples, got " + std::to_string(traj.samples.size()));
  for (const auto &p : traj.samples)
    if (!is_finite(p)) throw std::invalid_argument("trajectory contains non-finite coordinates");
}

struct BoundingBox {
  Vec2 min{};
  Vec2 max{};

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double diagonal() const { return std::hypot(width(), height()); }
  Vec2 center() const { return (min + max) * 0.5; }
  bool contains(const Vec2 &p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
};

inline BoundingBox bounding_box(std::span<const Vec2> pts) {
  if (pts.empty()) throw std::invalid_argument("bounding_box of empty point set");
  BoundingBox bb{pts[0], pts[0]};
  for (const auto &p : pts) {
    bb.min.x = std::min(bb.min.x, p.x);
    bb.min.y = std::min(bb.min.y, p.y);
    bb.max.x = std::max(bb.max.x, p.x);
    bb.max.y = std::max(bb.max.y, p.y);
  }
  return bb;
}

inline Vec2 centroid(std::span<const Vec2> pts) {
  if (pts.empty()) throw std::invalid_argument("centroid of empty point set");
  Vec2 c{};
  for (const auto &p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

/// Polyline arc length over samples [begin, end].
inline double arc_length(std::span<const Vec2> pts, std::size_t begin, std::size_t end) {
  double len = 0.0;
  for (std::size_t i = begin; i < end && i + 1 < pts.size(); ++i) len += distance(pts[i], pts[i + 1]);
  return len;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

inline constexpr double deg_to_rad(double d) { return d * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double r) { return r * 180.0 / std::numbers::pi; }

template <class T> constexpr int sign_of(T v) { return (T{0} < v) - (v < T{0}); }

}  // namespace linksynth
