#pragma once

// Benchmark target curves. Closed shapes repeat their first sample at the
// end so that first == last; open shapes do not.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "linksynth/geometry.hpp"

namespace linksynth {

enum class ShapeKind { Parabola, NacaAirfoil, Line, Ellipse, Circle, Lemniscate };

struct TargetShape {
  ShapeKind kind = ShapeKind::Circle;
  Vec2 center{};
  double scale = 1.0;   // radius, semi-major axis, half-width or chord
  double aspect = 1.0;  // ellipse b/a, parabola curvature coefficient c
  Vec2 start{0.0, 0.0}; // line endpoints
  Vec2 end{1.0, 0.0};
  std::string camber_code = "2412";  // NACA 4-digit code
  int n_points = 100;
};

inline std::string_view shape_name(ShapeKind k) {
  switch (k) {
    case ShapeKind::Parabola: return "parabola";
    case ShapeKind::NacaAirfoil: return "naca";
    case ShapeKind::Line: return "line";
    case ShapeKind::Ellipse: return "ellipse";
    case ShapeKind::Circle: return "circle";
    case ShapeKind::Lemniscate: return "lemniscate";
  }
  return "?";
}

inline ShapeKind parse_shape_kind(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "parabola") return ShapeKind::Parabola;
  if (lower == "naca" || lower == "naca_airfoil" || lower == "airfoil") return ShapeKind::NacaAirfoil;
  if (lower == "line") return ShapeKind::Line;
  if (lower == "ellipse") return ShapeKind::Ellipse;
  if (lower == "circle") return ShapeKind::Circle;
  if (lower == "lemniscate") return ShapeKind::Lemniscate;
  throw std::invalid_argument("unknown target shape '" + std::string(s) + "'");
}

inline bool is_closed_shape(ShapeKind k) { return k != ShapeKind::Line && k != ShapeKind::Parabola; }

struct NacaCode {
  double max_camber;    // m, fraction of chord
  double camber_pos;    // p, fraction of chord
  double thickness;     // tau, fraction of chord
};

inline NacaCode parse_naca(std::string_view code) {
  if (code.size() != 4 || !std::all_of(code.begin(), code.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw std::invalid_argument("NACA camber code must be 4 digits, got '" + std::string(code) + "'");
  const NacaCode n{(code[0] - '0') / 100.0, (code[1] - '0') / 10.0, ((code[2] - '0') * 10 + (code[3] - '0')) / 100.0};
  if (n.thickness <= 0.0) throw std::invalid_argument("NACA thickness must be > 0");
  if (n.max_camber > 0.0 && (n.camber_pos <= 0.0 || n.camber_pos >= 1.0))
    throw std::invalid_argument("NACA camber position must lie strictly inside the chord");
  return n;
}

/// Half-thickness at chord fraction x (open trailing edge variant).
inline double naca_thickness(double tau, double x) {
  return 5.0 * tau * (0.2969 * std::sqrt(x) - 0.1260 * x - 0.3516 * x * x + 0.2843 * x * x * x - 0.1015 * x * x * x * x);
}

/// Mean camber line y_c and its slope at chord fraction x.
inline std::pair<double, double> naca_camber(const NacaCode &n, double x) {
  const double m = n.max_camber, p = n.camber_pos;
  if (m == 0.0) return {0.0, 0.0};
  if (x < p) return {m / (p * p) * (2.0 * p * x - x * x), 2.0 * m / (p * p) * (p - x)};
  const double q = (1.0 - p) * (1.0 - p);
  return {m / q * ((1.0 - 2.0 * p) + 2.0 * p * x - x * x), 2.0 * m / q * (p - x)};
}

/// Upper (+1) or lower (-1) surface point at chord fraction x, unit chord.
inline Vec2 naca_surface(const NacaCode &n, double x, int side) {
  const auto [yc, slope] = naca_camber(n, x);
  const double yt = naca_thickness(n.thickness, x);
  const double th = std::atan(slope);
  return {x - side * yt * std::sin(th), yc + side * yt * std::cos(th)};
}

inline Trajectory generate(const TargetShape &s) {
  if (s.n_points < 8) throw std::invalid_argument("target n_points must be >= 8");
  if (!(s.scale > 0.0)) throw std::invalid_argument("target scale must be > 0");
  const int n = s.n_points;
  Trajectory out;
  auto &pts = out.samples;
  constexpr double two_pi = 2.0 * std::numbers::pi;

  switch (s.kind) {
    case ShapeKind::Circle:
    case ShapeKind::Ellipse: {
      const double a = s.scale;
      const double b = s.kind == ShapeKind::Circle ? s.scale : s.scale * s.aspect;
      if (!(b > 0.0)) throw std::invalid_argument("ellipse aspect must be > 0");
      for (int i = 0; i < n; ++i) {
        const double t = two_pi * i / n;
        pts.push_back(s.center + Vec2{a * std::cos(t), b * std::sin(t)});
      }
      break;
    }
    case ShapeKind::Lemniscate: {
      const double a = s.scale;
      for (int i = 0; i < n; ++i) {
        const double t = two_pi * i / n;
        const double d = 1.0 + std::sin(t) * std::sin(t);
        pts.push_back(s.center + Vec2{a * std::cos(t) / d, a * std::sin(t) * std::cos(t) / d});
      }
      break;
    }
    case ShapeKind::Line: {
      for (int i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / (n - 1);
        pts.push_back(s.start + (s.end - s.start) * u);
      }
      break;
    }
    case ShapeKind::Parabola: {
      for (int i = 0; i < n; ++i) {
        const double t = -1.0 + 2.0 * i / (n - 1);
        pts.push_back(s.center + Vec2{s.scale * t, s.scale * s.aspect * t * t});
      }
      break;
    }
    case ShapeKind::NacaAirfoil: {
      const auto code = parse_naca(s.camber_code);
      // Cosine-spaced stations; upper surface trailing edge -> leading edge,
      // then lower surface back towards the trailing edge.
      const int half = n / 2;
      auto station = [&](int k) { return 0.5 * (1.0 - std::cos(std::numbers::pi * k / half)); };
      for (int k = half; k >= 0; --k) pts.push_back(s.center + naca_surface(code, station(k), +1) * s.scale);
      const int lower_end = (n % 2 == 0) ? half - 1 : half;
      for (int k = 1; k <= lower_end; ++k) pts.push_back(s.center + naca_surface(code, station(k), -1) * s.scale);
      break;
    }
  }
  if (is_closed_shape(s.kind)) pts.push_back(pts.front());
  out.dt = 1.0 / static_cast<double>(pts.size() - 1);
  return out;
}

/// Uniformly scales and translates so the curve's bounding box is centred
/// inside `box` and touches it along its longer side. Aspect is preserved.
inline Trajectory normalize_to_box(const Trajectory &traj, const BoundingBox &box = {{0.0, 0.0}, {10.0, 10.0}}) {
  const auto bb = bounding_box(traj.samples);
  const double span = std::max(bb.width(), bb.height());
  if (!(span > 0.0)) throw std::invalid_argument("normalize_to_box: degenerate curve");
  const double s = std::min(box.width(), box.height()) / span;
  Trajectory out = traj;
  const Vec2 c_src = bb.center(), c_dst = box.center();
  for (auto &p : out.samples) p = c_dst + (p - c_src) * s;
  return out;
}

/// Canonical benchmark target: default parameters for `kind`, normalised into `box`.
inline Trajectory make_target(ShapeKind kind, int n_points = 100,
                              const BoundingBox &box = {{0.0, 0.0}, {10.0, 10.0}}) {
  TargetShape s;
  s.kind = kind;
  s.n_points = n_points;
  switch (kind) {
    case ShapeKind::Ellipse: s.aspect = 0.5; break;
    case ShapeKind::Line: s.start = {0.0, 0.0}; s.end = {1.0, 0.0}; break;
    case ShapeKind::Parabola: s.aspect = 1.0; break;
    default: break;
  }
  return normalize_to_box(generate(s), box);
}

}  // namespace linksynth
