#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "linksynth/geometry.hpp"

namespace linksynth::lifting {

/// Detection thresholds and switches shared by both lifting variants.
struct LiftingConfig {
  // Discrete segmental representation.
  double pause_speed = 1.5e-4;
  double straight_deg = 2.0;
  double gentle_deg = 30.0;
  double sharp_deg = 45.0;
  int heading_bins = 8;

  // Compositional lifting.
  double dt = 1.0;
  double curvature_margin = 1e-3;
  double monotonicity_margin = 1e-4;
  double singular_speed = 1e-12;  // guard on (x'^2 + y'^2)^(3/2)
  double guard_min_normal_velocity = 1e-4;
  int guard_min_separation = 5;
  double sint_retention = 0.1;
  std::uint64_t seed = 0;

  // Temporal-spec synthesis.
  double merge_tolerance = 1e-12;
  double region_padding = 0.05;  // fraction of the bounding-box diagonal
  std::size_t sparse_event_limit = 4;

  bool dr = true;
  bool cl = true;
};

struct KinematicProxies {
  std::vector<Vec2> velocities;
  std::vector<double> speeds;
  std::vector<Vec2> accelerations;
  std::vector<double> headings;
  std::vector<double> heading_changes;
  std::vector<double> curvatures;
};

/// Smallest signed angle equivalent to `a` (branch cut at +-pi).
inline double unwrap_delta(double a) { return wrap_angle(a); }

/// Forward/backward differences at the ends, centred in the interior;
/// three-point acceleration; curvature (x'y'' - y'x'') / (x'^2 + y'^2)^(3/2).
/// All arrays have one entry per sample. Acceleration and curvature endpoints
/// copy their nearest interior value.
inline KinematicProxies proxies(const Trajectory &traj, double dt = 1.0, double singular_speed = 1e-12) {
  check_trajectory(traj, 3);
  if (!(dt > 0.0)) throw std::invalid_argument("proxies: dt must be > 0");
  const auto &p = traj.samples;
  const std::size_t n = p.size();
  KinematicProxies k;
  k.velocities.resize(n);
  k.speeds.resize(n);
  k.accelerations.resize(n);
  k.headings.resize(n);
  k.heading_changes.resize(n);
  k.curvatures.resize(n);

  k.velocities[0] = (p[1] - p[0]) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) k.velocities[i] = (p[i + 1] - p[i - 1]) / (2.0 * dt);
  k.velocities[n - 1] = (p[n - 1] - p[n - 2]) / dt;

  for (std::size_t i = 1; i + 1 < n; ++i) k.accelerations[i] = (p[i + 1] - p[i] * 2.0 + p[i - 1]) / (dt * dt);
  k.accelerations[0] = k.accelerations[1];
  k.accelerations[n - 1] = k.accelerations[n - 2];

  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 &v = k.velocities[i];
    k.speeds[i] = norm(v);
    k.headings[i] = std::atan2(v.y, v.x);
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    k.heading_changes[i] = std::abs(unwrap_delta(k.headings[i + 1] - k.headings[i]));
  k.heading_changes[n - 1] = k.heading_changes[n - 2];

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec2 &v = k.velocities[i];
    const Vec2 &a = k.accelerations[i];
    const double denom = std::pow(v.x * v.x + v.y * v.y, 1.5);
    k.curvatures[i] = denom < singular_speed ? 0.0 : (v.x * a.y - v.y * a.x) / denom;
  }
  k.curvatures[0] = k.curvatures[1];
  k.curvatures[n - 1] = k.curvatures[n - 2];
  return k;
}

/// Sign with a dead band: the output switches to +1 / -1 only when the
/// signal leaves [-margin, margin] on that side and otherwise holds. Samples
/// before the first out-of-band value take that value's sign; an all-in-band
/// signal maps to 0.
inline std::vector<int> hysteretic_sign(std::span<const double> signal, double margin) {
  if (!(margin > 0.0)) throw std::invalid_argument("hysteretic_sign: margin must be > 0");
  std::vector<int> out(signal.size(), 0);
  int state = 0;
  for (double v : signal)
    if (v > margin || v < -margin) {
      state = v > 0 ? 1 : -1;
      break;
    }
  for (std::size_t i = 0; i < signal.size(); ++i) {
    if (signal[i] > margin) state = 1;
    else if (signal[i] < -margin) state = -1;
    out[i] = state;
  }
  return out;
}

/// True when the last sample repeats the first (closed curve).
inline bool is_closed(const Trajectory &traj) {
  if (traj.size() < 3) return false;
  const auto bb = bounding_box(traj.samples);
  return distance(traj.samples.front(), traj.samples.back()) <= 1e-9 * std::max(1.0, bb.diagonal());
}

}  // namespace linksynth::lifting
