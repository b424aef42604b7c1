#pragma once

// Qualitative signature and the atomic event alphabet detected on a sampled
// trace. Event times are normalised, t = i / N for sample i of N + 1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "linksynth/lifting/proxies.hpp"
#include "linksynth/seed.hpp"

namespace linksynth::lifting {

struct QualSignature {
  std::vector<int> s_kappa;
  std::vector<int> m_x;
  std::vector<int> m_y;
};

inline QualSignature qual_signature(const KinematicProxies &k, const LiftingConfig &cfg = {}) {
  QualSignature q;
  q.s_kappa = hysteretic_sign(k.curvatures, cfg.curvature_margin);
  std::vector<double> vx(k.velocities.size()), vy(k.velocities.size());
  for (std::size_t i = 0; i < vx.size(); ++i) {
    vx[i] = k.velocities[i].x;
    vy[i] = k.velocities[i].y;
  }
  q.m_x = hysteretic_sign(vx, cfg.monotonicity_margin);
  q.m_y = hysteretic_sign(vy, cfg.monotonicity_margin);
  return q;
}

enum class EventKind { INF, EX_x, EX_y, SINT, RegionIn, RegionOut, RegionCross, GuardCross };

inline std::string_view event_name(EventKind k) {
  switch (k) {
    case EventKind::INF: return "INF";
    case EventKind::EX_x: return "EX_x";
    case EventKind::EX_y: return "EX_y";
    case EventKind::SINT: return "SINT";
    case EventKind::RegionIn: return "RegionIn";
    case EventKind::RegionOut: return "RegionOut";
    case EventKind::RegionCross: return "RegionCross";
    case EventKind::GuardCross: return "GuardCross";
  }
  return "?";
}

struct Event {
  EventKind kind = EventKind::INF;
  double t = 0.0;
  std::size_t sample = 0;  // grid sample the event is attributed to
  std::string payload;     // region or guard name, empty otherwise

  bool operator==(const Event &) const = default;
};

/// Axis-aligned region.
struct Region {
  std::string name;
  BoundingBox box;
};

/// Infinite guard line through `point` along `direction`.
struct Guard {
  std::string name;
  Vec2 point{};
  Vec2 direction{1.0, 0.0};

  Vec2 unit_normal() const {
    const double n = norm(direction);
    if (!(n > 0.0)) throw std::invalid_argument("guard '" + name + "' has zero direction");
    return {-direction.y / n, direction.x / n};
  }
  double signed_distance(const Vec2 &p) const { return dot(p - point, unit_normal()); }
};

/// Intersection of segments [p0,p1] and [q0,q1]; returns the parameters
/// (u along p, w along q) when they meet at a single point.
inline std::optional<std::pair<double, double>> segment_intersection(const Vec2 &p0, const Vec2 &p1, const Vec2 &q0,
                                                                     const Vec2 &q1) {
  const Vec2 r = p1 - p0, s = q1 - q0;
  const double d = cross(r, s);
  if (std::abs(d) <= 1e-15 * norm(r) * norm(s)) return std::nullopt;  // parallel or degenerate
  const Vec2 qp = q0 - p0;
  const double u = cross(qp, s) / d;
  const double w = cross(qp, r) / d;
  if (u < 0.0 || u > 1.0 || w < 0.0 || w > 1.0) return std::nullopt;
  return std::pair{u, w};
}

struct SelfIntersection {
  Vec2 point;
  std::size_t first_segment;
  std::size_t second_segment;
  double t;  // stamped at the later pass
};

/// All distinct self-intersections of the polyline. Adjacent segments (and
/// the wrap-around pair of a closed curve) are skipped; hits closer than a
/// scale-relative tolerance collapse into the earliest one.
inline std::vector<SelfIntersection> self_intersections(const Trajectory &traj) {
  const auto &p = traj.samples;
  std::vector<SelfIntersection> out;
  if (p.size() < 4) return out;
  const std::size_t segs = p.size() - 1;
  const double n = static_cast<double>(segs);
  const bool closed = is_closed(traj);
  const double tol = 1e-9 * std::max(1.0, bounding_box(p).diagonal());
  for (std::size_t k = 0; k < segs; ++k) {
    if (p[k] == p[k + 1]) continue;
    for (std::size_t m = k + 2; m < segs; ++m) {
      if (closed && k == 0 && m == segs - 1) continue;
      if (p[m] == p[m + 1]) continue;
      const auto hit = segment_intersection(p[k], p[k + 1], p[m], p[m + 1]);
      if (!hit) continue;
      const Vec2 x = p[k] + (p[k + 1] - p[k]) * hit->first;
      const double t = (static_cast<double>(m) + hit->second) / n;
      auto dup = std::find_if(out.begin(), out.end(), [&](const auto &s) { return distance(s.point, x) <= tol; });
      if (dup == out.end()) out.push_back({x, k, m, t});
      else if (t < dup->t) *dup = {x, k, m, t};
    }
  }
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.t < b.t; });
  return out;
}

/// Deterministic down-sampling: keep every ceil(1/fraction)-th element
/// starting at a seed-derived offset. At least one element survives.
template <class T>
std::vector<T> retain_fraction(const std::vector<T> &items, double fraction, std::uint64_t seed) {
  if (items.empty()) return {};
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("retention fraction must be in (0, 1]");
  const auto stride = static_cast<std::size_t>(std::ceil(1.0 / fraction - 1e-12));
  const std::size_t offset = splitmix64(seed) % std::min(stride, items.size());
  std::vector<T> out;
  for (std::size_t i = offset; i < items.size(); i += stride) out.push_back(items[i]);
  return out;
}

namespace detail {

/// Liang-Barsky: does segment a-b touch the box?
inline bool segment_hits_box(const Vec2 &a, const Vec2 &b, const BoundingBox &box) {
  double t0 = 0.0, t1 = 1.0;
  const Vec2 d = b - a;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {a.x - box.min.x, box.max.x - a.x, a.y - box.min.y, box.max.y - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) t0 = std::max(t0, r);
    else t1 = std::min(t1, r);
    if (t0 > t1) return false;
  }
  return true;
}

inline void sign_flip_events(const std::vector<int> &sign, EventKind kind, bool closed, std::vector<Event> &out) {
  const std::size_t n = sign.size() - 1;
  for (std::size_t i = 1; i <= n; ++i)
    if (sign[i] != 0 && sign[i - 1] != 0 && sign[i] != sign[i - 1])
      out.push_back({kind, static_cast<double>(i) / static_cast<double>(n), i, {}});
  // A closed curve also flips across the seam where the cycle restarts.
  if (closed && sign[n] != 0 && sign[0] != 0 && sign[n] != sign[0]) out.push_back({kind, 0.0, 0, {}});
}

}  // namespace detail

/// Detects INF / EX_x / EX_y from the hysteretic signature, SINT from
/// all-pairs segment intersection (down-sampled), region transitions and
/// validated guard crossings. Sorted by time, then kind, then payload.
inline std::vector<Event> detect_events(const Trajectory &traj, const KinematicProxies &k,
                                        const std::vector<Region> &regions, const std::vector<Guard> &guards,
                                        const LiftingConfig &cfg = {}) {
  check_trajectory(traj, 3);
  if (k.velocities.size() != traj.size()) throw std::invalid_argument("detect_events: proxies do not match trace");
  const auto &p = traj.samples;
  const std::size_t n = p.size() - 1;
  const double nd = static_cast<double>(n);
  const bool closed = is_closed(traj);
  std::vector<Event> out;

  const auto sig = qual_signature(k, cfg);
  detail::sign_flip_events(sig.s_kappa, EventKind::INF, closed, out);
  detail::sign_flip_events(sig.m_x, EventKind::EX_x, closed, out);
  detail::sign_flip_events(sig.m_y, EventKind::EX_y, closed, out);

  std::vector<Event> sints;
  for (const auto &s : self_intersections(traj)) {
    const auto idx = static_cast<std::size_t>(std::lround(s.t * nd));
    sints.push_back({EventKind::SINT, s.t, std::min(idx, n), {}});
  }
  for (auto &e : retain_fraction(sints, cfg.sint_retention, cfg.seed)) out.push_back(std::move(e));

  for (const auto &r : regions) {
    bool prev = r.box.contains(p[0]);
    if (prev) out.push_back({EventKind::RegionIn, 0.0, 0, r.name});
    for (std::size_t i = 1; i <= n; ++i) {
      const bool cur = r.box.contains(p[i]);
      const double t = static_cast<double>(i) / nd;
      if (cur && !prev) out.push_back({EventKind::RegionIn, t, i, r.name});
      else if (!cur && prev) out.push_back({EventKind::RegionOut, t, i, r.name});
      else if (!cur && !prev && detail::segment_hits_box(p[i - 1], p[i], r.box))
        out.push_back({EventKind::RegionCross, t, i, r.name});
      prev = cur;
    }
  }

  for (const auto &g : guards) {
    const Vec2 nrm = g.unit_normal();
    std::optional<std::size_t> last;
    double prev = g.signed_distance(p[0]);
    for (std::size_t i = 1; i <= n; ++i) {
      const double cur = g.signed_distance(p[i]);
      const bool flipped = (prev < 0.0) != (cur < 0.0);
      prev = cur;
      if (!flipped) continue;
      if (std::abs(dot(k.velocities[i], nrm)) < cfg.guard_min_normal_velocity) continue;
      if (last && i - *last < static_cast<std::size_t>(cfg.guard_min_separation)) continue;
      last = i;
      out.push_back({EventKind::GuardCross, static_cast<double>(i) / nd, i, g.name});
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const Event &a, const Event &b) {
    return std::tie(a.t, a.kind, a.payload) < std::tie(b.t, b.kind, b.payload);
  });
  return out;
}

}  // namespace linksynth::lifting
