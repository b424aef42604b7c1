#pragma once

// Discrete segmental representation: per-sample motion labels from forward
// differences, collapsed into runs.

#include <array>
#include <cmath>
#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "linksynth/lifting/proxies.hpp"

namespace linksynth::lifting {

enum class MotionLabel { Pause, Straight, GentleTurn, SharpTurn, UTurn };
inline constexpr std::size_t kMotionLabelCount = 5;

inline std::string_view label_name(MotionLabel l) {
  switch (l) {
    case MotionLabel::Pause: return "Pause";
    case MotionLabel::Straight: return "Straight";
    case MotionLabel::GentleTurn: return "GentleTurn";
    case MotionLabel::SharpTurn: return "SharpTurn";
    case MotionLabel::UTurn: return "UTurn";
  }
  return "?";
}

struct Segment {
  MotionLabel label = MotionLabel::Straight;
  std::size_t start = 0;  // inclusive sample index
  std::size_t end = 0;    // exclusive
  int dominant_heading = 0;       // heading bin, 0 = east, counter-clockwise
  int dominant_curvature_sign = 0;
};

struct SegmentationSummary {
  std::array<double, kMotionLabelCount> label_frequency{};
  double mean_run_length = 0.0;
  std::map<std::pair<MotionLabel, MotionLabel>, int> transitions;
  double entropy_bits = 0.0;
};

struct Segmentation {
  std::vector<MotionLabel> labels;  // one per sample
  std::vector<Segment> segments;
  SegmentationSummary summary;
};

inline int quantize_heading(double theta, int bins) {
  const double w = 2.0 * std::numbers::pi / bins;
  int b = static_cast<int>(std::floor((theta + 0.5 * w) / w));
  b %= bins;
  return b < 0 ? b + bins : b;
}

inline MotionLabel classify(double speed, double turn_rad, const LiftingConfig &cfg) {
  if (speed < cfg.pause_speed) return MotionLabel::Pause;
  const double deg = rad_to_deg(std::abs(turn_rad));
  if (deg <= cfg.straight_deg) return MotionLabel::Straight;
  if (deg <= cfg.gentle_deg) return MotionLabel::GentleTurn;
  if (deg <= cfg.sharp_deg) return MotionLabel::SharpTurn;
  return MotionLabel::UTurn;
}

/// Labels sample i from the step leaving it (speed) and the heading change
/// at vertex i between the incoming and outgoing steps. Endpoints carry no
/// turn; the last sample reuses the final step's speed.
inline Segmentation segment_dr(const Trajectory &traj, const LiftingConfig &cfg = {}) {
  check_trajectory(traj, 3);
  const auto &p = traj.samples;
  const std::size_t n = p.size();

  std::vector<double> speed(n), heading(n - 1), turn(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Vec2 v = (p[i + 1] - p[i]) / cfg.dt;
    speed[i] = norm(v);
    heading[i] = std::atan2(v.y, v.x);
  }
  speed[n - 1] = speed[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) turn[i] = unwrap_delta(heading[i] - heading[i - 1]);

  Segmentation out;
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.labels[i] = classify(speed[i], turn[i], cfg);

  const double straight = deg_to_rad(cfg.straight_deg);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && out.labels[j] == out.labels[i]) ++j;
    Segment s;
    s.label = out.labels[i];
    s.start = i;
    s.end = j;
    std::vector<int> votes(static_cast<std::size_t>(cfg.heading_bins), 0);
    double signed_turn = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      ++votes[static_cast<std::size_t>(quantize_heading(heading[std::min(k, n - 2)], cfg.heading_bins))];
      signed_turn += turn[k];
    }
    s.dominant_heading = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    s.dominant_curvature_sign = std::abs(signed_turn) > straight ? sign_of(signed_turn) : 0;
    out.segments.push_back(s);
    i = j;
  }

  auto &sum = out.summary;
  for (auto l : out.labels) sum.label_frequency[static_cast<std::size_t>(l)] += 1.0;
  for (auto &f : sum.label_frequency) {
    f /= static_cast<double>(n);
    if (f > 0.0) sum.entropy_bits -= f * std::log2(f);
  }
  sum.mean_run_length = static_cast<double>(n) / static_cast<double>(out.segments.size());
  for (std::size_t k = 1; k < out.segments.size(); ++k)
    ++sum.transitions[{out.segments[k - 1].label, out.segments[k].label}];
  return out;
}

}  // namespace linksynth::lifting
