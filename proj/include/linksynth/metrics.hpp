#pragma once

/**
 * @file metrics.hpp
 * @brief Trajectory scoring: nearest-neighbour queries, symmetric Chamfer
 *        distance, rigid 2-D ICP alignment and improvement percentage.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "linksynth/geometry.hpp"

namespace linksynth {

/// Uniform-grid nearest-neighbour index over a fixed point set. Queries
/// return the exact minimum Euclidean distance; ties go to the lowest index.
class NearestNeighborIndex {
 public:
  explicit NearestNeighborIndex(std::span<const Vec2> pts) : pts_(pts.begin(), pts.end()) {
    if (pts_.empty()) throw std::invalid_argument("NearestNeighborIndex: empty point set");
    box_ = bounding_box(pts_);
    const double span = std::max({box_.width(), box_.height(), 1e-12});
    const double cells_per_side = std::max(1.0, std::ceil(std::sqrt(static_cast<double>(pts_.size()))));
    cell_ = span / cells_per_side;
    nx_ = std::max(1, static_cast<int>(std::floor(box_.width() / cell_)) + 1);
    ny_ = std::max(1, static_cast<int>(std::floor(box_.height() / cell_)) + 1);

    std::vector<int> counts(static_cast<std::size_t>(nx_ * ny_) + 1, 0);
    for (const auto &p : pts_) ++counts[static_cast<std::size_t>(cell_of(p)) + 1];
    for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
    start_ = counts;
    items_.resize(pts_.size());
    for (std::size_t i = 0; i < pts_.size(); ++i)
      items_[static_cast<std::size_t>(counts[static_cast<std::size_t>(cell_of(pts_[i]))]++)] = static_cast<int>(i);
  }

  struct Hit {
    std::size_t index;
    double distance;
  };

  Hit nearest(const Vec2 &q) const {
    const int cx = std::clamp(static_cast<int>(std::floor((q.x - box_.min.x) / cell_)), 0, nx_ - 1);
    const int cy = std::clamp(static_cast<int>(std::floor((q.y - box_.min.y) / cell_)), 0, ny_ - 1);
    double best_sq = std::numeric_limits<double>::infinity();
    int best = -1;
    for (int r = 0;; ++r) {
      const int x0 = cx - r, x1 = cx + r, y0 = cy - r, y1 = cy + r;
      for (int gy = std::max(y0, 0); gy <= std::min(y1, ny_ - 1); ++gy)
        for (int gx = std::max(x0, 0); gx <= std::min(x1, nx_ - 1); ++gx) {
          if (gx != x0 && gx != x1 && gy != y0 && gy != y1) continue;  // ring only
          const auto cell = static_cast<std::size_t>(gy * nx_ + gx);
          for (int k = start_[cell]; k < start_[cell + 1]; ++k) {
            const int idx = items_[static_cast<std::size_t>(k)];
            const Vec2 &p = pts_[static_cast<std::size_t>(idx)];
            const double dx = q.x - p.x, dy = q.y - p.y;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best_sq || (d2 == best_sq && idx < best)) {
              best_sq = d2;
              best = idx;
            }
          }
        }
      // Distance from q to the nearest point not yet covered by the block.
      double outside = std::numeric_limits<double>::infinity();
      if (x0 > 0) outside = std::min(outside, q.x - (box_.min.x + x0 * cell_));
      if (x1 < nx_ - 1) outside = std::min(outside, (box_.min.x + (x1 + 1) * cell_) - q.x);
      if (y0 > 0) outside = std::min(outside, q.y - (box_.min.y + y0 * cell_));
      if (y1 < ny_ - 1) outside = std::min(outside, (box_.min.y + (y1 + 1) * cell_) - q.y);
      if (std::isinf(outside)) break;
      if (best >= 0 && outside > 0.0 && best_sq < outside * outside) break;
    }
    return {static_cast<std::size_t>(best), std::sqrt(best_sq)};
  }

  std::size_t size() const { return pts_.size(); }

 private:
  int cell_of(const Vec2 &p) const {
    const int gx = std::clamp(static_cast<int>(std::floor((p.x - box_.min.x) / cell_)), 0, nx_ - 1);
    const int gy = std::clamp(static_cast<int>(std::floor((p.y - box_.min.y) / cell_)), 0, ny_ - 1);
    return gy * nx_ + gx;
  }

  std::vector<Vec2> pts_;
  BoundingBox box_{};
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<int> start_;
  std::vector<int> items_;
};

/// Symmetric mean nearest-neighbour distance:
/// 0.5 * (mean_a min_b |a-b| + mean_b min_a |a-b|).
inline double chamfer(std::span<const Vec2> a, std::span<const Vec2> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("chamfer: empty point set");
  const NearestNeighborIndex ia(a), ib(b);
  double sa = 0.0, sb = 0.0;
  for (const auto &p : a) sa += ib.nearest(p).distance;
  for (const auto &p : b) sb += ia.nearest(p).distance;
  return 0.5 * (sa / static_cast<double>(a.size()) + sb / static_cast<double>(b.size()));
}

struct RigidTransform2D {
  double rotation = 0.0;  // radians, (-pi, pi]
  Vec2 translation{};

  Vec2 apply(const Vec2 &p) const {
    const double c = std::cos(rotation), s = std::sin(rotation);
    return Vec2{c * p.x - s * p.y, s * p.x + c * p.y} + translation;
  }
  PointSet apply(std::span<const Vec2> pts) const {
    PointSet out;
    out.reserve(pts.size());
    for (const auto &p : pts) out.push_back(apply(p));
    return out;
  }
  RigidTransform2D inverse() const {
    RigidTransform2D inv{wrap_angle(-rotation), {}};
    inv.translation = -RigidTransform2D{inv.rotation, {}}.apply(translation);
    return inv;
  }
  /// (this ∘ other)(p) = this(other(p))
  RigidTransform2D compose(const RigidTransform2D &other) const {
    return {wrap_angle(rotation + other.rotation), apply(other.translation)};
  }
};

/// Closed-form least-squares rotation + translation taking src[i] onto dst[i]
/// (Kabsch via SVD of the 2x2 cross-covariance).
inline RigidTransform2D fit_rigid(std::span<const Vec2> src, std::span<const Vec2> dst) {
  if (src.size() != dst.size() || src.empty()) throw std::invalid_argument("fit_rigid: size mismatch");
  const Vec2 cs = centroid(src), cd = centroid(dst);
  Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Eigen::Vector2d a(src[i].x - cs.x, src[i].y - cs.y);
    const Eigen::Vector2d b(dst[i].x - cd.x, dst[i].y - cd.y);
    h += a * b.transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix2d v = svd.matrixV();
  Eigen::Matrix2d r = v * svd.matrixU().transpose();
  if (r.determinant() < 0.0) {
    v.col(1) *= -1.0;
    r = v * svd.matrixU().transpose();
  }
  RigidTransform2D t{wrap_angle(std::atan2(r(1, 0), r(0, 0))), {}};
  t.translation = cd - RigidTransform2D{t.rotation, {}}.apply(cs);
  return t;
}

struct IcpOptions {
  int max_iter = 50;
  double tol = 1e-9;
  /// Also start from the principal-axis alignments (angle and angle + pi)
  /// and keep whichever start converges lowest.
  bool principal_axis_starts = true;
};

struct IcpResult {
  RigidTransform2D transform;
  PointSet aligned;
  int iterations = 0;
  /// Symmetric Chamfer distance after each accepted iteration (entry 0 is
  /// the starting pose). A step that would raise it is rejected and ends
  /// the iteration, so the aligned score never exceeds the starting one.
  std::vector<double> error_history;
  double error() const { return error_history.back(); }
};

namespace detail {

/// Symmetric Chamfer with a prebuilt index over the fixed target.
inline double chamfer_to(std::span<const Vec2> moved, std::span<const Vec2> target, const NearestNeighborIndex &tidx) {
  const NearestNeighborIndex midx(moved);
  double sa = 0.0, sb = 0.0;
  for (const auto &p : moved) sa += tidx.nearest(p).distance;
  for (const auto &p : target) sb += midx.nearest(p).distance;
  return 0.5 * (sa / static_cast<double>(moved.size()) + sb / static_cast<double>(target.size()));
}

inline double principal_angle(std::span<const Vec2> pts) {
  const Vec2 c = centroid(pts);
  double sxx = 0, syy = 0, sxy = 0;
  for (const auto &p : pts) {
    const Vec2 d = p - c;
    sxx += d.x * d.x;
    syy += d.y * d.y;
    sxy += d.x * d.y;
  }
  return 0.5 * std::atan2(2.0 * sxy, sxx - syy);
}

inline IcpResult icp_from(std::span<const Vec2> source, std::span<const Vec2> target, const NearestNeighborIndex &idx,
                          RigidTransform2D start, const IcpOptions &opt) {
  IcpResult res;
  res.transform = start;
  PointSet moved = start.apply(source);
  double err = chamfer_to(moved, target, idx);
  res.error_history.push_back(err);
  PointSet matches(source.size());
  for (int it = 0; it < opt.max_iter && err > 0.0; ++it) {
    for (std::size_t i = 0; i < moved.size(); ++i) matches[i] = target[idx.nearest(moved[i]).index];
    const auto next = fit_rigid(source, matches);
    PointSet next_moved = next.apply(source);
    const double next_err = chamfer_to(next_moved, target, idx);
    if (!(next_err <= err)) break;
    const double gain = err - next_err;
    res.transform = next;
    moved = std::move(next_moved);
    err = next_err;
    res.error_history.push_back(err);
    ++res.iterations;
    if (gain < opt.tol) break;
  }
  res.aligned = std::move(moved);
  return res;
}

}  // namespace detail

/// Point-to-point ICP aligning `source` onto `target` (rigid, no scale).
/// Throws std::invalid_argument when the source points all coincide.
inline IcpResult icp_align(std::span<const Vec2> source, std::span<const Vec2> target, const IcpOptions &opt = {}) {
  if (source.empty() || target.empty()) throw std::invalid_argument("icp_align: empty point set");
  const auto sb = bounding_box(source);
  if (!(std::max(sb.width(), sb.height()) > 0.0)) throw std::invalid_argument("icp_align: degenerate source");

  const NearestNeighborIndex idx(target);
  IcpResult best = detail::icp_from(source, target, idx, RigidTransform2D{}, opt);
  if (opt.principal_axis_starts && best.error() > 0.0) {
    const Vec2 cs = centroid(source), ct = centroid(target);
    const double base = detail::principal_angle(target) - detail::principal_angle(source);
    for (double extra : {0.0, std::numbers::pi}) {
      RigidTransform2D start{wrap_angle(base + extra), {}};
      start.translation = ct - start.apply(cs);
      auto cand = detail::icp_from(source, target, idx, start, opt);
      if (cand.error() < best.error()) best = std::move(cand);
    }
  }
  return best;
}

struct Score {
  double chamfer = 0.0;
  RigidTransform2D transform;
  int iterations_used = 0;
};

/// Aligns `candidate` onto `target` with ICP, then measures Chamfer distance.
inline Score score_trajectory(std::span<const Vec2> candidate, std::span<const Vec2> target,
                              const IcpOptions &opt = {}) {
  const auto icp = icp_align(candidate, target, opt);
  return {chamfer(icp.aligned, target), icp.transform, icp.iterations};
}

/// 100 * (initial - final) / initial; negative when the score got worse.
inline double improvement_pct(double cd_initial, double cd_final) {
  if (!(cd_initial > 0.0)) throw std::invalid_argument("improvement_pct: initial distance must be > 0");
  return 100.0 * (cd_initial - cd_final) / cd_initial;
}

}  // namespace linksynth
