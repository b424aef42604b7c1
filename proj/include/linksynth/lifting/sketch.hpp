#pragma once

#include <optional>
#include <set>
#include <vector>

#include "linksynth/lifting/events.hpp"

namespace linksynth::lifting {

struct FeaturePrimitive {
  int curv = 0;                  // -1, 0, +1
  std::pair<int, int> mono{1, 1};  // majority (m_x, m_y) over the interval
  std::optional<double> len;     // arc length; nullopt is the wildcard
  std::set<EventKind> ev;
  std::size_t start = 0;  // first sample
  std::size_t end = 0;    // one past the last sample

  /// Qualitative equality: everything but the numeric length.
  bool same_shape(const FeaturePrimitive &o) const { return curv == o.curv && mono == o.mono && ev == o.ev; }
};

namespace detail {

inline int majority_sign(const std::vector<int> &s, std::size_t b, std::size_t e) {
  int pos = 0, neg = 0;
  for (std::size_t i = b; i < e; ++i) {
    if (s[i] > 0) ++pos;
    else if (s[i] < 0) ++neg;
  }
  if (pos == 0 && neg == 0) return 0;
  return neg > pos ? -1 : 1;
}

}  // namespace detail

/// One primitive per maximal run of constant hysteretic curvature sign.
/// Each carries the majority monotonicity pair, its arc length (up to the
/// next primitive's first sample) and the kinds of events stamped inside.
inline std::vector<FeaturePrimitive> compose_sketch(const Trajectory &traj, const QualSignature &sig,
                                                    const std::vector<Event> &events) {
  const std::size_t n = sig.s_kappa.size();
  if (n != traj.size() || sig.m_x.size() != n || sig.m_y.size() != n)
    throw std::invalid_argument("compose_sketch: signature does not match trace");
  std::vector<FeaturePrimitive> out;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sig.s_kappa[j] == sig.s_kappa[i]) ++j;
    FeaturePrimitive p;
    p.curv = sig.s_kappa[i];
    p.mono = {detail::majority_sign(sig.m_x, i, j), detail::majority_sign(sig.m_y, i, j)};
    p.len = arc_length(traj.samples, i, std::min(j, n - 1));
    p.start = i;
    p.end = j;
    for (const auto &e : events)
      if (e.sample >= i && e.sample < j) p.ev.insert(e.kind);
    out.push_back(std::move(p));
    i = j;
  }
  return out;
}

}  // namespace linksynth::lifting
