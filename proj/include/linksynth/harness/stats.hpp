#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "linksynth/format.hpp"

namespace linksynth::harness {

struct MeanSe {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double se = std::numeric_limits<double>::quiet_NaN();
  std::size_t n = 0;
};

/// Mean and standard error sd / sqrt(n) with the n - 1 sample deviation;
/// a single value has SE 0, an empty set yields NaNs.
inline MeanSe mean_se(const std::vector<double> &v) {
  MeanSe r;
  r.n = v.size();
  if (v.empty()) return r;
  double s = 0.0;
  for (double x : v) s += x;
  r.mean = s / static_cast<double>(v.size());
  if (v.size() == 1) {
    r.se = 0.0;
    return r;
  }
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  r.se = sd / std::sqrt(static_cast<double>(v.size()));
  return r;
}

inline std::string format_mean_se(const MeanSe &m, int digits = 3) {
  if (m.n == 0) return "n/a";
  return fixed(m.mean, digits) + " ± " + fixed(m.se, digits);
}

}  // namespace linksynth::harness
