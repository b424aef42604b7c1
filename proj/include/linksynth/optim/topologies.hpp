#pragma once

// Canonical single-crank templates sized for targets normalised into a
// 10 x 10 box. Each comes with the parameter space the baseline searches.

#include <stdexcept>
#include <string>
#include <vector>

#include "linksynth/optim/param_space.hpp"

namespace linksynth::optim {

struct TopologyTemplate {
  std::string name;
  Linkage linkage;
  ParamSpace space;
};

namespace detail {

/// Lengths within +-50% and the listed pivot coordinates within +-span.
inline ParamSpace template_space(const Linkage &lk, const std::vector<std::string> &pivot_fields, double span) {
  ParamSpace s = length_space(lk, 0.5);
  for (const auto &id : pivot_fields) {
    const double v = field_value(lk, id);
    s.params.push_back({id, {v - span, v + span}});
  }
  return s;
}

}  // namespace detail

/// Crank-rocker four-bar (ground 8, crank 3, coupler 7, rocker 6) with a
/// coupler point E off the B-C bar.
inline TopologyTemplate four_bar_template() {
  Linkage lk;
  lk.name = "four_bar";
  lk.joints = {make_fixed("A", 0, 0),          make_fixed("D", 8, 0),           make_crank("B", "A", 3),
               make_revolute("C", "B", "D", 7, 6), make_revolute("E", "B", "C", 5, 5)};
  lk.target = "E";
  lk.intent = "four-bar coupler curve";
  return {"four_bar", lk, detail::template_space(lk, {"D.x"}, 2.0)};
}

/// Watt II chain: ground ternary {A, D, G}, rocker ternary {C, D, E}, and a
/// second dyad E-F-G; the end-effector is F.
inline TopologyTemplate watt_template() {
  Linkage lk;
  lk.name = "watt_six_bar";
  lk.joints = {make_fixed("A", 0, 0),
               make_fixed("D", 8, 0),
               make_fixed("G", 12, 6),
               make_crank("B", "A", 3),
               make_revolute("C", "B", "D", 7, 6),
               make_revolute("E", "C", "D", 4, 5),
               make_revolute("F", "E", "G", 6, 5)};
  lk.target = "F";
  lk.intent = "Watt six-bar";
  return {"watt_six_bar", lk, detail::template_space(lk, {"G.x", "G.y"}, 2.0)};
}

/// Stephenson III chain: the second dyad hangs off coupler point E and a
/// ground pivot G; the end-effector is F.
inline TopologyTemplate stephenson_template() {
  Linkage lk;
  lk.name = "stephenson_six_bar";
  lk.joints = {make_fixed("A", 0, 0),
               make_fixed("D", 8, 0),
               make_fixed("G", 6, 10),
               make_crank("B", "A", 3),
               make_revolute("C", "B", "D", 7, 6),
               make_revolute("E", "B", "C", 5, 5),
               make_revolute("F", "E", "G", 6, 7)};
  lk.target = "F";
  lk.intent = "Stephenson six-bar";
  return {"stephenson_six_bar", lk, detail::template_space(lk, {"G.x", "G.y"}, 2.0)};
}

/// Throws std::invalid_argument for bar counts other than 4 and 6.
inline std::vector<TopologyTemplate> enumerate_topologies(int n_bars) {
  if (n_bars == 4) return {four_bar_template()};
  if (n_bars == 6) return {watt_template(), stephenson_template()};
  throw std::invalid_argument("enumerate_topologies: unsupported bar count " + std::to_string(n_bars) +
                              " (expected 4 or 6)");
}

}  // namespace linksynth::optim
