#pragma once

// Mechanism figures: thin outlines for the rigid links at one phase, thick
// coloured joint trajectories, the end-effector thickest, target in black.

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "linksynth/format.hpp"
#include "linksynth/linkage.hpp"
#include "linksynth/metrics.hpp"

namespace linksynth::harness {

struct SvgOptions {
  int width = 640;
  int height = 640;
  double margin = 24.0;
  std::size_t phase_step = 0;  // sample index used for the bar outline
};

namespace detail {

inline constexpr const char *kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                           "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

class Canvas {
 public:
  Canvas(const BoundingBox &bb, const SvgOptions &opt) : opt_(opt), bb_(bb) {
    const double w = std::max(bb.max.x - bb.min.x, 1e-9), h = std::max(bb.max.y - bb.min.y, 1e-9);
    scale_ = std::min((opt.width - 2 * opt.margin) / w, (opt.height - 2 * opt.margin) / h);
  }
  std::string point(const Vec2 &p) const {
    const double x = opt_.margin + (p.x - bb_.min.x) * scale_;
    const double y = opt_.height - opt_.margin - (p.y - bb_.min.y) * scale_;
    return fixed(x, 4) + "," + fixed(y, 4);
  }
  template <class Range>
  std::string points(const Range &pts) const {
    std::string s;
    for (const auto &p : pts) {
      if (!s.empty()) s += ' ';
      s += point(p);
    }
    return s;
  }

 private:
  SvgOptions opt_;
  BoundingBox bb_;
  double scale_ = 1.0;
};

}  // namespace detail

/// Throws std::invalid_argument for an unbuildable simulation.
inline std::string render_mechanism(const Linkage &lk, const SimulationResult &sim,
                                    const std::optional<Trajectory> &target = std::nullopt,
                                    const SvgOptions &opt = {}) {
  if (!sim.buildable) throw std::invalid_argument("render_mechanism: simulation is not buildable");
  std::vector<Vec2> all;
  for (const auto &j : lk.joints) {
    const auto &t = sim.trajectory(j.id);
    all.insert(all.end(), t.samples.begin(), t.samples.end());
  }
  if (target) all.insert(all.end(), target->samples.begin(), target->samples.end());
  const detail::Canvas cv(bounding_box(all), opt);
  auto pos = [&](const std::string &id) {
    const auto &s = sim.trajectory(id).samples;
    return s[std::min(opt.phase_step, s.size() - 1)];
  };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
     << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n"
     << "<title>" << (lk.name.empty() ? "mechanism" : lk.name) << "</title>\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  if (target)
    os << "<polyline class=\"target\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\" stroke-dasharray=\"6 3\" points=\""
       << cv.points(target->samples) << "\"/>\n";

  std::size_t colour = 0;
  for (const auto &j : lk.joints) {
    if (j.is_fixed()) continue;
    const bool ee = j.id == lk.target;
    const auto &s = sim.trajectory(j.id).samples;
    os << "<polyline class=\"trajectory" << (ee ? " end-effector" : "") << "\" data-joint=\"" << j.id
       << "\" fill=\"none\" stroke=\"" << detail::kPalette[colour++ % std::size(detail::kPalette)]
       << "\" stroke-width=\"" << (ee ? "5" : "3") << "\" stroke-linejoin=\"round\" points=\"" << cv.points(s)
       << "\"/>\n";
  }

  // Rigid bodies in joint order; ternary plates close into polygons.
  for (const auto &body : extract_link_graph(lk).links) {
    std::vector<Vec2> pts;
    for (const auto &j : lk.joints)
      if (body.count(j.id)) pts.push_back(pos(j.id));
    if (pts.size() < 2) continue;
    const char *tag = pts.size() == 2 ? "polyline" : "polygon";
    os << '<' << tag << " class=\"bar\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\" points=\"" << cv.points(pts)
       << "\"/>\n";
  }
  for (const auto &j : lk.joints) {
    os << "<circle class=\"" << (j.is_fixed() ? "pivot" : "pin") << "\" cx=\"";
    const auto xy = cv.point(pos(j.id));
    const auto comma = xy.find(',');
    os << xy.substr(0, comma) << "\" cy=\"" << xy.substr(comma + 1) << "\" r=\"" << (j.is_fixed() ? "4" : "2.5")
       << "\" fill=\"" << (j.is_fixed() ? "#444444" : "#ffffff") << "\" stroke=\"#444444\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline void write_mechanism_svg(const std::string &path, const Linkage &lk, const SimulationResult &sim,
                                const std::optional<Trajectory> &target = std::nullopt) {
  const auto svg = render_mechanism(lk, sim, target);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << svg;
}

}  // namespace linksynth::harness
