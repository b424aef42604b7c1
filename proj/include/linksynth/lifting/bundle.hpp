#pragma once

// The lifting operator: simulation result + target -> representation bundle.

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "linksynth/format.hpp"
#include "linksynth/lifting/segmentation.hpp"
#include "linksynth/lifting/sketch.hpp"
#include "linksynth/lifting/spec.hpp"
#include "linksynth/linkage.hpp"

namespace linksynth::lifting {

/// Structural / mechanical facts, copied from the simulator verbatim.
struct StructuralInfo {
  int dof = 0;
  int links = 0;   // rigid bodies including ground
  int joints = 0;  // pin joints (a pin shared by k bodies counts k - 1)
  bool buildable = false;
  std::vector<Diagnostic> diagnostics;
};

struct RepresentationBundle {
  // tokens: motion labels (discrete segmental) and qualitative signature
  std::optional<Segmentation> segmentation;
  std::optional<QualSignature> signature;
  // sketches
  std::vector<FeaturePrimitive> sketch;
  StructuralInfo structural;
  std::vector<Event> events;
  std::optional<Formula> spec;
  std::optional<bool> spec_satisfied;  // spec checked on the ICP-aligned candidate
  std::vector<Region> regions;
  std::vector<Guard> guards;
};

inline StructuralInfo structural_info(const Linkage &lk, const SimulationResult &sim) {
  StructuralInfo s;
  s.dof = sim.dof;
  s.buildable = sim.buildable;
  s.diagnostics = sim.diagnostics;
  if (structural_diagnostics(lk).empty()) {
    const auto c = count_links_joints(extract_link_graph(lk));
    s.links = c.links;
    s.joints = c.joints;
  }
  return s;
}

/// Lifts the end-effector trace of `lk`. Candidate geometry is first rigidly
/// aligned onto the target (ICP) so that target-frame regions and guards
/// apply. An unbuildable simulation yields a structure-only bundle.
inline RepresentationBundle lift(const Linkage &lk, const SimulationResult &sim, const Trajectory &target,
                                 const LiftingConfig &cfg = {}) {
  RepresentationBundle b;
  b.structural = structural_info(lk, sim);
  if (!sim.buildable) return b;
  auto it = sim.per_joint.find(lk.target);
  if (it == sim.per_joint.end() || it->second.size() < 3) return b;

  Trajectory trace = it->second;
  try {
    trace.samples = icp_align(trace.samples, target.samples).aligned;
  } catch (const std::invalid_argument &) {
    // degenerate (stationary) end-effector: keep it where it is
  }

  if (cfg.dr) b.segmentation = segment_dr(trace, cfg);
  if (cfg.cl) {
    b.regions = {containment_region(target, cfg.region_padding)};
    b.guards = {principal_guard(target)};
    const auto k = proxies(trace, cfg.dt, cfg.singular_speed);
    b.signature = qual_signature(k, cfg);
    b.events = detect_events(trace, k, b.regions, b.guards, cfg);
    b.sketch = compose_sketch(trace, *b.signature, b.events);
    b.spec = synthesize_spec(target, b.regions, b.guards, cfg);
    b.spec_satisfied = evaluate(*b.spec, trace, b.events, b.regions, b.guards, cfg);
  }
  return b;
}

// ---- serialisation ----------------------------------------------------------

inline std::string sign_text(int s) { return s > 0 ? "+1" : s < 0 ? "-1" : "0"; }

inline std::string primitive_text(const FeaturePrimitive &p) {
  std::string ev;
  for (auto k : p.ev) ev += (ev.empty() ? "" : ",") + std::string(event_name(k));
  return "<curv=" + sign_text(p.curv) + ", mono=(" + sign_text(p.mono.first) + "," + sign_text(p.mono.second) +
         "), len=" + (p.len ? fixed(*p.len, 3) : std::string("*")) + ", ev={" + ev + "}>";
}

/// Line-oriented text consumed by the agents.
inline std::string to_text(const RepresentationBundle &b) {
  std::ostringstream os;
  const auto &s = b.structural;
  os << "[Structure] dof=" << s.dof << " links=" << s.links << " joints=" << s.joints
     << " buildable=" << (s.buildable ? "yes" : "no") << "\n";
  os << "[Diagnostics]";
  if (s.diagnostics.empty()) os << " none";
  for (const auto &d : s.diagnostics) os << "\n  " << d.to_string();
  os << "\n";

  if (b.segmentation) {
    const auto &seg = *b.segmentation;
    os << "[Tokens] segments=" << seg.segments.size() << " mean_run=" << fixed(seg.summary.mean_run_length, 3)
       << " entropy=" << fixed(seg.summary.entropy_bits, 3) << "\n  ";
    for (std::size_t i = 0; i < seg.segments.size(); ++i) {
      const auto &g = seg.segments[i];
      os << (i ? " " : "") << label_name(g.label) << "[" << g.start << "," << g.end << ")";
    }
    os << "\n";
  }
  if (b.signature) {
    os << "[Sketch] primitives=" << b.sketch.size() << "\n";
    for (const auto &p : b.sketch) os << "  " << primitive_text(p) << "\n";
    os << "[Events]";
    if (b.events.empty()) os << " none";
    for (const auto &e : b.events) {
      os << " " << event_name(e.kind);
      if (!e.payload.empty()) os << "(" << e.payload << ")";
      os << "@" << format_time(e.t);
    }
    os << "\n";
  }
  os << "[Spec] ";
  if (b.spec) {
    os << to_text(*b.spec) << "\n  satisfied_by_candidate=" << (b.spec_satisfied.value_or(false) ? "yes" : "no");
  } else if (!s.buildable) {
    os << "absent (mechanism unbuildable, no trajectory to lift)";
  } else {
    os << "absent (compositional lifting disabled)";
  }
  os << "\n";
  return os.str();
}

inline nlohmann::json to_json(const RepresentationBundle &b) {
  nlohmann::json o;
  const auto &s = b.structural;
  o["structural"] = {{"dof", s.dof}, {"links", s.links}, {"joints", s.joints}, {"buildable", s.buildable}};
  auto diags = nlohmann::json::array();
  for (const auto &d : s.diagnostics) diags.push_back(d.to_string());
  o["structural"]["diagnostics"] = diags;
  if (b.segmentation) {
    auto segs = nlohmann::json::array();
    for (const auto &g : b.segmentation->segments)
      segs.push_back({{"label", label_name(g.label)}, {"start", g.start}, {"end", g.end},
                      {"heading_bin", g.dominant_heading}, {"curvature_sign", g.dominant_curvature_sign}});
    o["segments"] = segs;
    o["entropy_bits"] = b.segmentation->summary.entropy_bits;
  }
  if (b.signature) {
    auto prims = nlohmann::json::array();
    for (const auto &p : b.sketch) {
      nlohmann::json j{{"curv", p.curv}, {"mono", {p.mono.first, p.mono.second}}, {"start", p.start}, {"end", p.end}};
      j["len"] = p.len ? nlohmann::json(*p.len) : nlohmann::json("*");
      j["ev"] = nlohmann::json::array();
      for (auto k : p.ev) j["ev"].push_back(event_name(k));
      prims.push_back(j);
    }
    o["sketch"] = prims;
    auto evs = nlohmann::json::array();
    for (const auto &e : b.events) evs.push_back({{"kind", event_name(e.kind)}, {"t", e.t}, {"payload", e.payload}});
    o["events"] = evs;
  }
  if (b.spec) {
    o["spec"] = to_text(*b.spec);
    o["spec_tree"] = to_json(*b.spec);
    o["spec_satisfied"] = b.spec_satisfied.value_or(false);
  } else {
    o["spec"] = nullptr;
  }
  return o;
}

}  // namespace linksynth::lifting
