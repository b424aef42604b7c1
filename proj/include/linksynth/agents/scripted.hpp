#pragma once

// Deterministic offline backend: an ordered rule list keyed on (role, text
// pattern). A rule answers with canned text or a generator; generators see
// the request and a seeded random stream, so a backend built with the same
// seed and rules replays identically.

#include <functional>
#include <mutex>
#include <regex>
#include <string>
#include <vector>

#include "linksynth/agents/backend.hpp"
#include "linksynth/agents/edits.hpp"
#include "linksynth/agents/report.hpp"
#include "linksynth/format.hpp"
#include "linksynth/linkage_json.hpp"
#include "linksynth/optim/topologies.hpp"

namespace linksynth::agents {

/// Text between "### <title>" and the next "### " heading (trimmed), or empty.
inline std::string section(std::string_view text, std::string_view title) {
  const std::string head = "### " + std::string(title) + "\n";
  auto pos = text.find(head);
  if (pos == std::string_view::npos) return {};
  pos += head.size();
  auto end = text.find("\n### ", pos);
  auto body = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
  while (!body.empty() && (body.back() == '\n' || body.back() == ' ')) body.remove_suffix(1);
  return std::string(body);
}

struct ScriptedRule {
  using Generator = std::function<std::string(const AgentRequest &, optim::Rng &)>;
  Role role;
  std::string pattern;  // substring of prompt + context; empty matches anything
  Generator respond;
  int max_uses = -1;    // -1: unlimited

  static ScriptedRule text(Role role, std::string pattern, std::string response, int max_uses = -1) {
    return {role, std::move(pattern), [r = std::move(response)](const AgentRequest &, optim::Rng &) { return r; },
            max_uses};
  }
};

class ScriptedBackend final : public AgentBackend {
 public:
  ScriptedBackend(std::uint64_t seed, std::vector<ScriptedRule> rules, std::string name = "scripted")
      : rng_(seed), rules_(std::move(rules)), uses_(rules_.size(), 0), name_(std::move(name)) {}

  std::string complete(const AgentRequest &req) override {
    std::lock_guard lock(mu_);
    ++calls_;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      const auto &r = rules_[i];
      if (r.role != req.role) continue;
      if (r.max_uses >= 0 && uses_[i] >= r.max_uses) continue;
      if (!r.pattern.empty() && req.prompt.find(r.pattern) == std::string::npos &&
          req.context.find(r.pattern) == std::string::npos)
        continue;
      ++uses_[i];
      return r.respond(req, rng_);
    }
    return "no scripted response for role " + std::string(role_name(req.role));
  }
  std::string name() const override { return name_; }
  double temperature() const override { return 0.0; }
  std::size_t calls() const {
    std::lock_guard lock(mu_);
    return calls_;
  }

 private:
  mutable std::mutex mu_;
  optim::Rng rng_;
  std::vector<ScriptedRule> rules_;
  std::vector<int> uses_;
  std::string name_;
  std::size_t calls_ = 0;
};

// ---- default rule set ------------------------------------------------------

/// Numbers read back from a critic report.
struct ReportFacts {
  int dof = 1;
  int links = 0;
  bool buildable = true;
  std::string failing_joint;  // from the first diagnostic, if any
  int f_windows = 0;          // eventually-windows in the temporal spec
  bool has_spec = false;
};

inline ReportFacts read_report(const std::string &report) {
  ReportFacts f;
  std::smatch m;
  if (std::regex_search(report, m, std::regex(R"(dof=(-?\d+))"))) f.dof = std::stoi(m[1]);
  if (std::regex_search(report, m, std::regex(R"(links=(\d+))"))) f.links = std::stoi(m[1]);
  if (std::regex_search(report, m, std::regex(R"(buildable=(yes|no))"))) f.buildable = m[1] == "yes";
  if (std::regex_search(report, m, std::regex(R"(\[\w+\] joint (\w+))"))) f.failing_joint = m[1];
  for (std::size_t p = report.find("F_["); p != std::string::npos; p = report.find("F_[", p + 1)) ++f.f_windows;
  f.has_spec = report.find("satisfied_by_candidate=") != std::string::npos;
  return f;
}

/// Rule-of-thumb diagnosis the scripted planner (and a planner-less scripted
/// refiner) applies to a critic report.
inline RefinementPlan scripted_diagnosis(const std::string &report) {
  const auto f = read_report(report);
  RefinementPlan p;
  if (f.dof != 1) {
    p.failure_mode = FailureMode::Overconstraint;
    p.structural_cause = "Mobility is " + std::to_string(f.dof) + " with " + std::to_string(f.links) +
                         " links, so a redundant input or link breaks single-DOF motion.";
    p.suggested_action = "Remove a redundant link: turn the extra driven joints into revolute dyads to restore one DOF.";
  } else if (!f.buildable) {
    p.failure_mode = FailureMode::Overconstraint;
    p.structural_cause = "Joint " + (f.failing_joint.empty() ? std::string("?") : f.failing_joint) +
                         " has incompatible distance constraints and the loop cannot close.";
    p.suggested_action = "Remove a redundant link constraint at that joint by redefining it as a circle intersection "
                         "with compatible lengths.";
  } else if (f.links <= 4 && f.f_windows >= 2) {
    p.failure_mode = FailureMode::Underconstraint;
    p.structural_cause = "A single four-bar loop cannot produce the dense sequence of shape events in the specification.";
    p.suggested_action = "Add a loop: attach a dyad to the end-effector and a new ground pivot.";
  } else {
    p.failure_mode = FailureMode::KinematicInaccuracy;
    p.structural_cause = "The topology is sound but the end-effector path deviates from the target.";
    p.suggested_action = "Adjust link lengths near the end-effector.";
  }
  return p;
}

inline std::string fenced(const Linkage &lk) { return "```json\n" + dump_linkage(lk, 2) + "\n```\n"; }

/// Template proposal with every length jittered by up to 15%.
inline std::string scripted_topology(const AgentRequest &req, optim::Rng &rng) {
  const bool six = req.prompt.find("number of bars: 6") != std::string::npos;
  auto lk = six ? optim::watt_template().linkage : optim::four_bar_template().linkage;
  for (int attempt = 0; attempt < 20; ++attempt) {
    auto cand = lk;
    for (auto &j : cand.joints) {
      auto jitter = [&] { return rng.uniform(0.85, 1.15); };
      if (auto *c = std::get_if<CrankJoint>(&j.kind)) c->radius *= jitter();
      if (auto *r = std::get_if<RevoluteJoint>(&j.kind)) {
        r->dist0 *= jitter();
        r->dist1 *= jitter();
      }
    }
    if (simulate(cand).buildable) {
      lk = cand;
      break;
    }
  }
  lk.intent = section(req.context, "Intent");
  return "Proposed mechanism:\n" + fenced(lk) + "Rationale: a crank-rocker with a coupler point is the simplest loop able to "
         "trace a closed or near-straight path.\n";
}

inline std::string scripted_critic(const AgentRequest &req, optim::Rng &) {
  const auto f = read_report(req.context);
  if (f.dof != 1) return "The mechanism is not single-input: its mobility differs from one, so the motion is undetermined.";
  if (!f.buildable) return "The mechanism locks up during the cycle because a loop cannot close.";
  return "The mechanism runs through the full cycle; the residual error is geometric.";
}

inline std::string scripted_planner(const AgentRequest &req, optim::Rng &) {
  const auto p = scripted_diagnosis(req.context);
  return "Failure Mode: " + failure_mode_name(p.failure_mode) + "\nStructural Cause: " + p.structural_cause +
         "\nSuggested Action: " + p.suggested_action + "\n";
}

/// Applies the edit for the plan's failure mode (or, without a plan, for
/// the scripted diagnosis of the report) to the "Linkage" section.
inline std::string scripted_refiner(const AgentRequest &req, optim::Rng &rng) {
  Linkage lk;
  try {
    lk = parse_linkage(extract_json_object(section(req.context, "Linkage")));
  } catch (const ParseError &e) {
    return std::string("cannot read the current linkage: ") + e.what();
  }
  const auto plan_text = section(req.context, "Plan");
  FailureMode mode;
  try {
    mode = plan_text.empty() ? scripted_diagnosis(section(req.context, "Critic report")).failure_mode
                             : parse_plan(plan_text, FailureModeTable::standard()).failure_mode;
  } catch (const PlanParseError &) {
    mode = FailureMode::KinematicInaccuracy;
  }
  std::optional<Linkage> out;
  switch (mode) {
    case FailureMode::Overconstraint:
      out = lk.crank_count() > 1 ? edits::remove_redundant_cranks(lk) : edits::repair_infeasible(lk);
      break;
    case FailureMode::Underconstraint: out = edits::add_loop(lk, rng.index(4)); break;
    default: break;
  }
  if (!out) out = edits::adjust_lengths(lk, rng);
  if (!out) out = lk;
  return "Edited mechanism:\n" + fenced(*out);
}

inline std::vector<ScriptedRule> default_rules() {
  return {{Role::Topology, "", scripted_topology, -1},
          {Role::Critic, "", scripted_critic, -1},
          {Role::Planner, "", scripted_planner, -1},
          {Role::Refiner, "", scripted_refiner, -1}};
}

/// Ellipse case: the first proposal is a 6-link / 6-joint hexagon
/// driven by three cranks (mobility 3); everything after follows the defaults.
inline std::vector<ScriptedRule> ellipse_case_rules() {
  Linkage hex;
  hex.name = "hexagon";
  hex.joints = {make_fixed("A", 0, 0),           make_fixed("F", 4, 0),           make_crank("B", "A", 1, 1.2),
                make_crank("C", "B", 1.5, 0.4), make_crank("E", "F", 1, 1.9), make_revolute("D", "C", "E", 2, 2)};
  hex.target = "D";
  auto rules = default_rules();
  rules.insert(rules.begin(), ScriptedRule::text(Role::Topology, "", "Proposed mechanism:\n" + fenced(hex), 1));
  return rules;
}

}  // namespace linksynth::agents
