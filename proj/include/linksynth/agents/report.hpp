#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace linksynth::agents {

enum class FailureMode { Overconstraint, Underconstraint, KinematicInaccuracy, PathDeviation, PathMisalignment, None };

inline std::string failure_mode_name(FailureMode m) {
  switch (m) {
    case FailureMode::Overconstraint: return "Overconstraint";
    case FailureMode::Underconstraint: return "Underconstraint";
    case FailureMode::KinematicInaccuracy: return "KinematicInaccuracy";
    case FailureMode::PathDeviation: return "PathDeviation";
    case FailureMode::PathMisalignment: return "PathMisalignment";
    case FailureMode::None: return "None";
  }
  return "?";
}

struct PlanParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string squash(std::string_view s) {
  std::string out;
  for (unsigned char c : s)
    if (std::isalnum(c)) out += static_cast<char>(std::tolower(c));
  return out;
}

}  // namespace detail

/// Case, spacing, underscores and markup are ignored ("path deviation",
/// "PATH_DEVIATION", "**PathDeviation**"); anything else is an error.
inline FailureMode parse_failure_mode(std::string_view text) {
  const auto s = detail::squash(text);
  static const std::map<std::string, FailureMode> modes{
      {"overconstraint", FailureMode::Overconstraint},
      {"overconstrained", FailureMode::Overconstraint},
      {"underconstraint", FailureMode::Underconstraint},
      {"underconstrained", FailureMode::Underconstraint},
      {"kinematicinaccuracy", FailureMode::KinematicInaccuracy},
      {"pathdeviation", FailureMode::PathDeviation},
      {"pathmisalignment", FailureMode::PathMisalignment},
      {"none", FailureMode::None}};
  auto it = modes.find(s);
  if (it == modes.end()) throw PlanParseError("unknown failure mode '" + std::string(text) + "'");
  return it->second;
}

struct TableEntry {
  std::string action;                 // canonical corrective action
  std::vector<std::string> keywords;  // any of these marks an action as in-family
};

/// Failure mode -> canonical corrective action.
class FailureModeTable {
 public:
  static FailureModeTable standard() {
    FailureModeTable t;
    t.entries_[FailureMode::Overconstraint] = {"remove a redundant link", {"remove", "redundant", "delete", "drop"}};
    t.entries_[FailureMode::Underconstraint] = {"add a loop", {"add", "loop", "dyad", "insert"}};
    t.entries_[FailureMode::KinematicInaccuracy] = {"adjust link lengths", {"adjust", "length", "resize", "scale"}};
    t.entries_[FailureMode::PathDeviation] = {"adjust link lengths", {"adjust", "length", "resize", "scale"}};
    t.entries_[FailureMode::PathMisalignment] = {"move a ground pivot", {"move", "pivot", "shift", "reposition"}};
    t.entries_[FailureMode::None] = {"keep the current topology", {"keep", "no change", "none"}};
    return t;
  }

  const std::string &action(FailureMode m) const { return entry(m).action; }

  /// True when `action` names the mode's canonical action or one of its keywords.
  bool in_family(FailureMode m, std::string_view action) const {
    std::string lower(action);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    const auto &e = entry(m);
    if (lower.find(e.action) != std::string::npos) return true;
    return std::any_of(e.keywords.begin(), e.keywords.end(),
                       [&](const std::string &k) { return lower.find(k) != std::string::npos; });
  }

  std::string to_text() const {
    std::string out;
    for (const auto &[m, e] : entries_) out += "- " + failure_mode_name(m) + " -> " + e.action + "\n";
    return out;
  }

 private:
  const TableEntry &entry(FailureMode m) const {
    auto it = entries_.find(m);
    if (it == entries_.end()) throw std::out_of_range("failure mode table has no entry for " + failure_mode_name(m));
    return it->second;
  }
  std::map<FailureMode, TableEntry> entries_;
};

struct RefinementPlan {
  FailureMode failure_mode = FailureMode::None;
  std::string structural_cause;
  std::string suggested_action;
  std::string canonical_action;  // from the table
  bool action_in_family = false;

  std::string to_text() const {
    return "Failure Mode: " + failure_mode_name(failure_mode) + "\nStructural Cause: " + structural_cause +
           "\nSuggested Action: " + suggested_action + "\nCanonical Action: " + canonical_action;
  }
  nlohmann::json to_json() const {
    return {{"failure_mode", failure_mode_name(failure_mode)},
            {"structural_cause", structural_cause},
            {"suggested_action", suggested_action},
            {"canonical_action", canonical_action},
            {"action_in_family", action_in_family}};
  }
};

/// Reads the three labelled lines from a planner response. Labels are
/// matched case-insensitively and may carry markdown emphasis.
inline RefinementPlan parse_plan(std::string_view text, const FailureModeTable &table) {
  std::optional<std::string> mode, cause, action;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    const auto label = detail::squash(line.substr(0, colon));
    std::string value = line.substr(colon + 1);
    value.erase(0, value.find_first_not_of(" \t*_"));
    while (!value.empty() && (std::isspace(static_cast<unsigned char>(value.back())) || value.back() == '*'))
      value.pop_back();
    if (label == "failuremode" && !mode) mode = value;
    else if (label == "structuralcause" && !cause) cause = value;
    else if (label == "suggestedaction" && !action) action = value;
  }
  if (!mode) throw PlanParseError("planner response has no 'Failure Mode:' line");
  RefinementPlan p;
  p.failure_mode = parse_failure_mode(*mode);
  p.structural_cause = cause.value_or("");
  p.suggested_action = action.value_or("");
  p.canonical_action = table.action(p.failure_mode);
  p.action_in_family = table.in_family(p.failure_mode, p.suggested_action);
  return p;
}

/// The critic's four evidence blocks plus the numbers they quote.
struct CriticReport {
  std::string kinematic_accuracy;
  std::string mobility;
  std::string compositionality;
  std::string recommendation;

  double chamfer = 0.0;
  int dof = 0;
  int links = 0;
  int joints = 0;
  bool buildable = false;

  std::string to_text() const {
    return "[Kinematic Accuracy]\n" + kinematic_accuracy + "\n[Mobility/DOF]\n" + mobility + "\n[Compositionality]\n" +
           compositionality + "\n[Recommendation]\n" + recommendation + "\n";
  }
};

}  // namespace linksynth::agents
