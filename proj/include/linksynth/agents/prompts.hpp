#pragma once

// Role prompt templates. Placeholders use {{name}}; bump kPromptVersion on
// any wording change so recorded histories stay attributable.

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace linksynth::agents {

inline constexpr std::string_view kPromptVersion = "2";

inline constexpr std::string_view kJsonContract = R"({
  "name": "<string>",
  "target": "<id of the end-effector joint>",
  "joints": [
    {"id": "A", "kind": "fixed", "x": <number>, "y": <number>},
    {"id": "B", "kind": "crank", "anchor": "A", "radius": <number>, "initial_angle": <radians>},
    {"id": "C", "kind": "revolute", "parent0": "B", "parent1": "D", "dist0": <number>, "dist1": <number>,
     "branch": "positive" | "negative"}
  ]
}
Rules: exactly one crank; every parent must appear earlier in the list; all lengths > 0;
the mechanism must have one degree of freedom.)";

inline constexpr std::string_view kTopologyPrompt = R"(You are the Topology Agent of a planar linkage synthesis system.
Propose a single-crank planar linkage whose end-effector traces the target curve.
Design intent: {{intent}}
Requested number of bars: {{bars}}
Answer with one JSON object following this contract, then a short rationale.
{{contract}})";

inline constexpr std::string_view kCriticPrompt = R"(You are the Simulation Critic. You receive the evaluated mechanism and its
symbolic representation bundle. Write two or three sentences on the dominant error mode.
Do not restate numbers; they are attached to the report separately.)";

inline constexpr std::string_view kPlannerPrompt = R"(You are the Refinement Planning Agent. Map the critic report to exactly one failure mode
and one minimal structural change, using the failure-mode table:
{{table}}
Answer in exactly this format:
Failure Mode: <one of Overconstraint, Underconstraint, KinematicInaccuracy, PathDeviation, PathMisalignment, None>
Structural Cause: <one sentence>
Suggested Action: <one sentence>)";

inline constexpr std::string_view kRefinerPrompt = R"(You are the Refinement Agent. Apply the requested change to the current linkage with
as few edits as possible. The result must keep every joint connected, have exactly one
degree of freedom, and follow the JSON contract:
{{contract}}
Answer with the complete edited linkage as one JSON object.)";

/// Substitutes every {{key}}. Throws std::invalid_argument for a placeholder
/// without a value.
inline std::string render(std::string_view tmpl, const std::map<std::string, std::string> &values) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const auto open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) break;
    const auto close = tmpl.find("}}", open);
    if (close == std::string_view::npos) break;
    out.append(tmpl.substr(pos, open - pos));
    const std::string key(tmpl.substr(open + 2, close - open - 2));
    auto it = values.find(key);
    if (it == values.end()) throw std::invalid_argument("prompt placeholder '" + key + "' has no value");
    out += it->second;
    pos = close + 2;
  }
  out.append(tmpl.substr(pos));
  return out;
}

}  // namespace linksynth::agents
