#pragma once

// Linkage JSON wire format shared with the agents:
//   { "name": str, "target": str, "intent": str?,
//     "joints": [ {"id": str, "kind": "fixed", "x": num, "y": num}
//               | {"id": str, "kind": "crank", "anchor": str, "radius": num, "initial_angle": num?}
//               | {"id": str, "kind": "revolute", "parent0": str, "parent1": str,
//                  "dist0": num, "dist1": num, "branch": "positive"|"negative"?} ] }
// Field names are case-sensitive.

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "linksynth/linkage.hpp"

namespace linksynth {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline nlohmann::json to_json(const Joint &j) {
  nlohmann::json o;
  o["id"] = j.id;
  if (const auto *f = std::get_if<FixedJoint>(&j.kind)) {
    o["kind"] = "fixed";
    o["x"] = f->x;
    o["y"] = f->y;
  } else if (const auto *c = std::get_if<CrankJoint>(&j.kind)) {
    o["kind"] = "crank";
    o["anchor"] = c->anchor;
    o["radius"] = c->radius;
    o["initial_angle"] = c->initial_angle;
  } else {
    const auto &r = std::get<RevoluteJoint>(j.kind);
    o["kind"] = "revolute";
    o["parent0"] = r.parent0;
    o["parent1"] = r.parent1;
    o["dist0"] = r.dist0;
    o["dist1"] = r.dist1;
    o["branch"] = r.branch == Branch::Positive ? "positive" : "negative";
  }
  return o;
}

inline nlohmann::json to_json(const Linkage &lk) {
  nlohmann::json o;
  o["name"] = lk.name;
  o["target"] = lk.target;
  if (!lk.intent.empty()) o["intent"] = lk.intent;
  o["joints"] = nlohmann::json::array();
  for (const auto &j : lk.joints) o["joints"].push_back(to_json(j));
  return o;
}

inline std::string dump_linkage(const Linkage &lk, int indent = -1) { return to_json(lk).dump(indent); }

namespace detail {

inline const nlohmann::json &field(const nlohmann::json &o, const char *key, const std::string &where) {
  auto it = o.find(key);
  if (it == o.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

inline double number_field(const nlohmann::json &o, const char *key, const std::string &where) {
  const auto &v = field(o, key, where);
  if (!v.is_number()) throw ParseError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline std::string string_field(const nlohmann::json &o, const char *key, const std::string &where) {
  const auto &v = field(o, key, where);
  if (!v.is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace detail

inline Joint joint_from_json(const nlohmann::json &o) {
  if (!o.is_object()) throw ParseError("joint entry must be an object");
  Joint j;
  j.id = detail::string_field(o, "id", "joint");
  const std::string where = "joint '" + j.id + "'";
  const auto kind = detail::string_field(o, "kind", where);
  if (kind == "fixed") {
    j.kind = FixedJoint{detail::number_field(o, "x", where), detail::number_field(o, "y", where)};
  } else if (kind == "crank") {
    CrankJoint c;
    c.anchor = detail::string_field(o, "anchor", where);
    c.radius = detail::number_field(o, "radius", where);
    c.initial_angle = o.contains("initial_angle") ? detail::number_field(o, "initial_angle", where) : 0.0;
    j.kind = c;
  } else if (kind == "revolute") {
    RevoluteJoint r;
    r.parent0 = detail::string_field(o, "parent0", where);
    r.parent1 = detail::string_field(o, "parent1", where);
    r.dist0 = detail::number_field(o, "dist0", where);
    r.dist1 = detail::number_field(o, "dist1", where);
    if (o.contains("branch")) {
      const auto b = detail::string_field(o, "branch", where);
      if (b == "positive") r.branch = Branch::Positive;
      else if (b == "negative") r.branch = Branch::Negative;
      else throw ParseError(where + ": branch must be \"positive\" or \"negative\"");
    }
    j.kind = r;
  } else {
    throw ParseError(where + ": unknown kind '" + kind + "'");
  }
  return j;
}

inline Linkage linkage_from_json(const nlohmann::json &o) {
  if (!o.is_object()) throw ParseError("linkage must be a JSON object");
  Linkage lk;
  lk.name = o.contains("name") ? detail::string_field(o, "name", "linkage") : std::string{};
  lk.target = detail::string_field(o, "target", "linkage");
  if (o.contains("intent")) lk.intent = detail::string_field(o, "intent", "linkage");
  const auto &joints = detail::field(o, "joints", "linkage");
  if (!joints.is_array()) throw ParseError("linkage: 'joints' must be an array");
  for (const auto &j : joints) lk.joints.push_back(joint_from_json(j));
  return lk;
}

inline Linkage parse_linkage(std::string_view text) {
  nlohmann::json o;
  try {
    o = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return linkage_from_json(o);
}

/// Pulls the first balanced {...} block out of free text (agent responses
/// often wrap the JSON in prose or code fences). Returns an empty view when
/// none is found.
inline std::string_view extract_json_object(std::string_view text) {
  const auto start = text.find('{');
  if (start == std::string_view::npos) return {};
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (ch == '\\') escaped = true;
      else if (ch == '"') in_string = false;
      continue;
    }
    if (ch == '"') in_string = true;
    else if (ch == '{') ++depth;
    else if (ch == '}' && --depth == 0) return text.substr(start, i - start + 1);
  }
  return {};
}

}  // namespace linksynth
