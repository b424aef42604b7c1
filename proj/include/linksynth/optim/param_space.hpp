#pragma once

// Continuous parameters bound to linkage fields, addressed as
// "<joint>.<field>" with field one of x, y, radius, initial_angle, dist0, dist1.

#include <stdexcept>
#include <string>
#include <vector>

#include "linksynth/linkage.hpp"

namespace linksynth::optim {

struct Bound {
  double lower = 0.0;
  double upper = 1.0;
  double range() const { return upper - lower; }
};

struct Param {
  std::string id;  // "<joint>.<field>"
  Bound bound;
};

struct ParamSpace {
  std::vector<Param> params;

  std::size_t size() const { return params.size(); }
  std::vector<Bound> bounds() const {
    std::vector<Bound> b;
    for (const auto &p : params) b.push_back(p.bound);
    return b;
  }
  bool contains(const std::vector<double> &x) const {
    if (x.size() != params.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(x[i] >= params[i].bound.lower && x[i] <= params[i].bound.upper)) return false;
    return true;
  }
};

/// Reference to the double a parameter id names. Throws std::invalid_argument
/// when the joint or field does not exist for that joint kind.
inline double &field_ref(Linkage &lk, const std::string &id) {
  const auto dot_pos = id.rfind('.');
  if (dot_pos == std::string::npos) throw std::invalid_argument("parameter id '" + id + "' lacks a field");
  const std::string joint = id.substr(0, dot_pos), field = id.substr(dot_pos + 1);
  Joint *j = lk.find(joint);
  if (!j) throw std::invalid_argument("parameter '" + id + "': unknown joint '" + joint + "'");
  if (auto *f = std::get_if<FixedJoint>(&j->kind)) {
    if (field == "x") return f->x;
    if (field == "y") return f->y;
  } else if (auto *c = std::get_if<CrankJoint>(&j->kind)) {
    if (field == "radius") return c->radius;
    if (field == "initial_angle") return c->initial_angle;
  } else if (auto *r = std::get_if<RevoluteJoint>(&j->kind)) {
    if (field == "dist0") return r->dist0;
    if (field == "dist1") return r->dist1;
  }
  throw std::invalid_argument("parameter '" + id + "': joint '" + joint + "' has no field '" + field + "'");
}

inline double field_value(const Linkage &lk, const std::string &id) {
  Linkage copy = lk;
  return field_ref(copy, id);
}

/// Checks that every id resolves, is unique, and has lower < upper.
inline void check_space(const Linkage &lk, const ParamSpace &space) {
  Linkage copy = lk;
  for (std::size_t i = 0; i < space.params.size(); ++i) {
    const auto &p = space.params[i];
    if (!(p.bound.lower < p.bound.upper)) throw std::invalid_argument("parameter '" + p.id + "': lower must be < upper");
    (void)field_ref(copy, p.id);
    for (std::size_t k = 0; k < i; ++k)
      if (space.params[k].id == p.id) throw std::invalid_argument("parameter '" + p.id + "' listed twice");
  }
}

inline Linkage instantiate(const Linkage &topology, const ParamSpace &space, const std::vector<double> &x) {
  if (x.size() != space.size()) throw std::invalid_argument("parameter vector has the wrong dimension");
  if (!space.contains(x)) throw std::out_of_range("parameters outside the search bounds");
  Linkage lk = topology;
  for (std::size_t i = 0; i < x.size(); ++i) field_ref(lk, space.params[i].id) = x[i];
  return lk;
}

/// Current values of the space's fields in `lk`.
inline std::vector<double> nominal(const Linkage &lk, const ParamSpace &space) {
  std::vector<double> x;
  for (const auto &p : space.params) x.push_back(field_value(lk, p.id));
  return x;
}

/// Every length (crank radius, revolute distances) within +-`rel` of its
/// current value, nearest-to-target joints first; optionally fixed pivot
/// coordinates within +-`pivot_span` absolute.
inline ParamSpace length_space(const Linkage &lk, double rel = 0.5, bool pivots = false, double pivot_span = 0.0) {
  ParamSpace s;
  for (auto it = lk.joints.rbegin(); it != lk.joints.rend(); ++it) {
    const auto &j = *it;
    auto add = [&](const std::string &field, double v) {
      s.params.push_back({j.id + "." + field, {v * (1.0 - rel), v * (1.0 + rel)}});
    };
    if (const auto *c = std::get_if<CrankJoint>(&j.kind)) {
      add("radius", c->radius);
    } else if (const auto *r = std::get_if<RevoluteJoint>(&j.kind)) {
      add("dist0", r->dist0);
      add("dist1", r->dist1);
    }
  }
  if (pivots && pivot_span > 0.0)
    for (const auto &j : lk.joints)
      if (const auto *f = std::get_if<FixedJoint>(&j.kind)) {
        s.params.push_back({j.id + ".x", {f->x - pivot_span, f->x + pivot_span}});
        s.params.push_back({j.id + ".y", {f->y - pivot_span, f->y + pivot_span}});
      }
  return s;
}

}  // namespace linksynth::optim
