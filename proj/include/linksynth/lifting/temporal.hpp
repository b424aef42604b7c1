#pragma once

// Bounded temporal formulas over the sample grid t_k = k / N.
//
// Windows are relative to the evaluation time: F[a,b] phi holds at k when phi
// holds at some sample j with a*N <= j - k <= b*N (1e-9 slack). Formulas are
// checked at k = 0, so top-level windows read as absolute times. phi U[a,b]
// psi requires phi at every sample from the evaluation time through the
// witness, inclusive. Samples past the end of the trace do not exist: F and U
// over an empty window are false, G is vacuously true.

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "linksynth/lifting/events.hpp"

namespace linksynth::lifting {

enum class AtomKind { In, Cross, CurvZero, INF, EX_x, EX_y, SINT };
enum class TemporalOp { Atom, Not, And, Or, Eventually, Always, Until };

struct Formula {
  TemporalOp op = TemporalOp::Atom;
  AtomKind atom = AtomKind::INF;
  std::string name;  // region / guard name for In / Cross
  double a = 0.0, b = 1.0;
  std::vector<Formula> args;

  bool operator==(const Formula &) const = default;

  static Formula in(std::string region) { return {TemporalOp::Atom, AtomKind::In, std::move(region), 0, 1, {}}; }
  static Formula cross(std::string guard) { return {TemporalOp::Atom, AtomKind::Cross, std::move(guard), 0, 1, {}}; }
  static Formula event(AtomKind k) {
    if (k == AtomKind::In || k == AtomKind::Cross) throw std::invalid_argument("named atom needs a name");
    return {TemporalOp::Atom, k, {}, 0, 1, {}};
  }
  static Formula negate(Formula f) { return {TemporalOp::Not, {}, {}, 0, 1, {std::move(f)}}; }
  static Formula all_of(std::vector<Formula> fs) { return {TemporalOp::And, {}, {}, 0, 1, std::move(fs)}; }
  static Formula any_of(std::vector<Formula> fs) { return {TemporalOp::Or, {}, {}, 0, 1, std::move(fs)}; }
  static Formula eventually(double a, double b, Formula f) {
    return {TemporalOp::Eventually, {}, {}, a, b, {std::move(f)}};
  }
  static Formula always(double a, double b, Formula f) { return {TemporalOp::Always, {}, {}, a, b, {std::move(f)}}; }
  static Formula until(double a, double b, Formula lhs, Formula rhs) {
    return {TemporalOp::Until, {}, {}, a, b, {std::move(lhs), std::move(rhs)}};
  }

  bool is_temporal() const {
    return op == TemporalOp::Eventually || op == TemporalOp::Always || op == TemporalOp::Until;
  }
  int depth() const {
    int d = 0;
    for (const auto &c : args) d = std::max(d, c.depth());
    return d + 1;
  }
};

/// Throws std::invalid_argument on a malformed interval anywhere in the tree.
inline void check_formula(const Formula &f) {
  if (f.is_temporal()) {
    if (!std::isfinite(f.a) || !std::isfinite(f.b) || f.a > f.b)
      throw std::invalid_argument("malformed temporal interval [" + std::to_string(f.a) + ", " + std::to_string(f.b) + "]");
    if (f.a < 0.0 || f.b > 1.0) throw std::invalid_argument("temporal interval must lie within [0, 1]");
  }
  const std::size_t want = f.op == TemporalOp::Atom ? 0 : f.op == TemporalOp::Until ? 2 : f.op == TemporalOp::And || f.op == TemporalOp::Or ? f.args.size() : 1;
  if (f.args.size() != want) throw std::invalid_argument("formula node has the wrong number of operands");
  if ((f.op == TemporalOp::And || f.op == TemporalOp::Or) && f.args.empty())
    throw std::invalid_argument("empty conjunction / disjunction");
  for (const auto &c : f.args) check_formula(c);
}

// ---- text and JSON ----------------------------------------------------------

inline std::string format_time(double x) {
  char buf[32];
  const double hundredths = x * 100.0;
  std::snprintf(buf, sizeof buf, std::abs(hundredths - std::round(hundredths)) < 1e-9 ? "%.2f" : "%.3f", x);
  return buf;
}

inline std::string atom_text(const Formula &f) {
  switch (f.atom) {
    case AtomKind::In: return "in(" + f.name + ")";
    case AtomKind::Cross: return "cross(" + f.name + ")";
    case AtomKind::CurvZero: return "curv=0";
    case AtomKind::INF: return "INF";
    case AtomKind::EX_x: return "EX_x";
    case AtomKind::EX_y: return "EX_y";
    case AtomKind::SINT: return "SINT";
  }
  return "?";
}

namespace detail {

inline std::string to_text(const Formula &f, bool bare) {
  auto window = [&] { return "_[" + format_time(f.a) + "," + format_time(f.b) + "]"; };
  switch (f.op) {
    case TemporalOp::Atom: return atom_text(f);
    case TemporalOp::Not: return "¬" + to_text(f.args[0], false);
    case TemporalOp::And:
    case TemporalOp::Or: {
      const char *sep = f.op == TemporalOp::And ? " ∧ " : " | ";
      std::string s;
      for (std::size_t i = 0; i < f.args.size(); ++i) s += (i ? sep : "") + to_text(f.args[i], false);
      return bare || f.args.size() == 1 ? s : "(" + s + ")";
    }
    case TemporalOp::Eventually: return "F" + window() + "(" + to_text(f.args[0], true) + ")";
    case TemporalOp::Always: return "G" + window() + "(" + to_text(f.args[0], true) + ")";
    case TemporalOp::Until:
      return "(" + to_text(f.args[0], false) + " U" + window() + " " + to_text(f.args[1], false) + ")";
  }
  return "?";
}

}  // namespace detail

/// Compact line form, e.g. `G_[0.00,1.00](in(R_in)) ∧ F_[0.00,1.00](INF | EX_x | EX_y)`.
inline std::string to_text(const Formula &f) { return detail::to_text(f, true); }

inline nlohmann::json to_json(const Formula &f) {
  static const char *ops[] = {"atom", "not", "and", "or", "F", "G", "U"};
  nlohmann::json o;
  o["op"] = ops[static_cast<int>(f.op)];
  if (f.op == TemporalOp::Atom) {
    o["atom"] = atom_text(f);
    return o;
  }
  if (f.is_temporal()) {
    o["a"] = f.a;
    o["b"] = f.b;
  }
  o["args"] = nlohmann::json::array();
  for (const auto &c : f.args) o["args"].push_back(to_json(c));
  return o;
}

// ---- atom valuation and evaluation -----------------------------------------

/// Truth value of every atom at every grid sample.
struct AtomValuation {
  std::size_t samples = 0;
  std::map<std::string, std::vector<char>> in;
  std::map<std::string, std::vector<char>> cross;
  std::vector<char> curv_zero, inf, ex_x, ex_y, sint;

  const std::vector<char> &lookup(const Formula &atom) const {
    auto named = [&](const auto &m, const char *what) -> const std::vector<char> & {
      auto it = m.find(atom.name);
      if (it == m.end()) throw std::invalid_argument(std::string("unknown ") + what + " '" + atom.name + "'");
      return it->second;
    };
    switch (atom.atom) {
      case AtomKind::In: return named(in, "region");
      case AtomKind::Cross: return named(cross, "guard");
      case AtomKind::CurvZero: return curv_zero;
      case AtomKind::INF: return inf;
      case AtomKind::EX_x: return ex_x;
      case AtomKind::EX_y: return ex_y;
      case AtomKind::SINT: return sint;
    }
    throw std::logic_error("unreachable");
  }
};

/// Region membership per sample; curv=0 where |kappa| is within the
/// curvature margin; event atoms hold exactly at their attributed sample;
/// cross(g) at samples carrying a validated GuardCross for g.
inline AtomValuation build_valuation(const Trajectory &traj, const std::vector<Event> &events,
                                     const std::vector<Region> &regions, const std::vector<Guard> &guards,
                                     const LiftingConfig &cfg = {}) {
  check_trajectory(traj, 3);
  const std::size_t n = traj.size();
  AtomValuation v;
  v.samples = n;
  for (const auto &r : regions) {
    auto &m = v.in[r.name];
    m.resize(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = r.box.contains(traj.samples[i]);
  }
  for (const auto &g : guards) v.cross[g.name].assign(n, 0);
  const auto k = proxies(traj, cfg.dt, cfg.singular_speed);
  v.curv_zero.resize(n);
  for (std::size_t i = 0; i < n; ++i) v.curv_zero[i] = std::abs(k.curvatures[i]) <= cfg.curvature_margin;
  v.inf.assign(n, 0);
  v.ex_x.assign(n, 0);
  v.ex_y.assign(n, 0);
  v.sint.assign(n, 0);
  for (const auto &e : events) {
    if (e.sample >= n) throw std::invalid_argument("event sample outside the trace");
    switch (e.kind) {
      case EventKind::INF: v.inf[e.sample] = 1; break;
      case EventKind::EX_x: v.ex_x[e.sample] = 1; break;
      case EventKind::EX_y: v.ex_y[e.sample] = 1; break;
      case EventKind::SINT: v.sint[e.sample] = 1; break;
      case EventKind::GuardCross:
        if (auto it = v.cross.find(e.payload); it != v.cross.end()) it->second[e.sample] = 1;
        break;
      default: break;
    }
  }
  return v;
}

/// Sample offsets [lo, hi] covered by window [a, b] on a grid with n steps.
inline std::pair<long, long> window_offsets(double a, double b, std::size_t n) {
  const double nd = static_cast<double>(n);
  return {static_cast<long>(std::ceil(a * nd - 1e-9)), static_cast<long>(std::floor(b * nd + 1e-9))};
}

namespace detail {

inline std::vector<long> prefix_count(const std::vector<char> &x) {
  std::vector<long> c(x.size() + 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i) c[i + 1] = c[i] + (x[i] ? 1 : 0);
  return c;
}

/// Truth of `f` at every sample, computed bottom-up.
inline std::vector<char> satisfaction(const Formula &f, const AtomValuation &v) {
  const std::size_t n = v.samples;
  const long last = static_cast<long>(n) - 1;
  std::vector<char> out(n, 0);
  switch (f.op) {
    case TemporalOp::Atom: return v.lookup(f);
    case TemporalOp::Not: {
      const auto x = satisfaction(f.args[0], v);
      for (std::size_t i = 0; i < n; ++i) out[i] = !x[i];
      return out;
    }
    case TemporalOp::And:
    case TemporalOp::Or: {
      const bool conj = f.op == TemporalOp::And;
      out.assign(n, conj ? 1 : 0);
      for (const auto &c : f.args) {
        const auto x = satisfaction(c, v);
        for (std::size_t i = 0; i < n; ++i) out[i] = conj ? (out[i] && x[i]) : (out[i] || x[i]);
      }
      return out;
    }
    case TemporalOp::Eventually:
    case TemporalOp::Always: {
      const auto x = satisfaction(f.args[0], v);
      const auto c = prefix_count(x);
      const auto [lo_off, hi_off] = window_offsets(f.a, f.b, n - 1);
      for (long k = 0; k <= last; ++k) {
        const long lo = k + lo_off, hi = std::min(k + hi_off, last);
        const long hits = lo <= hi ? c[static_cast<std::size_t>(hi + 1)] - c[static_cast<std::size_t>(lo)] : 0;
        const long width = lo <= hi ? hi - lo + 1 : 0;
        out[static_cast<std::size_t>(k)] = f.op == TemporalOp::Eventually ? hits > 0 : hits == width;
      }
      return out;
    }
    case TemporalOp::Until: {
      const auto phi = satisfaction(f.args[0], v);
      const auto psi = satisfaction(f.args[1], v);
      const auto c = prefix_count(psi);
      // first_false[k] = first sample >= k where phi fails (n if none)
      std::vector<long> first_false(n + 1, static_cast<long>(n));
      for (long k = last; k >= 0; --k)
        first_false[static_cast<std::size_t>(k)] = phi[static_cast<std::size_t>(k)] ? first_false[static_cast<std::size_t>(k) + 1] : k;
      const auto [lo_off, hi_off] = window_offsets(f.a, f.b, n - 1);
      for (long k = 0; k <= last; ++k) {
        const long lo = k + lo_off;
        const long hi = std::min({k + hi_off, last, first_false[static_cast<std::size_t>(k)] - 1});
        out[static_cast<std::size_t>(k)] = lo <= hi && c[static_cast<std::size_t>(hi + 1)] - c[static_cast<std::size_t>(lo)] > 0;
      }
      return out;
    }
  }
  return out;
}

}  // namespace detail

/// Truth of `f` at time 0 under a prepared valuation.
inline bool evaluate(const Formula &f, const AtomValuation &v) {
  check_formula(f);
  if (v.samples < 2) throw std::invalid_argument("evaluate: valuation needs at least 2 samples");
  return detail::satisfaction(f, v)[0] != 0;
}

inline bool evaluate(const Formula &f, const Trajectory &traj, const std::vector<Event> &events,
                     const std::vector<Region> &regions, const std::vector<Guard> &guards,
                     const LiftingConfig &cfg = {}) {
  check_formula(f);
  return evaluate(f, build_valuation(traj, events, regions, guards, cfg));
}

}  // namespace linksynth::lifting
