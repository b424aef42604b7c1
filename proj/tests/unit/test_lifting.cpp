#include <catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "linksynth/lifting/bundle.hpp"
#include "linksynth/targets.hpp"

using namespace linksynth;
using namespace linksynth::lifting;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Trajectory circle(double r, int n) {
  TargetShape s;
  s.kind = ShapeKind::Circle;
  s.scale = r;
  s.n_points = n;
  return generate(s);
}

Trajectory polyline(std::vector<Vec2> pts) {
  Trajectory t{std::move(pts), 1.0};
  t.dt = 1.0 / static_cast<double>(t.samples.size() - 1);
  return t;
}

std::map<EventKind, int> kind_counts(const std::vector<Event> &ev) {
  std::map<EventKind, int> m;
  for (const auto &e : ev) ++m[e.kind];
  return m;
}

}  // namespace

TEST_CASE("proxies: circle, straight line and parabola vertex", "[lifting][proxies]") {
  const auto k = proxies(circle(2.0, 1000));
  for (std::size_t i = 1; i + 1 < k.curvatures.size(); ++i) CHECK_THAT(k.curvatures[i], WithinRel(0.5, 0.01));

  std::vector<Vec2> line;
  for (int i = 0; i < 20; ++i) line.push_back({0.5 * i, 0.25 * i});
  const auto kl = proxies(polyline(line));
  for (std::size_t i = 0; i < kl.curvatures.size(); ++i) {
    CHECK(kl.curvatures[i] == 0.0);
    CHECK_THAT(kl.headings[i], WithinAbs(std::atan2(0.25, 0.5), 1e-12));
  }

  std::vector<Vec2> par;
  for (int i = -10; i <= 10; ++i) par.push_back({i * 1e-3, (i * 1e-3) * (i * 1e-3)});
  const auto kp = proxies(polyline(par));
  CHECK_THAT(kp.curvatures[10], WithinRel(2.0, 1e-3));

  CHECK_THROWS_AS(proxies(polyline({{0, 0}, {1, 0}})), std::invalid_argument);
}

TEST_CASE("proxies follow the boundary and interior stencils", "[lifting][proxies]") {
  const std::vector<Vec2> p{{0, 0}, {1, 0.5}, {3, 1}, {4, 4}, {4.5, 6}};
  const auto k = proxies(polyline(p), 1.0);
  CHECK(k.velocities[0] == p[1] - p[0]);
  CHECK(k.velocities[4] == p[4] - p[3]);
  for (int i = 1; i < 4; ++i) {
    CHECK(k.velocities[i] == (p[i + 1] - p[i - 1]) / 2.0);
    CHECK(k.accelerations[i] == p[i + 1] - p[i] * 2.0 + p[i - 1]);
  }
  CHECK(k.accelerations[0] == k.accelerations[1]);
  CHECK(k.curvatures[4] == k.curvatures[3]);
  // Stationary samples take the singular guard.
  const auto still = proxies(polyline({{1, 1}, {1, 1}, {1, 1}, {1, 1}}));
  for (double c : still.curvatures) CHECK(c == 0.0);
}

TEST_CASE("hysteretic sign", "[lifting][hysteresis]") {
  const std::vector<double> a{0.5, 5e-4, -5e-4, 0.5};
  CHECK(hysteretic_sign(a, 1e-3) == std::vector<int>{1, 1, 1, 1});
  const std::vector<double> b{-1, 1};
  CHECK(hysteretic_sign(b, 1e-3) == std::vector<int>{-1, 1});
  const std::vector<double> quiet{1e-4, -2e-4};
  CHECK(hysteretic_sign(quiet, 1e-3) == std::vector<int>{0, 0});
  const std::vector<double> late{1e-4, 0.0, -0.5, 0.2};
  CHECK(hysteretic_sign(late, 1e-3) == std::vector<int>{-1, -1, -1, 1});
  CHECK_THROWS(hysteretic_sign(b, 0.0));

  // Perturbations below margin / 2 cannot move a value across +-margin when
  // values avoid the strip [margin / 2, 3 margin / 2] in magnitude.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double m = 1e-3;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> s(40), t(40);
    for (auto &x : s) {
      const double mag = u(rng) < 0.5 ? u(rng) * 0.5 * m : (1.5 + 10 * u(rng)) * m;
      x = u(rng) < 0.5 ? -mag : mag;
    }
    for (std::size_t i = 0; i < s.size(); ++i) t[i] = s[i] + (u(rng) - 0.5) * 0.999 * m;
    CHECK(hysteretic_sign(s, m) == hysteretic_sign(t, m));
  }
}

TEST_CASE("segmentation thresholds", "[lifting][segmentation]") {
  std::vector<Vec2> line;
  for (int i = 0; i < 30; ++i) line.push_back({0.1 * i, 0.0});
  const auto s1 = segment_dr(polyline(line));
  REQUIRE(s1.segments.size() == 1);
  CHECK(s1.segments[0].label == MotionLabel::Straight);
  CHECK(s1.segments[0].start == 0);
  CHECK(s1.segments[0].end == 30);

  std::vector<Vec2> slow;
  for (int i = 0; i < 30; ++i) slow.push_back({1e-5 * i, 0.0});
  const auto s2 = segment_dr(polyline(slow));
  REQUIRE(s2.segments.size() == 1);
  CHECK(s2.segments[0].label == MotionLabel::Pause);

  std::vector<Vec2> corner;
  for (int i = 0; i <= 5; ++i) corner.push_back({static_cast<double>(i), 0.0});
  for (int i = 1; i <= 5; ++i) corner.push_back({5.0, static_cast<double>(i)});
  const auto s3 = segment_dr(polyline(corner));
  REQUIRE(s3.segments.size() == 3);
  CHECK(s3.segments[0].label == MotionLabel::Straight);
  CHECK(s3.segments[1].label == MotionLabel::UTurn);
  CHECK(s3.segments[1].start == 5);
  CHECK(s3.segments[1].end == 6);
  CHECK(s3.segments[2].label == MotionLabel::Straight);
  CHECK(s3.segments[1].dominant_curvature_sign == 1);

  CHECK(classify(1.0, deg_to_rad(2.0), {}) == MotionLabel::Straight);
  CHECK(classify(1.0, deg_to_rad(2.5), {}) == MotionLabel::GentleTurn);
  CHECK(classify(1.0, deg_to_rad(30.0), {}) == MotionLabel::GentleTurn);
  CHECK(classify(1.0, deg_to_rad(44.0), {}) == MotionLabel::SharpTurn);
  CHECK(classify(1.0, deg_to_rad(46.0), {}) == MotionLabel::UTurn);
  CHECK(classify(1.4e-4, deg_to_rad(90.0), {}) == MotionLabel::Pause);
}

TEST_CASE("segments partition the trace and summary statistics add up", "[lifting][segmentation]") {
  const auto seg = segment_dr(make_target(ShapeKind::Lemniscate));
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < seg.segments.size(); ++i) {
    CHECK(seg.segments[i].start == cursor);
    CHECK(seg.segments[i].end > seg.segments[i].start);
    if (i) CHECK(seg.segments[i].label != seg.segments[i - 1].label);
    cursor = seg.segments[i].end;
  }
  CHECK(cursor == seg.labels.size());
  double total = 0.0, h = 0.0;
  for (double f : seg.summary.label_frequency) {
    total += f;
    if (f > 0) h -= f * std::log2(f);
  }
  CHECK_THAT(total, WithinAbs(1.0, 1e-12));
  CHECK_THAT(seg.summary.entropy_bits, WithinAbs(h, 1e-12));
  int transitions = 0;
  for (const auto &[k, v] : seg.summary.transitions) transitions += v;
  CHECK(transitions == static_cast<int>(seg.segments.size()) - 1);
  CHECK(quantize_heading(0.0, 8) == 0);
  CHECK(quantize_heading(std::numbers::pi / 2, 8) == 2);
  CHECK(quantize_heading(-std::numbers::pi / 4, 8) == 7);
}

TEST_CASE("events on canonical traces", "[lifting][events]") {
  const auto c = make_target(ShapeKind::Circle);
  const auto ec = detect_events(c, proxies(c), {}, {});
  const auto counts = kind_counts(ec);
  CHECK(counts.count(EventKind::INF) == 0);
  CHECK(counts.at(EventKind::EX_x) == 2);
  CHECK(counts.at(EventKind::EX_y) == 2);
  CHECK(counts.count(EventKind::SINT) == 0);
  CHECK(std::is_sorted(ec.begin(), ec.end(), [](const Event &a, const Event &b) { return a.t < b.t; }));

  const auto lem = make_target(ShapeKind::Lemniscate);
  const auto all_hits = self_intersections(lem);
  REQUIRE(all_hits.size() >= 1);
  LiftingConfig cfg;
  cfg.seed = 17;
  const auto el = kind_counts(detect_events(lem, proxies(lem), {}, {}, cfg));
  CHECK(el.at(EventKind::SINT) >= 1);
  CHECK(el.at(EventKind::INF) >= 2);

  const Region big{"R", {{-100, -100}, {100, 100}}};
  const auto ei = detect_events(c, proxies(c), {big}, {});
  const auto ci = kind_counts(ei);
  CHECK(ci.at(EventKind::RegionIn) == 1);
  CHECK(ci.count(EventKind::RegionOut) == 0);
  CHECK(ci.count(EventKind::RegionCross) == 0);
  const auto in = std::find_if(ei.begin(), ei.end(), [](const Event &e) { return e.kind == EventKind::RegionIn; });
  CHECK(in->t == 0.0);
  CHECK(in->payload == "R");
}

TEST_CASE("region transitions and pass-through crossings", "[lifting][events]") {
  // Coarse line that jumps clean over a thin box, then enters a second one.
  const auto tr = polyline({{0, 0}, {2, 0}, {4, 0}, {6, 0}, {8, 0}, {10, 0}});
  const Region thin{"thin", {{2.9, -1}, {3.1, 1}}};
  const Region tail{"tail", {{7, -1}, {9, 1}}};
  const auto ev = detect_events(tr, proxies(tr), {thin, tail}, {});
  std::vector<std::pair<EventKind, std::size_t>> got;
  for (const auto &e : ev)
    if (e.kind == EventKind::RegionIn || e.kind == EventKind::RegionOut || e.kind == EventKind::RegionCross)
      got.push_back({e.kind, e.sample});
  const std::vector<std::pair<EventKind, std::size_t>> want{
      {EventKind::RegionCross, 2}, {EventKind::RegionIn, 4}, {EventKind::RegionOut, 5}};
  CHECK(got == want);
}

TEST_CASE("guard crossings need normal speed and separation", "[lifting][events]") {
  const auto c = make_target(ShapeKind::Circle);
  const Guard vert{"V", {4, 0}, {0, 1}};
  const auto ev = kind_counts(detect_events(c, proxies(c), {}, {vert}));
  CHECK(ev.at(EventKind::GuardCross) == 2);

  // Zig-zag across the line every sample: separation rule keeps 1 of every 5.
  std::vector<Vec2> zig;
  for (int i = 0; i < 21; ++i) zig.push_back({0.1 * i, (i % 2 ? 1.0 : -1.0)});
  const auto z = polyline(zig);
  auto zk = proxies(z);
  const auto zev = detect_events(z, zk, {}, {Guard{"X", {0, 0}, {1, 0}}});
  std::vector<std::size_t> at;
  for (const auto &e : zev)
    if (e.kind == EventKind::GuardCross) at.push_back(e.sample);
  // centred normal velocity is zero at interior samples of a zig-zag; only
  // the forward/backward boundary samples qualify
  for (std::size_t s : at) CHECK((s == 20 || s == 1));

  // Slow drift across the guard (normal speed below the floor) is ignored.
  std::vector<Vec2> drift;
  for (int i = 0; i < 20; ++i) drift.push_back({0.1 * i, -1e-4 + 1e-5 * i});
  const auto d = polyline(drift);
  CHECK(kind_counts(detect_events(d, proxies(d), {}, {Guard{"X", {0, 0}, {1, 0}}})).count(EventKind::GuardCross) == 0);
}

TEST_CASE("SINT retention keeps every tenth from a seeded offset", "[lifting][events]") {
  std::vector<int> v(95);
  std::iota(v.begin(), v.end(), 0);
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    const auto kept = retain_fraction(v, 0.1, seed);
    REQUIRE_FALSE(kept.empty());
    const int off = kept.front();
    CHECK(off < 10);
    for (std::size_t i = 0; i < kept.size(); ++i) CHECK(kept[i] == off + 10 * static_cast<int>(i));
    CHECK(retain_fraction(v, 0.1, seed) == kept);
  }
  CHECK(retain_fraction(std::vector<int>{7}, 0.1, 5) == std::vector<int>{7});
  CHECK(retain_fraction(std::vector<int>{}, 0.1, 5).empty());
}

TEST_CASE("sketch primitives", "[lifting][sketch]") {
  const auto c = make_target(ShapeKind::Circle);
  const auto kc = proxies(c);
  const auto sig = qual_signature(kc);
  const auto ev = detect_events(c, kc, {}, {});
  const auto prims = compose_sketch(c, sig, ev);
  REQUIRE(prims.size() == 1);
  CHECK(prims[0].curv == 1);
  CHECK(prims[0].ev.count(EventKind::EX_x) == 1);
  CHECK(prims[0].ev.count(EventKind::EX_y) == 1);
  CHECK_THAT(*prims[0].len, WithinRel(arc_length(c.samples, 0, c.size() - 1), 1e-12));

  const auto s = fixtures::s_curve();
  const auto ks = proxies(s);
  const auto ss = qual_signature(ks);
  const auto es = detect_events(s, ks, {}, {});
  const auto ps = compose_sketch(s, ss, es);
  REQUIRE(ps.size() == 2);
  CHECK(ps[0].curv == 1);
  CHECK(ps[1].curv == -1);
  CHECK(ps[1].ev.count(EventKind::INF) == 1);
  const auto inf = std::find_if(es.begin(), es.end(), [](const Event &e) { return e.kind == EventKind::INF; });
  REQUIRE(inf != es.end());
  CHECK(inf->sample == ps[1].start);
  CHECK(std::abs(inf->t - 0.5) < 0.02);
  CHECK(ps[0].mono == std::pair{1, -1});
}

TEST_CASE("sketch is unchanged under sub-margin perturbation", "[lifting][sketch]") {
  std::mt19937_64 rng(12);
  LiftingConfig cfg;
  const double delta = 1e-7;
  int tested = 0;
  for (int attempt = 0; attempt < 200 && tested < 30; ++attempt) {
    const auto tr = fixtures::random_smooth_curve(rng, 150);
    const std::vector<Region> regions{containment_region(tr)};
    const std::vector<Guard> guards{principal_guard(tr)};
    if (!fixtures::perturbation_is_sub_margin(tr, delta, cfg, regions, guards)) continue;
    ++tested;
    auto moved = tr;
    std::uniform_real_distribution<double> u(-delta, delta);
    for (std::size_t i = 0; i + 1 < moved.size(); ++i) moved.samples[i] += Vec2{u(rng), u(rng)};
    moved.samples.back() = moved.samples.front();
    const auto k0 = proxies(tr), k1 = proxies(moved);
    const auto e0 = detect_events(tr, k0, regions, guards, cfg), e1 = detect_events(moved, k1, regions, guards, cfg);
    const auto p0 = compose_sketch(tr, qual_signature(k0, cfg), e0);
    const auto p1 = compose_sketch(moved, qual_signature(k1, cfg), e1);
    REQUIRE(p0.size() == p1.size());
    for (std::size_t i = 0; i < p0.size(); ++i) {
      CHECK(p0[i].same_shape(p1[i]));
      CHECK(std::abs(*p0[i].len - *p1[i].len) < 1e-5);
    }
    CHECK(kind_counts(e0) == kind_counts(e1));
  }
  CHECK(tested == 30);
}

TEST_CASE("spec synthesis shapes", "[lifting][spec]") {
  const auto line = make_target(ShapeKind::Line);
  const auto sl = synthesize_spec(line, {}, {});
  CHECK(has_full_containment(sl, "R_in"));

  const auto ell = make_target(ShapeKind::Ellipse);
  const auto se = synthesize_spec(ell, {}, {});
  CHECK(to_text(se) == "G_[0.00,1.00](in(R_in)) ∧ F_[0.00,1.00](INF | EX_x | EX_y) ∧ (¬cross(L_0) U_[0.00,1.00] in(R_in))");

  const auto lem = make_target(ShapeKind::Lemniscate);
  const auto sm = synthesize_spec(lem, {}, {});
  int windows = 0;
  for (const auto &c : sm.args)
    if (c.op == TemporalOp::Eventually) {
      ++windows;
      CHECK(c.b - c.a < 0.5);
    }
  CHECK(windows >= 2);

  // The spec holds on the curve it was synthesised from.
  for (auto k : {ShapeKind::Line, ShapeKind::Ellipse, ShapeKind::Lemniscate, ShapeKind::NacaAirfoil, ShapeKind::Parabola}) {
    const auto t = make_target(k);
    const std::vector<Region> r{containment_region(t)};
    const std::vector<Guard> g{principal_guard(t)};
    const auto spec = synthesize_spec(t, r, g);
    CHECK(evaluate(spec, t, detect_events(t, proxies(t), r, g), r, g));
  }

  const auto merged = merge_intervals({{0.3, 0.4}, {0.0, 0.1}, {0.1 + 1e-13, 0.2}, {0.5, 0.6}}, 1e-12);
  REQUIRE(merged.size() == 3);
  CHECK(merged[0].a == 0.0);
  CHECK(merged[0].b == 0.2);
}

TEST_CASE("temporal evaluation examples", "[lifting][temporal]") {
  const auto c = make_target(ShapeKind::Circle);
  const Region all{"R", {{-1, -1}, {11, 11}}};
  CHECK(evaluate(Formula::always(0, 1, Formula::in("R")), c, {}, {all}, {}));

  AtomValuation v;
  v.samples = 11;
  v.inf.assign(11, 0);
  v.ex_x.assign(11, 0);
  v.ex_y.assign(11, 0);
  v.sint.assign(11, 0);
  v.curv_zero.assign(11, 0);
  v.ex_x[6] = 1;  // t = 0.6
  CHECK_FALSE(evaluate(Formula::eventually(0, 0.5, Formula::event(AtomKind::EX_x)), v));
  CHECK(evaluate(Formula::eventually(0.5, 0.6, Formula::event(AtomKind::EX_x)), v));
  CHECK_THROWS_AS(evaluate(Formula::eventually(0.6, 0.5, Formula::event(AtomKind::EX_x)), v), std::invalid_argument);
  CHECK_THROWS_AS(evaluate(Formula::in("nowhere"), v), std::invalid_argument);

  // Until needs phi from the evaluation time through the witness.
  v.in["A"] = {1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1};
  v.in["B"] = {0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0};
  CHECK_FALSE(evaluate(Formula::until(0, 1, Formula::in("A"), Formula::in("B")), v));
  v.in["A"][3] = 1;
  CHECK(evaluate(Formula::until(0, 1, Formula::in("A"), Formula::in("B")), v));
  CHECK_FALSE(evaluate(Formula::until(0.6, 1, Formula::in("A"), Formula::in("B")), v));
}

TEST_CASE("formula text and JSON", "[lifting][temporal]") {
  const auto f = Formula::all_of({Formula::always(0, 1, Formula::in("R_in")),
                                  Formula::eventually(0.015, 0.035, Formula::any_of({Formula::event(AtomKind::INF),
                                                                                     Formula::event(AtomKind::EX_x)})),
                                  Formula::negate(Formula::event(AtomKind::CurvZero))});
  CHECK(to_text(f) == "G_[0.00,1.00](in(R_in)) ∧ F_[0.015,0.035](INF | EX_x) ∧ ¬curv=0");
  const auto j = to_json(f);
  CHECK(j["op"] == "and");
  CHECK(j["args"][1]["a"] == 0.015);
  CHECK(f.depth() == 4);
}

TEST_CASE("lift: unbuildable, toggles off, circle tracer", "[lifting][bundle]") {
  const auto target = make_target(ShapeKind::Circle);

  auto bad = fixtures::grashof_four_bar();
  std::get<RevoluteJoint>(bad.find("C")->kind).dist0 = 1.5;
  std::get<RevoluteJoint>(bad.find("C")->kind).dist1 = 1.6;
  const auto bad_sim = simulate(bad);
  const auto b0 = lift(bad, bad_sim, target);
  CHECK_FALSE(b0.spec.has_value());
  CHECK_FALSE(b0.structural.diagnostics.empty());
  CHECK_FALSE(b0.segmentation.has_value());
  CHECK(to_text(b0).find("absent (mechanism unbuildable") != std::string::npos);

  Linkage tracer{"tracer", {make_fixed("O", 5, 5), make_crank("P", "O", 5.0)}, "P", ""};
  const auto sim = simulate(tracer);
  LiftingConfig off;
  off.dr = off.cl = false;
  const auto b1 = lift(tracer, sim, target, off);
  CHECK_FALSE(b1.segmentation.has_value());
  CHECK_FALSE(b1.signature.has_value());
  CHECK(b1.sketch.empty());
  CHECK(b1.events.empty());
  CHECK_FALSE(b1.spec.has_value());
  CHECK(b1.structural.dof == 1);
  CHECK(b1.structural.links == 2);
  CHECK(b1.structural.joints == 1);

  const auto b2 = lift(tracer, sim, target);
  REQUIRE(b2.segmentation.has_value());
  CHECK_FALSE(b2.segmentation->segments.empty());
  CHECK(b2.sketch.size() == 1);
  REQUIRE(b2.spec.has_value());
  CHECK(has_full_containment(*b2.spec, "R_in"));
  CHECK(b2.spec_satisfied == true);
  const auto text = to_text(b2);
  CHECK(text.find("[Spec] G_[0.00,1.00](in(R_in))") != std::string::npos);
  CHECK(to_json(b2)["sketch"].size() == 1);
}
