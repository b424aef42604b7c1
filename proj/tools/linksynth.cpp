#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "linksynth/linksynth.hpp"

using namespace linksynth;

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

/// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string &path, const std::string &content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_file(path, content);
}

std::string trajectory_csv(const Trajectory &t) {
  std::string s = "x,y\n";
  for (const auto &p : t.samples) s += shortest(p.x) + "," + shortest(p.y) + "\n";
  return s;
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

struct RunArgs {
  std::string config, out = "out";
  unsigned threads = default_threads();
};

int cmd_run(const RunArgs &a) {
  const auto configs = harness::load_configs(a.config);
  const auto t0 = std::chrono::steady_clock::now();
  harness::RunOptions opt;
  opt.threads = a.threads;
  const auto results = harness::run_matrix(configs, opt);
  const auto files = harness::write_outputs(a.out, results);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << harness::results_csv(results);
  std::cerr << "wrote " << files.size() << " files to " << a.out << " in " << fixed(secs, 1) << " s\n";
  for (const auto &r : results)
    for (const auto &s : r.samples)
      if (!s.success) std::cerr << r.config.id() << " sample " << s.sample << ": " << s.failure << "\n";
  return 0;
}

struct TargetArgs {
  std::string shape = "line", out;
  int points = 100;
};

int cmd_target(const TargetArgs &a) {
  emit(a.out, trajectory_csv(make_target(parse_shape_kind(a.shape), a.points)));
  return 0;
}

struct OptimizeArgs {
  std::string shape = "line", optimizer = "pso", budget = "30x100", trace, out;
  int bars = 4, resolution = 3;
  std::uint64_t seed = 0;
  unsigned threads = default_threads();
};

// Fits every template of the requested bar family and keeps the best.
int cmd_optimize(const OptimizeArgs &a) {
  const auto target = make_target(parse_shape_kind(a.shape));
  const auto kind = optim::parse_optimizer(a.optimizer);
  const auto budget = optim::parse_budget(a.budget);
  std::optional<optim::OptimResult> best;
  std::optional<Linkage> best_lk;
  std::string best_name;
  for (const auto &t : optim::enumerate_topologies(a.bars)) {
    const optim::LinkageObjective f(t.linkage, t.space, target);
    optim::OptimResult r;
    if (kind == optim::OptimizerKind::Grid) {
      r = optim::grid_search(f, t.space.bounds(), {a.resolution}, {optim::kGridCap, a.threads});
    } else {
      optim::PsoOptions p;
      p.budget = budget;
      p.seed = a.seed;
      p.threads = a.threads;
      p.initial = {optim::nominal(t.linkage, t.space)};
      r = optim::pso(f, t.space.bounds(), p);
    }
    for (const auto &w : r.warnings) std::cerr << "warning: " << w << "\n";
    std::cerr << t.name << ": " << shortest(r.best) << " after " << r.evaluations << " evaluations\n";
    if (!best || r.best < best->best) {
      best_lk = optim::instantiate(t.linkage, t.space, r.params);
      best_name = t.name;
      best = std::move(r);
    }
  }
  if (!a.trace.empty()) {
    std::string csv = "iteration,best\n";
    for (std::size_t i = 0; i < best->trace.size(); ++i) csv += std::to_string(i) + "," + shortest(best->trace[i]) + "\n";
    write_file(a.trace, csv);
  }
  best_lk->name = best_name;
  emit(a.out, dump_linkage(*best_lk) + "\n");
  std::cerr << "best " << best_name << " chamfer " << shortest(best->best) << "\n";
  return 0;
}

struct BaselineArgs {
  std::string shapes = "line", budgets = "3x20,6x20", bars = "4,6", out;
  int samples = 5;
  std::uint64_t seed = 0;
  unsigned threads = default_threads();
};

int cmd_baseline(const BaselineArgs &a) {
  harness::SweepOptions opt;
  opt.shapes.clear();
  opt.budgets.clear();
  opt.bars.clear();
  for (const auto &s : split_list(a.shapes)) opt.shapes.push_back(parse_shape_kind(s));
  for (const auto &b : split_list(a.budgets)) opt.budgets.push_back(optim::parse_budget(b));
  for (const auto &b : split_list(a.bars)) opt.bars.push_back(std::stoi(b));
  opt.samples = a.samples;
  opt.seed = a.seed;
  opt.threads = a.threads;
  emit(a.out, harness::sweep_csv(harness::enum_ga_sweep(opt)));
  return 0;
}

struct SimulateArgs {
  std::string linkage, svg, target, out;
  int steps = 100;
};

int cmd_simulate(const SimulateArgs &a) {
  const auto lk = parse_linkage(read_file(a.linkage));
  const auto sim = agents::safe_simulate(lk, a.steps);
  const auto counts = count_links_joints(extract_link_graph(lk));
  std::cerr << "links=" << counts.links << " joints=" << counts.joints << " dof=" << sim.dof
            << " buildable=" << (sim.buildable ? "yes" : "no") << "\n";
  for (const auto &d : sim.diagnostics) std::cerr << d.to_string() << "\n";
  if (!sim.buildable) return 2;
  if (!a.svg.empty()) {
    std::optional<Trajectory> target;
    if (!a.target.empty()) target = make_target(parse_shape_kind(a.target));
    harness::write_mechanism_svg(a.svg, lk, sim, target);
  }
  emit(a.out, trajectory_csv(sim.trajectory(lk.target)));
  return 0;
}

struct LiftArgs {
  std::string linkage, shape = "line";
  bool no_dr = false, no_cl = false, json = false;
  std::uint64_t seed = 0;
};

int cmd_lift(const LiftArgs &a) {
  const auto lk = parse_linkage(read_file(a.linkage));
  const auto sim = agents::safe_simulate(lk);
  lifting::LiftingConfig cfg;
  cfg.dr = !a.no_dr;
  cfg.cl = !a.no_cl;
  cfg.seed = a.seed;
  const auto bundle = lifting::lift(lk, sim, make_target(parse_shape_kind(a.shape)), cfg);
  std::cout << (a.json ? lifting::to_json(bundle).dump(2) + "\n" : lifting::to_text(bundle));
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Planar linkage synthesis: simulation, symbolic lifting, optimisation and agent experiments"};
  app.require_subcommand(1);

  RunArgs run;
  auto *c_run = app.add_subcommand("run", "Run an experiment config file and write tables, traces, histories, SVGs");
  c_run->add_option("--config", run.config, "JSON list of experiment configs")->required()->check(CLI::ExistingFile);
  c_run->add_option("--out", run.out, "Output directory")->capture_default_str();
  c_run->add_option("--threads", run.threads, "Worker threads")->check(CLI::PositiveNumber);

  TargetArgs target;
  auto *c_target = app.add_subcommand("target", "Print a canonical target curve as CSV");
  c_target->add_option("--shape", target.shape, "parabola|naca|line|ellipse|circle|lemniscate")->capture_default_str();
  c_target->add_option("--points", target.points, "Sample count")->capture_default_str()->check(CLI::Range(8, 100000));
  c_target->add_option("--out", target.out, "Output file (default stdout)");

  OptimizeArgs optimize;
  auto *c_opt = app.add_subcommand("optimize", "Fit the canonical templates of a bar family to a target");
  c_opt->add_option("--shape", optimize.shape, "Target shape")->capture_default_str();
  c_opt->add_option("--optimizer", optimize.optimizer, "grid|pso")->capture_default_str();
  c_opt->add_option("--budget", optimize.budget, "PSO population x iterations, e.g. 30x100")->capture_default_str();
  c_opt->add_option("--resolution", optimize.resolution, "Grid points per axis")->capture_default_str();
  c_opt->add_option("--bars", optimize.bars, "4 or 6")->capture_default_str()->check(CLI::IsMember({4, 6}));
  c_opt->add_option("--seed", optimize.seed, "Seed")->capture_default_str();
  c_opt->add_option("--threads", optimize.threads, "Evaluation threads")->check(CLI::PositiveNumber);
  c_opt->add_option("--trace", optimize.trace, "Write the best-so-far trace CSV here");
  c_opt->add_option("--out", optimize.out, "Linkage JSON output (default stdout)");

  BaselineArgs baseline;
  auto *c_base = app.add_subcommand("baseline", "Enum+GA budget sweep table");
  c_base->add_option("--shapes", baseline.shapes, "Comma-separated shapes")->capture_default_str();
  c_base->add_option("--budgets", baseline.budgets, "Comma-separated PxG budgets")->capture_default_str();
  c_base->add_option("--bars", baseline.bars, "Comma-separated bar families")->capture_default_str();
  c_base->add_option("--samples", baseline.samples, "Seeds per shape")->capture_default_str()->check(CLI::PositiveNumber);
  c_base->add_option("--seed", baseline.seed, "Base seed")->capture_default_str();
  c_base->add_option("--threads", baseline.threads, "Evaluation threads")->check(CLI::PositiveNumber);
  c_base->add_option("--out", baseline.out, "CSV output (default stdout)");

  SimulateArgs simulate_args;
  auto *c_sim = app.add_subcommand("simulate", "Simulate a linkage JSON file and print the end-effector path");
  c_sim->add_option("--linkage", simulate_args.linkage, "Linkage JSON file")->required()->check(CLI::ExistingFile);
  c_sim->add_option("--steps", simulate_args.steps, "Crank steps per cycle")->capture_default_str()->check(CLI::PositiveNumber);
  c_sim->add_option("--svg", simulate_args.svg, "Also render the mechanism to this SVG");
  c_sim->add_option("--target", simulate_args.target, "Overlay this target shape in the SVG");
  c_sim->add_option("--out", simulate_args.out, "CSV output (default stdout)");

  LiftArgs lift_args;
  auto *c_lift = app.add_subcommand("lift", "Print the symbolic representation bundle of a linkage");
  c_lift->add_option("--linkage", lift_args.linkage, "Linkage JSON file")->required()->check(CLI::ExistingFile);
  c_lift->add_option("--shape", lift_args.shape, "Target shape")->capture_default_str();
  c_lift->add_flag("--no-dr", lift_args.no_dr, "Disable the discrete segmental representation");
  c_lift->add_flag("--no-cl", lift_args.no_cl, "Disable compositional lifting");
  c_lift->add_flag("--json", lift_args.json, "Emit JSON instead of text");
  c_lift->add_option("--seed", lift_args.seed, "Seed for self-intersection retention")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (c_run->parsed()) return cmd_run(run);
    if (c_target->parsed()) return cmd_target(target);
    if (c_opt->parsed()) return cmd_optimize(optimize);
    if (c_base->parsed()) return cmd_baseline(baseline);
    if (c_sim->parsed()) return cmd_simulate(simulate_args);
    if (c_lift->parsed()) return cmd_lift(lift_args);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
