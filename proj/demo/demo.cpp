// Walk-through of the library: simulate a four-bar, lift its trace against a
// target, then let the scripted agents repair an immobile six-bar proposal.

#include <fstream>
#include <iostream>

#include "linksynth/linksynth.hpp"

using namespace linksynth;

int main(int argc, char **argv) {
  const std::string out_dir = argc > 1 ? argv[1] : ".";
  const auto target = make_target(ShapeKind::Ellipse);

  // 1. A crank-rocker with a coupler point, simulated over one crank turn.
  const auto four_bar = optim::four_bar_template().linkage;
  const auto sim = simulate(four_bar);
  std::cout << "four-bar: dof " << dof(four_bar) << ", chamfer to ellipse "
            << fixed(score_trajectory(sim.trajectory(four_bar.target).samples, target.samples).chamfer, 4) << "\n\n";

  // 2. What the agents see instead of raw coordinates.
  std::cout << lifting::to_text(lifting::lift(four_bar, sim, target, {})) << "\n";

  // 3. The closed loop: the first proposal has three cranks (dof 3); the
  //    planner diagnoses overconstraint and the refiner restores one DOF.
  agents::ScriptedBackend backend(7, agents::ellipse_case_rules());
  agents::ExemplarMemory memory;
  agents::LoopConfig cfg;
  cfg.r_max = 4;
  const agents::TaskSpec task{"Trace an ellipse with a single-input linkage.", "ellipse", 4};
  const auto episodes = agents::refinement_loop(task, target, cfg, agents::Backends::all(backend), memory);
  for (const auto &rec : episodes[0].records) {
    std::cout << "round " << rec.round << ": score " << shortest(rec.score) << (rec.accepted ? " (accepted)" : "");
    if (rec.plan) std::cout << "  plan: " << agents::failure_mode_name(rec.plan->failure_mode) << " -> "
                            << rec.plan->suggested_action;
    std::cout << "\n";
  }
  const auto &best = *episodes[0].best;
  const auto counts = count_links_joints(extract_link_graph(best));
  std::cout << "\nbest: " << counts.links << " links, " << counts.joints << " joints, dof " << dof(best) << ", chamfer "
            << shortest(episodes[0].best_score) << "\n";

  const std::string svg = out_dir + "/demo_ellipse.svg";
  harness::write_mechanism_svg(svg, best, simulate(best), target);
  std::cout << "wrote " << svg << "\n";
  return 0;
}
