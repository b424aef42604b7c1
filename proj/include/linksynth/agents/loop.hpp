#pragma once

// Agent operations and the closed refinement loop.

#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "linksynth/agents/backend.hpp"
#include "linksynth/agents/memory.hpp"
#include "linksynth/agents/prompts.hpp"
#include "linksynth/agents/report.hpp"
#include "linksynth/format.hpp"
#include "linksynth/lifting/bundle.hpp"
#include "linksynth/linkage_json.hpp"
#include "linksynth/optim/pipeline.hpp"
#include "linksynth/seed.hpp"

namespace linksynth::agents {

// ---- evaluation --------------------------------------------------------------

struct Evaluation {
  Linkage linkage;  // fitted instance
  double score = optim::kInfeasiblePenalty;
  SimulationResult sim;
};

/// Simulation result that never throws: linkages failing validate() come
/// back unbuildable with the validator's diagnostics (and their mobility
/// when the structure allows computing it).
inline SimulationResult safe_simulate(const Linkage &lk, int n_steps = kDefaultSteps) {
  const auto diags = validate(lk);
  if (diags.empty()) return simulate(lk, n_steps);
  SimulationResult r;
  r.diagnostics = diags;
  if (structural_diagnostics(lk).empty()) r.dof = dof(lk);
  return r;
}

/// Fits the candidate's parameters and simulates the fitted instance.
inline Evaluation evaluate_candidate(const Linkage &lk, const Trajectory &target, const optim::FitOptions &fit,
                                     std::uint64_t seed) {
  const auto r = optim::optimize_linkage(lk, target, fit, seed);
  return {r.linkage, r.score, safe_simulate(r.linkage, fit.objective.n_steps)};
}

struct DrawStats {
  int draws = 0;
  int successes = 0;  // parsed and simulated through the full cycle
  void operator+=(const DrawStats &o) {
    draws += o.draws;
    successes += o.successes;
  }
};

// ---- topology agent ----------------------------------------------------------

struct ProposalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TaskSpec {
  std::string intent;
  std::string label;  // target name shown to the agents
  int bars = 4;
};

inline std::string describe_target(const Trajectory &target, const std::string &label) {
  const auto bb = bounding_box(target.samples);
  std::ostringstream os;
  os << "label=" << label << " samples=" << target.size() << " closed=" << (lifting::is_closed(target) ? "yes" : "no")
     << " bbox=[" << shortest(bb.min.x) << "," << shortest(bb.min.y) << "]-[" << shortest(bb.max.x) << ","
     << shortest(bb.max.y) << "]\npoints:";
  const std::size_t stride = std::max<std::size_t>(1, target.size() / 24);
  for (std::size_t i = 0; i < target.size(); i += stride)
    os << " (" << fixed(target.samples[i].x, 3) << "," << fixed(target.samples[i].y, 3) << ")";
  return os.str();
}

inline std::string topology_context(const TaskSpec &task, const Trajectory &target, const ExemplarMemory &memory) {
  std::string ctx = "### Intent\n" + task.intent + "\n### Target\n" + describe_target(target, task.label) + "\n### Memory\n";
  const auto items = memory.items();
  if (items.empty()) ctx += "none\n";
  for (const auto &e : items)
    ctx += "intent: " + e.intent + "\nscore: " + shortest(e.score) + "\nlinkage: " + e.linkage_json + "\n";
  return ctx;
}

struct Proposal {
  Linkage linkage;
  std::string rationale;
  DrawStats stats;
  std::vector<std::string> errors;  // parse errors of rejected draws
};

/// Draws up to `candidates` responses until one parses as a linkage. Parsed
/// but invalid designs are returned as they are so the critic can diagnose
/// them. Throws ProposalError when no draw parses.
inline Proposal topology_agent(const TaskSpec &task, const Trajectory &target, const ExemplarMemory &memory,
                               AgentBackend &backend, int candidates = 3) {
  AgentRequest req{Role::Topology,
                   render(kTopologyPrompt, {{"intent", task.intent}, {"bars", std::to_string(task.bars)},
                                            {"contract", std::string(kJsonContract)}}),
                   topology_context(task, target, memory)};
  Proposal p;
  for (int k = 0; k < candidates; ++k) {
    const auto text = backend.complete(req);
    ++p.stats.draws;
    try {
      const auto json = extract_json_object(text);
      p.linkage = parse_linkage(json);
      if (safe_simulate(p.linkage).buildable) ++p.stats.successes;
      std::string rest(text);
      const auto at = rest.find(json);
      if (at != std::string::npos) rest.erase(at, json.size());
      p.rationale = rest;
      return p;
    } catch (const ParseError &e) {
      p.errors.push_back(e.what());
    }
  }
  throw ProposalError("no parseable linkage after " + std::to_string(candidates) + " draws: " +
                      (p.errors.empty() ? std::string("?") : p.errors.back()));
}

// ---- critic --------------------------------------------------------------------

inline CriticReport critic(const Linkage &lk, double score, const SimulationResult &sim,
                           const lifting::RepresentationBundle &bundle, AgentBackend &backend) {
  CriticReport r;
  const auto &s = bundle.structural;
  r.chamfer = score;
  r.dof = s.dof;
  r.links = s.links;
  r.joints = s.joints;
  r.buildable = sim.buildable;

  r.kinematic_accuracy = "chamfer=" + shortest(score) + " end_effector=" + lk.target;
  if (!sim.buildable) r.kinematic_accuracy += "\nno full-cycle trajectory; the score is the infeasibility penalty";

  r.mobility = "dof=" + std::to_string(s.dof) + " links=" + std::to_string(s.links) +
               " joints=" + std::to_string(s.joints) + " buildable=" + (sim.buildable ? "yes" : "no");
  if (sim.diagnostics.empty()) r.mobility += "\ndiagnostics: none";
  for (const auto &d : sim.diagnostics) r.mobility += "\n" + d.to_string();

  std::string comp;
  if (bundle.segmentation)
    comp += "tokens: segments=" + std::to_string(bundle.segmentation->segments.size()) +
            " entropy_bits=" + shortest(bundle.segmentation->summary.entropy_bits) + "\n";
  if (bundle.spec) {
    comp += "spec: " + lifting::to_text(*bundle.spec) + "\nsatisfied_by_candidate=" +
            (bundle.spec_satisfied.value_or(false) ? "yes" : "no") + "\nprimitives=" +
            std::to_string(bundle.sketch.size()) + " events=" + std::to_string(bundle.events.size());
  } else if (!sim.buildable) {
    comp += "temporal specification absent: mechanism unbuildable, no trajectory to lift";
  } else {
    comp += "temporal specification absent: compositional lifting disabled";
  }
  r.compositionality = comp;

  const std::string ctx = "### Linkage\n" + dump_linkage(lk) + "\n### Evaluation\n" + r.kinematic_accuracy + "\n" +
                          r.mobility + "\n### Bundle\n" + lifting::to_text(bundle);
  r.recommendation = backend.complete({Role::Critic, std::string(kCriticPrompt), ctx});
  if (!sim.diagnostics.empty()) r.recommendation += "\naddress: " + sim.diagnostics.front().to_string();
  if (s.dof != 1) r.recommendation += "\nrestore single-DOF mobility (dof=" + std::to_string(s.dof) + ")";
  return r;
}

// ---- planner -------------------------------------------------------------------

/// Throws PlanParseError when the response names no valid failure mode.
inline RefinementPlan plan(const CriticReport &report, const FailureModeTable &table, AgentBackend &backend,
                           const Linkage &lk) {
  const std::string ctx = "### Critic report\n" + report.to_text() + "### Linkage\n" + dump_linkage(lk);
  return parse_plan(backend.complete({Role::Planner, render(kPlannerPrompt, {{"table", table.to_text()}}), ctx}), table);
}

// ---- refiner -------------------------------------------------------------------

struct RefineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Refinement {
  Linkage linkage;
  DrawStats stats;
  std::vector<std::string> rejections;
};

/// Why an edit is not acceptable, or nullopt when it is (valid, connected,
/// one degree of freedom).
inline std::optional<std::string> compliance_problem(const Linkage &lk) {
  const auto d = validate(lk);
  if (!d.empty()) return d.front().to_string();
  if (const int f = dof(lk); f != 1) return "mobility " + std::to_string(f) + " instead of 1";
  return std::nullopt;
}

/// Asks for an edited linkage up to `candidates` times; throws RefineError
/// when none complies. Pass the plan when the planner is on, otherwise the
/// critic report goes to the refiner directly.
inline Refinement refine(const Linkage &lk, const std::optional<RefinementPlan> &plan_in, const CriticReport &report,
                         const lifting::RepresentationBundle &bundle, AgentBackend &backend, int candidates = 3) {
  std::string ctx = "### Linkage\n" + dump_linkage(lk) + "\n";
  if (plan_in) ctx += "### Plan\n" + plan_in->to_text() + "\n";
  else ctx += "### Critic report\n" + report.to_text();
  ctx += "### Bundle\n" + lifting::to_text(bundle);
  const AgentRequest req{Role::Refiner, render(kRefinerPrompt, {{"contract", std::string(kJsonContract)}}), ctx};

  Refinement out;
  for (int k = 0; k < candidates; ++k) {
    const auto text = backend.complete(req);
    ++out.stats.draws;
    Linkage cand;
    try {
      cand = parse_linkage(extract_json_object(text));
    } catch (const ParseError &e) {
      out.rejections.push_back(std::string("parse: ") + e.what());
      continue;
    }
    if (const auto problem = compliance_problem(cand)) {
      out.rejections.push_back(*problem);
      continue;
    }
    if (simulate(cand).buildable) ++out.stats.successes;
    out.linkage = std::move(cand);
    return out;
  }
  std::string why;
  for (const auto &r : out.rejections) why += (why.empty() ? "" : "; ") + r;
  throw RefineError("no compliant edit in " + std::to_string(candidates) + " draws: " + why);
}

// ---- loop ----------------------------------------------------------------------

struct Backends {
  AgentBackend *topology = nullptr;
  AgentBackend *critic = nullptr;
  AgentBackend *planner = nullptr;
  AgentBackend *refiner = nullptr;

  static Backends all(AgentBackend &b) { return {&b, &b, &b, &b}; }
};

struct LoopConfig {
  int episodes = 1;
  int r_max = 10;
  double epsilon = 0.005;
  int candidates = 3;
  bool planner = true;
  lifting::LiftingConfig lifting{};  // dr / cl toggles live here
  optim::FitOptions fit{};
  std::uint64_t seed = 0;
};

struct IterationRecord {
  int episode = 0;
  int round = 0;  // 0 = proposal
  std::optional<Linkage> candidate;
  double score = optim::kInfeasiblePenalty;
  bool accepted = false;
  double incumbent_score = optim::kInfeasiblePenalty;
  std::optional<nlohmann::json> bundle;  // lifted incumbent this round refined
  std::optional<std::string> report;
  std::optional<RefinementPlan> plan;
  DrawStats stats;
  bool buildable = false;
  bool converged = false;
  std::string note;

  nlohmann::json to_json() const {
    nlohmann::json j{{"episode", episode},
                     {"round", round},
                     {"stage", round == 0 ? "proposal" : "refinement"},
                     {"score", score},
                     {"accepted", accepted},
                     {"incumbent_score", incumbent_score},
                     {"buildable", buildable},
                     {"converged", converged},
                     {"draws", stats.draws},
                     {"semantic_successes", stats.successes}};
    j["linkage"] = candidate ? to_json_linkage(*candidate) : nlohmann::json(nullptr);
    j["bundle"] = bundle ? *bundle : nlohmann::json(nullptr);
    j["report"] = report ? nlohmann::json(*report) : nlohmann::json(nullptr);
    j["plan"] = plan ? plan->to_json() : nlohmann::json(nullptr);
    if (!note.empty()) j["note"] = note;
    return j;
  }

 private:
  static nlohmann::json to_json_linkage(const Linkage &lk) { return linksynth::to_json(lk); }
};

struct EpisodeResult {
  std::vector<IterationRecord> records;
  std::optional<Linkage> best;
  double best_score = optim::kInfeasiblePenalty;
  int best_round = 0;
  std::optional<double> initial_score;  // first buildable iteration
  int initial_round = 0;                // > 0 flags a failed first proposal
  DrawStats stats;
  bool converged = false;
  bool aborted = false;
  std::string abort_reason;

  /// Incumbent score after each record; non-increasing by construction.
  std::vector<double> incumbent_trace() const {
    std::vector<double> t;
    for (const auto &r : records) t.push_back(r.incumbent_score);
    return t;
  }
};

/// N episodes of: propose, fit, stop at epsilon; then up to R_max rounds of
/// lift, critique, plan, refine, fit, keeping the incumbent unless the new
/// design scores strictly better, stopping at epsilon. Transport errors end
/// the episode and keep the records gathered so far.
inline std::vector<EpisodeResult> refinement_loop(const TaskSpec &task, const Trajectory &target,
                                                  const LoopConfig &cfg, const Backends &be, ExemplarMemory &memory) {
  if (cfg.episodes < 1 || cfg.r_max < 0 || cfg.candidates < 1 || !(cfg.epsilon >= 0.0))
    throw std::invalid_argument("refinement_loop: invalid configuration");
  if (!be.topology || !be.critic || !be.refiner || (cfg.planner && !be.planner))
    throw std::invalid_argument("refinement_loop: missing backend");
  const auto table = FailureModeTable::standard();
  std::vector<EpisodeResult> out;

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    EpisodeResult res;
    auto fit_seed = [&](int round) {
      return splitmix64(cfg.seed + 0x1000u * static_cast<std::uint64_t>(ep) + static_cast<std::uint64_t>(round));
    };
    auto note_initial = [&](const IterationRecord &rec) {
      if (!res.initial_score && rec.buildable) {
        res.initial_score = rec.score;
        res.initial_round = rec.round;
      }
    };
    try {
      IterationRecord rec;
      rec.episode = ep;
      Proposal prop;
      try {
        prop = topology_agent(task, target, memory, *be.topology, cfg.candidates);
      } catch (const ProposalError &e) {
        rec.stats.draws = cfg.candidates;
        rec.note = e.what();
        res.stats += rec.stats;
        res.records.push_back(std::move(rec));
        out.push_back(std::move(res));
        continue;
      }
      rec.stats = prop.stats;
      res.stats += prop.stats;
      Evaluation inc = evaluate_candidate(prop.linkage, target, cfg.fit, fit_seed(0));
      rec.candidate = inc.linkage;
      rec.score = rec.incumbent_score = inc.score;
      rec.accepted = true;
      rec.buildable = inc.sim.buildable;
      note_initial(rec);
      res.best = inc.linkage;
      res.best_score = inc.score;
      rec.converged = res.converged = inc.score <= cfg.epsilon;
      res.records.push_back(rec);

      for (int round = 1; round <= cfg.r_max && !res.converged; ++round) {
        IterationRecord it;
        it.episode = ep;
        it.round = round;
        it.incumbent_score = res.best_score;
        const auto bundle = lifting::lift(inc.linkage, inc.sim, target, cfg.lifting);
        it.bundle = lifting::to_json(bundle);
        const auto report = critic(inc.linkage, inc.score, inc.sim, bundle, *be.critic);
        it.report = report.to_text();

        std::optional<RefinementPlan> pl;
        if (cfg.planner) {
          for (int k = 0; k < cfg.candidates && !pl; ++k) {
            try {
              pl = plan(report, table, *be.planner, inc.linkage);
            } catch (const PlanParseError &e) {
              it.note = std::string("planner: ") + e.what();
            }
          }
          if (!pl) {
            res.records.push_back(std::move(it));
            continue;
          }
          it.note.clear();
          it.plan = pl;
        }

        Refinement edit;
        try {
          edit = refine(inc.linkage, pl, report, bundle, *be.refiner, cfg.candidates);
        } catch (const RefineError &e) {
          it.stats.draws = cfg.candidates;
          res.stats += it.stats;
          it.note = e.what();
          res.records.push_back(std::move(it));
          continue;
        }
        it.stats = edit.stats;
        res.stats += edit.stats;
        Evaluation next = evaluate_candidate(edit.linkage, target, cfg.fit, fit_seed(round));
        it.candidate = next.linkage;
        it.score = next.score;
        it.buildable = next.sim.buildable;
        note_initial(it);
        if (next.score < res.best_score) {
          it.accepted = true;
          res.best_score = next.score;
          res.best = next.linkage;
          res.best_round = round;
          inc = std::move(next);
        }
        it.incumbent_score = res.best_score;
        it.converged = res.converged = res.best_score <= cfg.epsilon;
        res.records.push_back(std::move(it));
      }
    } catch (const TransportError &e) {
      res.aborted = true;
      res.abort_reason = e.what();
    }
    if (res.best && res.best_score < optim::kInfeasiblePenalty)
      memory.add({task.intent, dump_linkage(*res.best), res.best_score});
    out.push_back(std::move(res));
  }
  return out;
}

/// One JSON object per iteration record.
inline void write_history_jsonl(std::ostream &os, const std::vector<EpisodeResult> &episodes) {
  for (const auto &ep : episodes) {
    for (const auto &r : ep.records) os << r.to_json().dump() << "\n";
    if (ep.aborted)
      os << nlohmann::json{{"episode", ep.records.empty() ? 0 : ep.records.front().episode},
                           {"stage", "aborted"},
                           {"note", ep.abort_reason}}
                .dump()
         << "\n";
  }
}

}  // namespace linksynth::agents
