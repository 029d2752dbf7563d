#include "cli/commands.hpp"

#include <cstdio>
#include <ostream>

#include "vgt/error.hpp"
#include "vgt/io.hpp"
#include "vgt/observation.hpp"

namespace vgt::cli {

namespace {

std::string numbered(const char* prefix, int n, int width, const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*d%s", prefix, width, n, suffix);
  return buf;
}

// Clears genome files left by an earlier run in the same directory.
void clear_genomes(const fs::path& dir) {
  if (!fs::exists(dir)) return;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("genome_", 0) == 0 && entry.path().extension() == ".json") fs::remove(entry.path());
  }
}

Genome load_checked_genome(const fs::path& path, const TrussGraph& truss) {
  Genome genome;
  try {
    genome = io::load_genome(path);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParse) throw;
    throw Error(ErrorCode::kInvalidGenome, e.what());
  }
  const AssignmentReport report = validate_assignment(truss, genome.assignment);
  if (!report.ok()) {
    throw Error(ErrorCode::kInvalidGenome, path.string() + " violates channel invariants");
  }
  if (genome.control.channels() != truss.num_channels()) {
    throw Error(ErrorCode::kInvalidGenome, path.string() + " has the wrong number of control channels");
  }
  return genome;
}

std::string join(const std::vector<int>& xs) {
  std::string s;
  for (size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

}  // namespace

int run_ga(const ExperimentConfig& config, const std::optional<fs::path>& resume, std::ostream& out) {
  if (config.ga.budget < 1) throw Error(ErrorCode::kBudgetZero, "run-ga needs a budget of at least 1");
  const fs::path dir = config.output_dir;
  write_resolved(config, dir);

  GenomeEvaluator evaluator(config.truss, config.objectives, config.physics);
  const EvaluateFn evaluate = [&evaluator](const Genome& g) { return evaluator(g); };

  Rng rng(config.seed);
  std::vector<GenerationRecord> history;
  std::optional<EvolutionState> start;
  if (resume) {
    io::Checkpoint cp = io::checkpoint_from_json(io::read_json(*resume), rng);
    if (cp.state.rng_seed != config.seed) {
      throw Error(ErrorCode::kInvalidConfig, "checkpoint was written with a different seed");
    }
    history = std::move(cp.history);
    start = std::move(cp.state);
  }

  EvolutionHooks hooks;
  hooks.on_generation = [&](const GenerationRecord& rec) { history.push_back(rec); };
  hooks.on_exploration_step = [&](const EvolutionState& state, const Rng& engine) {
    EvolutionState snapshot = state;
    snapshot.rng_seed = config.seed;
    io::write_json(dir / "checkpoints" / numbered("checkpoint_", state.generation, 5, ".json"),
                   io::checkpoint_to_json(snapshot, engine, history));
  };

  EvolutionResult result = run_evolution(config.truss, evaluate, static_cast<int>(config.objectives.size()),
                                         config.ga, rng, hooks, std::move(start));
  result.state.rng_seed = config.seed;

  io::write_text(dir / "history.csv", io::history_csv(history, config.objective_names()));
  io::write_json(dir / "checkpoint.json", io::checkpoint_to_json(result.state, rng, history));
  const fs::path genome_dir = dir / "genomes";
  clear_genomes(genome_dir);
  const auto final = final_population(result.state, config.ga.population, config.ga.crowding);
  for (size_t i = 0; i < final.size(); ++i) {
    io::save_genome(genome_dir / numbered("genome_", static_cast<int>(i), 3, ".json"), final[i]);
  }

  out << "generations: " << history.size() << "\n";
  if (!history.empty()) {
    const auto names = config.objective_names();
    for (size_t m = 0; m < names.size(); ++m) {
      out << "best " << names[m] << ": " << io::format_double(history.back().best[m]) << "\n";
    }
  }
  out << "wrote " << final.size() << " genomes to " << genome_dir.string() << "\n";
  return kExitOk;
}

int run_rl(const ExperimentConfig& config, const std::optional<fs::path>& genome_path,
           const std::string& objective, std::ostream& out) {
  const fs::path dir = config.output_dir;
  Rng rng(config.seed);
  TrainingResult result;
  const auto report = [&out](const UpdateRecord& r) {
    out << "update " << r.update << " mean_return " << io::format_double(r.mean_return) << "\n";
  };

  if (config.rl.environment == RlEnvironmentKind::kBandit) {
    BanditEnvironment env(config.rl.bandit_channels, config.rl.bandit_target, config.rl.bandit_context);
    result = train_ppo(env, config.ppo, rng, report);
  } else {
    const std::optional<fs::path> path = genome_path ? genome_path : config.rl.genome;
    if (!path) throw Error(ErrorCode::kInvalidConfig, "run-rl needs --genome or rl.genome");
    const Genome genome = load_checked_genome(*path, config.truss);
    const ObjectiveSpec& spec = config.objective(objective.empty() ? config.rl.objective : objective);
    const Simulator sim(config.truss, config.physics);
    const SimState initial = sim.settle();
    result = train_ppo(config.truss, genome.assignment, spec, config.physics, initial, config.rl.n_actions,
                       config.ppo, rng, report);
    io::save_genome(dir / "genome.json", genome);
  }

  write_resolved(config, dir);
  io::write_json(dir / "policy.json", policy_to_json(result.policy));
  io::write_text(dir / "rl_history.csv", io::rl_history_csv(result.history));
  out << "wrote " << (dir / "policy.json").string() << "\n";
  return kExitOk;
}

int simulate(const ExperimentConfig& config, const fs::path& genome_path,
             const std::optional<fs::path>& policy_path, const std::string& objective, std::ostream& out) {
  if (!objective.empty()) config.objective(objective);
  const Genome genome = load_checked_genome(genome_path, config.truss);
  GenomeEvaluator evaluator(config.truss, config.objectives, config.physics);

  Trajectory trajectory;
  if (policy_path) {
    const Policy policy = policy_from_json(io::read_json(*policy_path));
    const TrussGraph& graph = config.truss;
    if (policy.architecture().observation_size != observation_size(graph) ||
        policy.architecture().n_channels != graph.num_channels()) {
      throw Error(ErrorCode::kInvalidConfig, "policy does not match the truss");
    }
    Rng rng(config.seed);  // deterministic mode draws nothing
    const Controller controller = [&](int, const SimState& state) {
      const int action = act(policy, observe(graph, state), ActMode::kDeterministic, rng);
      return encode_action(action, graph.num_channels());
    };
    trajectory = evaluator.simulator().rollout(genome.assignment, evaluator.initial_state(), controller,
                                               config.rl.n_actions);
  } else {
    trajectory = evaluator.simulate(genome);
  }

  const fs::path dir = config.output_dir;
  io::save_trajectory(dir / "trajectory.jsonl", trajectory);
  if (trajectory.flagged) {
    out << "flagged: numerical blow-up at physics step " << trajectory.blowup_step << "\n";
    return kExitValidation;
  }
  const auto scores = score_all(config.objectives, config.truss, trajectory);
  for (size_t m = 0; m < scores.size(); ++m) {
    if (!objective.empty() && config.objectives[m].name != objective) continue;
    out << config.objectives[m].name << " " << io::format_double(scores[m]) << "\n";
  }
  return kExitOk;
}

int validate(const fs::path& truss_path, const fs::path& genome_path, std::ostream& out) {
  const TrussGraph truss = io::load_truss(truss_path);
  Genome genome;
  try {
    genome = io::load_genome(genome_path);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParse) throw;
    throw Error(ErrorCode::kInvalidGenome, e.what());
  }
  const AssignmentReport r = validate_assignment(truss, genome.assignment);

  bool ok = true;
  auto line = [&](bool pass, const std::string& name, const std::string& detail = {}) {
    ok = ok && pass;
    out << (pass ? "PASS " : "FAIL ") << name;
    if (!pass && !detail.empty()) out << ": " << detail;
    out << "\n";
  };
  line(r.length_ok, "length",
       std::to_string(genome.assignment.size()) + " labels for " + std::to_string(truss.num_edges()) + " edges");
  line(r.labels_in_range, "labels_in_range", "labels must lie in [0, " + std::to_string(truss.num_channels()) + ")");
  line(r.all_channels_present, "channel_coverage", "missing channels " + join(r.missing_channels));
  line(r.connected, "connectivity", "disconnected channels " + join(r.disconnected_channels));
  line(r.symmetric, "symmetry", "asymmetric edges " + join(r.asymmetric_edges));
  line(genome.control.channels() == truss.num_channels(), "control_shape",
       std::to_string(genome.control.channels()) + " control channels for " +
           std::to_string(truss.num_channels()) + " channels");
  out << (ok ? "OK" : "INVALID") << "\n";
  return ok ? kExitOk : kExitValidation;
}

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->code()) {
      case ErrorCode::kInvalidGenome:
      case ErrorCode::kFlaggedTrajectory:
        return kExitValidation;
      default:
        return kExitConfig;
    }
  }
  return kExitConfig;
}

}  // namespace vgt::cli
