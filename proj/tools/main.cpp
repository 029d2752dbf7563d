#include <CLI11.hpp>

#include <iostream>

#include "cli/commands.hpp"
#include "cli/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;

  void attach(CLI::App* cmd, bool config_required) {
    auto* opt = cmd->add_option("--config", config, "Experiment configuration (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--seed", seed, "Random seed (overrides the config)");
    cmd->add_option("--workers", workers, "Worker threads, 0 for all cores");
    cmd->add_option("--out", out, "Output directory");
  }

  vgt::cli::ExperimentConfig load() const {
    vgt::cli::Overrides o;
    o.seed = seed;
    o.workers = workers;
    if (out) o.out = *out;
    return vgt::cli::load_experiment(config, o);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Channel design and control for variable geometry truss robots"};
  app.require_subcommand(1);

  CommonFlags ga_flags;
  std::optional<std::string> resume;
  auto* ga = app.add_subcommand("run-ga", "Evolve channel assignments and control sequences");
  ga_flags.attach(ga, true);
  ga->add_option("--resume", resume, "Continue from a checkpoint written by an earlier run");

  CommonFlags rl_flags;
  std::optional<std::string> rl_genome;
  std::string rl_objective;
  auto* rl = app.add_subcommand("run-rl", "Train a closed-loop policy on a channel design");
  rl_flags.attach(rl, true);
  rl->add_option("--genome", rl_genome, "Genome file providing the channel assignment");
  rl->add_option("--objective", rl_objective, "Objective name (default: rl.objective or the first)");

  CommonFlags sim_flags;
  std::string sim_genome;
  std::optional<std::string> sim_policy;
  std::string sim_objective;
  auto* sim = app.add_subcommand("simulate", "Simulate a genome and print its scores");
  sim_flags.attach(sim, true);
  sim->add_option("--genome", sim_genome, "Genome file")->required();
  sim->add_option("--policy", sim_policy, "Policy checkpoint for closed-loop control");
  sim->add_option("--objective", sim_objective, "Print only this objective");

  CommonFlags val_flags;
  std::string val_truss;
  std::string val_genome;
  auto* val = app.add_subcommand("validate", "Check a genome against the channel invariants");
  val_flags.attach(val, false);
  val->add_option("--truss", val_truss, "Truss file (default: the config's truss)");
  val->add_option("--genome", val_genome, "Genome file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : vgt::cli::kExitConfig;
  }

  try {
    if (*ga) {
      std::optional<std::filesystem::path> r;
      if (resume) r = *resume;
      return vgt::cli::run_ga(ga_flags.load(), r, std::cout);
    }
    if (*rl) {
      std::optional<std::filesystem::path> g;
      if (rl_genome) g = *rl_genome;
      return vgt::cli::run_rl(rl_flags.load(), g, rl_objective, std::cout);
    }
    if (*sim) {
      std::optional<std::filesystem::path> p;
      if (sim_policy) p = *sim_policy;
      return vgt::cli::simulate(sim_flags.load(), sim_genome, p, sim_objective, std::cout);
    }
    if (*val) {
      std::filesystem::path truss = val_truss;
      if (truss.empty()) {
        if (val_flags.config.empty()) {
          std::cerr << "error: validate needs --truss or --config\n";
          return vgt::cli::kExitConfig;
        }
        truss = val_flags.load().truss_path;
      }
      return vgt::cli::validate(truss, val_genome, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return vgt::cli::exit_code_for(e);
  }
  return vgt::cli::kExitConfig;
}
