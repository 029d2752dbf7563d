#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vgt/evolution.hpp"
#include "vgt/objectives.hpp"
#include "vgt/ppo.hpp"
#include "vgt/sim.hpp"
#include "vgt/truss_graph.hpp"

namespace vgt::cli {

namespace fs = std::filesystem;

enum class RlEnvironmentKind { kTruss, kBandit };

struct RlSettings {
  RlEnvironmentKind environment = RlEnvironmentKind::kTruss;
  std::string objective;        // empty: first objective
  std::optional<fs::path> genome;
  int n_actions = 20;
  int bandit_channels = 3;
  int bandit_target = 5;
  int bandit_context = 4;
};

struct ExperimentConfig {
  fs::path truss_path;
  TrussGraph truss;
  std::vector<ObjectiveSpec> objectives;
  std::vector<double> target_degrees;  // as written, so the resolved copy is exact
  EvolutionConfig ga;
  PhysicsConfig physics;
  PpoConfig ppo;
  RlSettings rl;
  std::uint64_t seed = 0;
  fs::path output_dir = "out";
  int workers = 0;  // 0: all cores

  std::vector<std::string> objective_names() const;
  const ObjectiveSpec& objective(const std::string& name) const;
};

// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<fs::path> out;
};

// Parses an experiment file. Relative paths inside it resolve against the
// file's directory. Worker count precedence: --workers, then VGT_WORKERS,
// then the file. Throws InvalidConfig, Parse or Io errors.
ExperimentConfig load_experiment(const fs::path& path, const Overrides& overrides = {});
ExperimentConfig experiment_from_json(const nlohmann::json& j, const fs::path& base_dir,
                                      const Overrides& overrides = {});

// Every parameter spelled out, with the truss referenced as `truss_file`.
nlohmann::json resolved_json(const ExperimentConfig& config, const std::string& truss_file);

// Writes resolved_config.json and the truss copy it references.
void write_resolved(const ExperimentConfig& config, const fs::path& dir);

}  // namespace vgt::cli
