#include "cli/experiment.hpp"

#include <cstdlib>
#include <numbers>
#include <set>

#include "vgt/error.hpp"
#include "vgt/io.hpp"

namespace vgt::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::kInvalidConfig, msg); }

void expect_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) fail(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) fail("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

constexpr double kDegree = std::numbers::pi / 180.0;

ObjectiveSpec objective_from_json(const json& j) {
  expect_keys(j, {"name", "kind", "target_angle_deg", "lower_mode"}, "objective");
  ObjectiveSpec spec;
  spec.kind = objective_kind_from_string(j.at("kind").get<std::string>());
  spec.name = j.value("name", std::string(to_string(spec.kind)));
  if (uses_target_angle(spec.kind)) {
    if (!j.contains("target_angle_deg")) fail("objective '" + spec.name + "' needs target_angle_deg");
    spec.target_angle = j.at("target_angle_deg").get<double>() * kDegree;
  }
  const std::string mode = j.value("lower_mode", std::string("minimum"));
  if (mode == "minimum") {
    spec.lower_mode = LowerMode::kMinimum;
  } else if (mode == "final") {
    spec.lower_mode = LowerMode::kFinal;
  } else {
    fail("lower_mode must be 'minimum' or 'final'");
  }
  return spec;
}

json objective_to_json(const ObjectiveSpec& spec, double degrees) {
  json j = {{"name", spec.name}, {"kind", std::string(to_string(spec.kind))}};
  if (uses_target_angle(spec.kind)) j["target_angle_deg"] = degrees;
  if (spec.kind == ObjectiveKind::kLower) {
    j["lower_mode"] = spec.lower_mode == LowerMode::kFinal ? "final" : "minimum";
  }
  return j;
}

void ga_from_json(const json& j, EvolutionConfig& ga) {
  expect_keys(j,
              {"population", "exploitation_length", "budget", "survivor_fraction",
               "assignment_mutation_prob", "control_mutation_prob", "control_flip_prob",
               "control_steps", "crowding", "audit"},
              "ga");
  read(j, "population", ga.population);
  read(j, "exploitation_length", ga.exploitation_length);
  read(j, "budget", ga.budget);
  read(j, "survivor_fraction", ga.survivor_fraction);
  read(j, "assignment_mutation_prob", ga.assignment_mutation_prob);
  read(j, "control_mutation_prob", ga.control_mutation_prob);
  read(j, "control_flip_prob", ga.control_flip_prob);
  read(j, "control_steps", ga.control_steps);
  read(j, "audit", ga.audit);
  if (j.contains("crowding")) {
    const auto c = j.at("crowding").get<std::string>();
    if (c == "prefer_high") {
      ga.crowding = CrowdingPreference::kPreferHigh;
    } else if (c == "prefer_low") {
      ga.crowding = CrowdingPreference::kPreferLow;
    } else {
      fail("crowding must be 'prefer_high' or 'prefer_low'");
    }
  }
}

json ga_to_json(const EvolutionConfig& ga) {
  return {{"population", ga.population},
          {"exploitation_length", ga.exploitation_length},
          {"budget", ga.budget},
          {"survivor_fraction", ga.survivor_fraction},
          {"assignment_mutation_prob", ga.assignment_mutation_prob},
          {"control_mutation_prob", ga.control_mutation_prob},
          {"control_flip_prob", ga.control_flip_prob},
          {"control_steps", ga.control_steps},
          {"crowding", ga.crowding == CrowdingPreference::kPreferHigh ? "prefer_high" : "prefer_low"},
          {"audit", ga.audit}};
}

void ppo_from_json(const json& j, PpoConfig& ppo) {
  expect_keys(j,
              {"updates", "rollout_steps", "epochs", "minibatch_size", "clip", "gamma", "gae_lambda",
               "learning_rate", "entropy_coef", "value_coef", "max_grad_norm",
               "normalize_advantages", "hidden", "position_noise", "failure_reward"},
              "ppo");
  read(j, "updates", ppo.updates);
  read(j, "rollout_steps", ppo.rollout_steps);
  read(j, "epochs", ppo.epochs);
  read(j, "minibatch_size", ppo.minibatch_size);
  read(j, "clip", ppo.clip);
  read(j, "gamma", ppo.gamma);
  read(j, "gae_lambda", ppo.gae_lambda);
  read(j, "learning_rate", ppo.learning_rate);
  read(j, "entropy_coef", ppo.entropy_coef);
  read(j, "value_coef", ppo.value_coef);
  read(j, "max_grad_norm", ppo.max_grad_norm);
  read(j, "normalize_advantages", ppo.normalize_advantages);
  read(j, "hidden", ppo.hidden);
  read(j, "position_noise", ppo.position_noise);
  read(j, "failure_reward", ppo.failure_reward);
}

json ppo_to_json(const PpoConfig& ppo) {
  return {{"updates", ppo.updates},
          {"rollout_steps", ppo.rollout_steps},
          {"epochs", ppo.epochs},
          {"minibatch_size", ppo.minibatch_size},
          {"clip", ppo.clip},
          {"gamma", ppo.gamma},
          {"gae_lambda", ppo.gae_lambda},
          {"learning_rate", ppo.learning_rate},
          {"entropy_coef", ppo.entropy_coef},
          {"value_coef", ppo.value_coef},
          {"max_grad_norm", ppo.max_grad_norm},
          {"normalize_advantages", ppo.normalize_advantages},
          {"hidden", ppo.hidden},
          {"position_noise", ppo.position_noise},
          {"failure_reward", ppo.failure_reward}};
}

void rl_from_json(const json& j, const fs::path& base, RlSettings& rl) {
  expect_keys(j, {"environment", "objective", "genome", "n_actions", "bandit"}, "rl");
  const std::string env = j.value("environment", std::string("truss"));
  if (env == "truss") {
    rl.environment = RlEnvironmentKind::kTruss;
  } else if (env == "bandit") {
    rl.environment = RlEnvironmentKind::kBandit;
  } else {
    fail("rl.environment must be 'truss' or 'bandit'");
  }
  read(j, "objective", rl.objective);
  if (j.contains("genome") && !j.at("genome").is_null()) rl.genome = base / j.at("genome").get<std::string>();
  read(j, "n_actions", rl.n_actions);
  if (j.contains("bandit")) {
    const json& b = j.at("bandit");
    expect_keys(b, {"n_channels", "target", "context_size"}, "rl.bandit");
    read(b, "n_channels", rl.bandit_channels);
    read(b, "target", rl.bandit_target);
    read(b, "context_size", rl.bandit_context);
  }
  if (rl.n_actions < 1) fail("rl.n_actions must be at least 1");
}

json rl_to_json(const RlSettings& rl) {
  json j = {{"environment", rl.environment == RlEnvironmentKind::kTruss ? "truss" : "bandit"},
            {"objective", rl.objective},
            {"n_actions", rl.n_actions},
            {"bandit",
             {{"n_channels", rl.bandit_channels},
              {"target", rl.bandit_target},
              {"context_size", rl.bandit_context}}}};
  j["genome"] = rl.genome ? json(fs::absolute(*rl.genome).lexically_normal().string()) : json(nullptr);
  return j;
}

int workers_from_environment() {
  const char* env = std::getenv("VGT_WORKERS");
  if (env == nullptr || *env == '\0') return -1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 0) fail("VGT_WORKERS must be a non-negative integer");
  return static_cast<int>(n);
}

}  // namespace

std::vector<std::string> ExperimentConfig::objective_names() const {
  std::vector<std::string> names;
  for (const auto& o : objectives) names.push_back(o.name);
  return names;
}

const ObjectiveSpec& ExperimentConfig::objective(const std::string& name) const {
  if (objectives.empty()) fail("no objectives configured");
  if (name.empty()) return objectives.front();
  for (const auto& o : objectives) {
    if (o.name == name) return o;
  }
  fail("unknown objective '" + name + "'");
}

ExperimentConfig experiment_from_json(const json& j, const fs::path& base_dir, const Overrides& overrides) {
  expect_keys(j,
              {"truss", "objectives", "ga", "physics", "physics_file", "ppo", "rl", "seed",
               "output_dir", "workers"},
              "experiment");
  ExperimentConfig cfg;
  try {
    cfg.truss_path = base_dir / j.at("truss").get<std::string>();
    for (const auto& o : j.at("objectives")) {
      cfg.objectives.push_back(objective_from_json(o));
      cfg.target_degrees.push_back(o.value("target_angle_deg", 0.0));
    }
    if (j.contains("ga")) ga_from_json(j.at("ga"), cfg.ga);
    if (j.contains("physics_file")) {
      cfg.physics = io::physics_from_text(io::read_text(base_dir / j.at("physics_file").get<std::string>()));
    }
    if (j.contains("physics")) cfg.physics = io::physics_from_json(j.at("physics"), cfg.physics);
    if (j.contains("ppo")) ppo_from_json(j.at("ppo"), cfg.ppo);
    cfg.rl.n_actions = cfg.ga.control_steps;
    if (j.contains("rl")) rl_from_json(j.at("rl"), base_dir, cfg.rl);
    read(j, "seed", cfg.seed);
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    read(j, "workers", cfg.workers);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("experiment: ") + e.what());
  }

  if (cfg.objectives.empty()) fail("at least one objective is required");
  std::set<std::string> seen;
  for (const auto& o : cfg.objectives) {
    if (!seen.insert(o.name).second) fail("duplicate objective name '" + o.name + "'");
  }

  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.out) cfg.output_dir = *overrides.out;
  if (overrides.workers) {
    cfg.workers = *overrides.workers;
  } else if (const int env = workers_from_environment(); env >= 0) {
    cfg.workers = env;
  }
  if (cfg.workers < 0) fail("workers must be non-negative");
  cfg.ga.workers = cfg.workers;
  cfg.ppo.workers = cfg.workers;

  cfg.ga.validate();
  cfg.physics.validate();
  cfg.ppo.validate();
  cfg.truss = io::load_truss(cfg.truss_path);
  return cfg;
}

ExperimentConfig load_experiment(const fs::path& path, const Overrides& overrides) {
  const json j = io::read_json(path);
  return experiment_from_json(j, path.parent_path(), overrides);
}

json resolved_json(const ExperimentConfig& config, const std::string& truss_file) {
  json objectives = json::array();
  for (size_t i = 0; i < config.objectives.size(); ++i) {
    objectives.push_back(objective_to_json(config.objectives[i], config.target_degrees[i]));
  }
  return {{"truss", truss_file},
          {"objectives", objectives},
          {"ga", ga_to_json(config.ga)},
          {"physics", io::physics_to_json(config.physics)},
          {"ppo", ppo_to_json(config.ppo)},
          {"rl", rl_to_json(config.rl)},
          {"seed", config.seed},
          {"output_dir", config.output_dir.string()},
          {"workers", config.workers}};
}

void write_resolved(const ExperimentConfig& config, const fs::path& dir) {
  io::save_truss(dir / "truss.json", config.truss);
  io::write_json(dir / "resolved_config.json", resolved_json(config, "truss.json"));
}

}  // namespace vgt::cli
