#include "vgt/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vgt/error.hpp"
#include "vgt/operators.hpp"
#include "vgt/parallel.hpp"

namespace vgt {

int EvolutionConfig::survivors() const {
  const int n = static_cast<int>(std::lround(population * survivor_fraction));
  return std::clamp(n, 1, population);
}

void EvolutionConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidConfig, msg); };
  if (population < 1) fail("population must be at least 1");
  if (exploitation_length < 1) fail("exploitation_length must be at least 1");
  if (budget < 0) fail("budget must be non-negative");
  if (!(survivor_fraction > 0.0 && survivor_fraction <= 1.0)) fail("survivor_fraction must lie in (0, 1]");
  auto prob = [&](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) fail(std::string(name) + " must lie in [0, 1]");
  };
  prob(assignment_mutation_prob, "assignment_mutation_prob");
  prob(control_mutation_prob, "control_mutation_prob");
  if (!(control_flip_prob > 0.0 && control_flip_prob <= 1.0)) fail("control_flip_prob must lie in (0, 1]");
  if (control_steps < 1) fail("control_steps must be at least 1");
}

Genome random_genome(const TrussGraph& graph, int control_steps, Rng& rng) {
  Genome g;
  g.assignment = initialize_assignment(graph, rng);
  g.control = ControlSequence::random(control_steps, graph.num_channels(), rng);
  return g;
}

namespace {

class Driver {
 public:
  Driver(const TrussGraph& graph, const EvaluateFn& evaluate, int n_objectives,
         const EvolutionConfig& config, Rng& rng)
      : graph_(graph), evaluate_(evaluate), n_objectives_(n_objectives), config_(config), rng_(rng) {}

  std::vector<Genome> fresh_pool() {
    std::vector<Genome> pool;
    pool.reserve(static_cast<size_t>(config_.population));
    for (int i = 0; i < config_.population; ++i) {
      pool.push_back(random_genome(graph_, config_.control_steps, rng_));
    }
    return pool;
  }

  void rate(std::vector<Genome>& pool) const {
    std::vector<int> todo;
    for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
      if (!pool[static_cast<size_t>(i)].rating) todo.push_back(i);
    }
    parallel_for(static_cast<int>(todo.size()), config_.workers, [&](int k) {
      Genome& g = pool[static_cast<size_t>(todo[static_cast<size_t>(k)])];
      RatingVector r;
      try {
        r = evaluate_(g);
      } catch (const Error&) {
        r.assign(static_cast<size_t>(n_objectives_), kFailedRating);
      }
      if (static_cast<int>(r.size()) != n_objectives_) {
        throw Error(ErrorCode::kInvalidConfig, "evaluator returned the wrong number of ratings");
      }
      for (double& x : r) {
        if (!std::isfinite(x) || x < kFailedRating) x = kFailedRating;
      }
      g.rating = std::move(r);
    });
  }

  // Failed genomes never survive selection.
  std::vector<Genome> survivors(const std::vector<Genome>& pool, int keep) const {
    std::vector<Genome> viable;
    for (const Genome& g : pool) {
      if (!is_failed_rating(*g.rating)) viable.push_back(g);
    }
    return select(viable, std::min<int>(keep, static_cast<int>(viable.size())), config_.crowding);
  }

  std::vector<Genome> refill(const std::vector<Genome>& parents) {
    if (parents.empty()) return fresh_pool();
    std::vector<Genome> pool = parents;
    std::bernoulli_distribution mutate_assignment_coin(config_.assignment_mutation_prob);
    std::bernoulli_distribution mutate_control_coin(config_.control_mutation_prob);
    for (size_t i = 0; pool.size() < static_cast<size_t>(config_.population); ++i) {
      Genome child = parents[i % parents.size()];
      bool changed = false;
      if (mutate_assignment_coin(rng_)) {
        try {
          child.assignment = mutate_assignment(graph_, child.assignment, rng_);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kNoValidMutation) throw;
          child.assignment = initialize_assignment(graph_, rng_);
        }
        changed = true;
      }
      if (mutate_control_coin(rng_)) {
        child.control = mutate_control(child.control, rng_, config_.control_flip_prob);
        changed = true;
      }
      if (changed) child.rating.reset();
      pool.push_back(std::move(child));
    }
    return pool;
  }

  void audit(const EvolutionState& state) const {
    for (const auto* pool : {&state.evolving, &state.elite}) {
      for (const Genome& g : *pool) {
        if (!validate_assignment(graph_, g.assignment).ok()) {
          throw Error(ErrorCode::kInvalidGenome, "audit: genome violates channel invariants");
        }
        if (g.control.channels() != graph_.num_channels() ||
            g.control.steps() != config_.control_steps) {
          throw Error(ErrorCode::kInvalidGenome, "audit: control sequence has the wrong shape");
        }
      }
    }
  }

  GenerationRecord record(const EvolutionState& state) const {
    GenerationRecord rec;
    rec.generation = state.generation;
    rec.best.assign(static_cast<size_t>(n_objectives_), -std::numeric_limits<double>::infinity());
    rec.mean.assign(static_cast<size_t>(n_objectives_), 0.0);
    for (const auto* pool : {&state.evolving, &state.elite}) {
      for (const Genome& g : *pool) {
        for (int m = 0; m < n_objectives_; ++m) {
          rec.best[static_cast<size_t>(m)] = std::max(rec.best[static_cast<size_t>(m)], (*g.rating)[static_cast<size_t>(m)]);
        }
      }
    }
    int counted = 0;
    for (const Genome& g : state.evolving) {
      if (is_failed_rating(*g.rating)) continue;
      ++counted;
      for (int m = 0; m < n_objectives_; ++m) rec.mean[static_cast<size_t>(m)] += (*g.rating)[static_cast<size_t>(m)];
    }
    for (double& x : rec.mean) x = counted > 0 ? x / counted : kFailedRating;
    return rec;
  }

 private:
  const TrussGraph& graph_;
  const EvaluateFn& evaluate_;
  int n_objectives_;
  const EvolutionConfig& config_;
  Rng& rng_;
};

}  // namespace

EvolutionResult run_evolution(const TrussGraph& graph, const EvaluateFn& evaluate, int n_objectives,
                              const EvolutionConfig& config, Rng& rng, const EvolutionHooks& hooks,
                              std::optional<EvolutionState> resume) {
  config.validate();
  if (n_objectives < 1) throw Error(ErrorCode::kInvalidConfig, "need at least one objective");
  Driver driver(graph, evaluate, n_objectives, config, rng);
  EvolutionResult result;
  EvolutionState& state = result.state;

  auto emit = [&] {
    if (config.audit) driver.audit(state);
    result.history.push_back(driver.record(state));
    if (hooks.on_generation) hooks.on_generation(result.history.back());
  };

  if (resume) {
    state = std::move(*resume);
    for (const auto* pool : {&state.evolving, &state.elite}) {
      for (const Genome& g : *pool) {
        if (!g.rating) throw Error(ErrorCode::kUnratedGenome, "resumed pools must be rated");
      }
    }
  } else {
    state.evolving = driver.fresh_pool();
    driver.rate(state.evolving);
    emit();
  }

  const int keep = config.survivors();
  while (state.generation < config.budget) {
    ++state.generation;
    state.evolving = driver.refill(driver.survivors(state.evolving, keep));
    driver.rate(state.evolving);
    ++state.loop_generation;

    if (state.loop_generation >= config.exploitation_length) {
      std::vector<Genome> merged = state.elite;
      for (Genome& g : driver.survivors(state.evolving, keep)) merged.push_back(std::move(g));
      if (static_cast<int>(merged.size()) > config.population) {
        merged = select(merged, config.population, config.crowding);
      }
      state.elite = std::move(merged);
      if (static_cast<int>(state.elite.size()) >= config.population) {
        state.evolving = std::move(state.elite);
        state.elite.clear();
      } else {
        state.evolving = driver.fresh_pool();
        driver.rate(state.evolving);
      }
      state.loop_generation = 0;
      emit();
      if (hooks.on_exploration_step) hooks.on_exploration_step(state, rng);
      continue;
    }
    emit();
  }
  return result;
}

std::vector<Genome> final_population(const EvolutionState& state, int keep,
                                     CrowdingPreference preference) {
  std::vector<Genome> all;
  for (const auto* pool : {&state.evolving, &state.elite}) {
    for (const Genome& g : *pool) {
      if (g.rating && !is_failed_rating(*g.rating)) all.push_back(g);
    }
  }
  return select(all, std::min<int>(keep, static_cast<int>(all.size())), preference);
}

GenomeEvaluator::GenomeEvaluator(const TrussGraph& graph, std::vector<ObjectiveSpec> objectives,
                                 PhysicsConfig physics)
    : sim_(graph, std::move(physics)), objectives_(std::move(objectives)), initial_(sim_.settle()) {}

GenomeEvaluator::GenomeEvaluator(const TrussGraph& graph, std::vector<ObjectiveSpec> objectives,
                                 PhysicsConfig physics, SimState initial)
    : sim_(graph, std::move(physics)), objectives_(std::move(objectives)), initial_(std::move(initial)) {}

Trajectory GenomeEvaluator::simulate(const Genome& genome) const {
  return sim_.rollout(genome.assignment, initial_, sequence_controller(genome.control),
                      genome.control.steps());
}

RatingVector GenomeEvaluator::operator()(const Genome& genome) const {
  try {
    return score_all(objectives_, sim_.graph(), simulate(genome));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateBeam) throw;
    return RatingVector(objectives_.size(), kFailedRating);
  }
}

}  // namespace vgt
