#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "vgt/genome.hpp"
#include "vgt/nsga2.hpp"
#include "vgt/objectives.hpp"
#include "vgt/random.hpp"
#include "vgt/sim.hpp"
#include "vgt/truss_graph.hpp"

namespace vgt {

struct EvolutionConfig {
  int population = 16;           // n_g
  int exploitation_length = 20;  // generations per exploitation loop
  int budget = 100;              // generations after generation 0
  double survivor_fraction = 0.5;
  double assignment_mutation_prob = 0.5;
  double control_mutation_prob = 1.0;
  double control_flip_prob = 0.05;
  int control_steps = 20;  // n_s
  CrowdingPreference crowding = CrowdingPreference::kPreferHigh;
  int workers = 1;
#ifdef NDEBUG
  bool audit = false;
#else
  bool audit = true;
#endif

  int survivors() const;
  void validate() const;
};

// Pools between generations. The evolving pool is always fully rated.
struct EvolutionState {
  std::vector<Genome> evolving;
  std::vector<Genome> elite;
  int generation = 0;
  int loop_generation = 0;  // generations completed in the current exploitation loop
  std::uint64_t rng_seed = 0;
};

struct GenerationRecord {
  int generation = 0;
  std::vector<double> best;  // per objective, over elite and evolving pools
  std::vector<double> mean;  // per objective, evolving pool, failed genomes excluded
};

using EvaluateFn = std::function<RatingVector(const Genome&)>;

struct EvolutionHooks {
  // Called after every exploration step, once that generation's record has
  // been emitted, with the state and generator a resumed run continues from.
  std::function<void(const EvolutionState&, const Rng&)> on_exploration_step;
  std::function<void(const GenerationRecord&)> on_generation;
};

struct EvolutionResult {
  EvolutionState state;
  std::vector<GenerationRecord> history;
};

// Nested exploration / exploitation loop.
//
// Generation 0 fills and rates the evolving pool. Each later generation keeps
// the NSGA-II survivors and refills the pool with mutated copies of them.
// After exploitation_length generations the survivors join the elite pool
// (truncated back to the population size by selection); a full elite pool
// then becomes the next evolving pool and is emptied, otherwise a fresh
// random pool is drawn.
//
// `evaluate` must be a pure function of the genome; it is called from
// `config.workers` threads and results are gathered by index, so the run is
// reproducible regardless of worker count. With `resume`, the loop continues
// from that state and `rng` must be the generator saved alongside it.
EvolutionResult run_evolution(const TrussGraph& graph, const EvaluateFn& evaluate, int n_objectives,
                              const EvolutionConfig& config, Rng& rng,
                              const EvolutionHooks& hooks = {},
                              std::optional<EvolutionState> resume = std::nullopt);

// Best `keep` genomes across both pools, failed genomes excluded.
std::vector<Genome> final_population(const EvolutionState& state, int keep,
                                     CrowdingPreference preference = CrowdingPreference::kPreferHigh);

Genome random_genome(const TrussGraph& graph, int control_steps, Rng& rng);

// Simulates genomes from a shared settled start and scores them.
class GenomeEvaluator {
 public:
  // Settles the graph once to obtain the start state.
  GenomeEvaluator(const TrussGraph& graph, std::vector<ObjectiveSpec> objectives,
                  PhysicsConfig physics);
  GenomeEvaluator(const TrussGraph& graph, std::vector<ObjectiveSpec> objectives,
                  PhysicsConfig physics, SimState initial);

  // kFailedRating for every objective if the simulation blows up or a
  // score cannot be computed.
  RatingVector operator()(const Genome& genome) const;

  Trajectory simulate(const Genome& genome) const;

  const SimState& initial_state() const { return initial_; }
  const Simulator& simulator() const { return sim_; }
  const std::vector<ObjectiveSpec>& objectives() const { return objectives_; }

 private:
  Simulator sim_;
  std::vector<ObjectiveSpec> objectives_;
  SimState initial_;
};

}  // namespace vgt
