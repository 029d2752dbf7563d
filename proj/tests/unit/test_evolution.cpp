#include <gtest/gtest.h>

#include <atomic>

#include "support/expect_error.hpp"
#include "support/test_support.hpp"
#include "vgt/evolution.hpp"
#include "vgt/io.hpp"

namespace vgt {
namespace {

// Cheap deterministic objectives over the genome itself.
RatingVector synthetic(const Genome& g) {
  double zeros = 0, ones = 0, on = 0, pattern = 0;
  for (int c : g.assignment.channels) (c == 0 ? zeros : ones) += 1;
  for (int i = 0; i < g.control.size(); ++i) {
    on += g.control.bit(i);
    pattern += g.control.bit(i) == (i % 2 == 0) ? 1 : 0;
  }
  return {zeros, on, pattern - 0.5 * ones};
}

class EvolutionTest : public ::testing::Test {
 protected:
  TrussGraph table = io::load_truss(testing::data_path("table.json"));
  EvolutionConfig config = [] {
    EvolutionConfig c;
    c.population = 8;
    c.exploitation_length = 5;
    c.budget = 23;
    c.control_steps = 6;
    c.audit = true;
    return c;
  }();
};

TEST_F(EvolutionTest, BudgetZeroRatesOnePool) {
  config.budget = 0;
  Rng rng(1);
  const auto result = run_evolution(table, synthetic, 3, config, rng);
  ASSERT_EQ(result.history.size(), 1u);
  EXPECT_EQ(result.state.generation, 0);
  EXPECT_EQ(result.state.evolving.size(), 8u);
  EXPECT_TRUE(result.state.elite.empty());
  for (const Genome& g : result.state.evolving) EXPECT_TRUE(g.rating.has_value());
}

TEST_F(EvolutionTest, HistoryPoolsAndInvariants) {
  Rng rng(2);
  EvolutionHooks hooks;
  int steps = 0;
  hooks.on_exploration_step = [&](const EvolutionState& s, const Rng&) {
    ++steps;
    EXPECT_EQ(s.generation % config.exploitation_length, 0);
    EXPECT_EQ(s.loop_generation, 0);
  };
  const auto result = run_evolution(table, synthetic, 3, config, rng, hooks);
  ASSERT_EQ(result.history.size(), 24u);
  EXPECT_EQ(steps, 4);
  for (size_t i = 0; i < result.history.size(); ++i) {
    EXPECT_EQ(result.history[i].generation, static_cast<int>(i));
  }
  EXPECT_EQ(result.state.evolving.size(), 8u);
  EXPECT_LE(result.state.elite.size(), 8u);
  for (const auto* pool : {&result.state.evolving, &result.state.elite}) {
    for (const Genome& g : *pool) {
      EXPECT_TRUE(testing::assignment_valid(table, g.assignment));
      EXPECT_EQ(*g.rating, synthetic(g));
    }
  }
}

TEST_F(EvolutionTest, BestIsMonotoneWhenBoundariesFit) {
  // 3 objectives and 6 survivors: every boundary point fits, so each
  // per-objective maximum survives every truncation.
  config.population = 12;
  config.budget = 60;
  Rng rng(3);
  const auto result = run_evolution(table, synthetic, 3, config, rng);
  for (size_t i = 1; i < result.history.size(); ++i) {
    for (size_t m = 0; m < 3; ++m) {
      ASSERT_GE(result.history[i].best[m], result.history[i - 1].best[m]) << "generation " << i;
    }
  }
  EXPECT_GT(result.history.back().best[1], result.history.front().best[1]);
}

TEST_F(EvolutionTest, DeterministicAcrossWorkerCounts) {
  Rng a(4), b(4), c(4);
  const auto r1 = run_evolution(table, synthetic, 3, config, a);
  const auto r2 = run_evolution(table, synthetic, 3, config, b);
  config.workers = 3;
  const auto r3 = run_evolution(table, synthetic, 3, config, c);
  EXPECT_EQ(io::history_csv(r1.history, {"a", "b", "c"}), io::history_csv(r2.history, {"a", "b", "c"}));
  EXPECT_EQ(io::history_csv(r1.history, {"a", "b", "c"}), io::history_csv(r3.history, {"a", "b", "c"}));
  EXPECT_EQ(r1.state.evolving, r3.state.evolving);
  EXPECT_EQ(r1.state.elite, r3.state.elite);
}

TEST_F(EvolutionTest, ResumeFromExplorationCheckpointMatchesFullRun) {
  Rng full_rng(5);
  std::optional<EvolutionState> saved;
  std::optional<Rng> saved_rng;
  std::vector<GenerationRecord> seen;
  EvolutionHooks hooks;
  hooks.on_generation = [&](const GenerationRecord& r) { seen.push_back(r); };
  hooks.on_exploration_step = [&](const EvolutionState& s, const Rng& engine) {
    if (s.generation == 10) {
      saved = s;
      saved_rng = engine;
    }
  };
  const auto full = run_evolution(table, synthetic, 3, config, full_rng, hooks);
  ASSERT_TRUE(saved);

  // Round-trip through the checkpoint format as well.
  const std::vector<GenerationRecord> prefix(seen.begin(), seen.begin() + 11);
  Rng restored;
  const io::Checkpoint cp = io::checkpoint_from_json(io::checkpoint_to_json(*saved, *saved_rng, prefix), restored);
  EXPECT_EQ(cp.history.size(), 11u);
  const auto resumed = run_evolution(table, synthetic, 3, config, restored, {}, cp.state);

  std::vector<GenerationRecord> stitched = cp.history;
  stitched.insert(stitched.end(), resumed.history.begin(), resumed.history.end());
  EXPECT_EQ(io::history_csv(stitched, {"a", "b", "c"}), io::history_csv(full.history, {"a", "b", "c"}));
  EXPECT_EQ(resumed.state.evolving, full.state.evolving);
  EXPECT_EQ(resumed.state.elite, full.state.elite);
  EXPECT_EQ(restored, full_rng);
}

TEST_F(EvolutionTest, RatingsAreComputedOncePerGenome) {
  config.assignment_mutation_prob = 0.0;
  config.control_mutation_prob = 0.0;
  config.budget = 4;
  std::atomic<int> calls{0};
  const EvaluateFn counting = [&](const Genome& g) {
    ++calls;
    return synthetic(g);
  };
  Rng rng(6);
  run_evolution(table, counting, 3, config, rng);
  EXPECT_EQ(calls.load(), config.population);
}

TEST_F(EvolutionTest, FailedEvaluationsGetSentinelAndNeverSurvive) {
  const EvaluateFn flaky = [](const Genome& g) -> RatingVector {
    if (g.control.bit(0)) throw Error(ErrorCode::kNumericalBlowup, "synthetic failure");
    return synthetic(g);
  };
  Rng rng(7);
  EvolutionHooks hooks;
  const auto result = run_evolution(table, flaky, 3, config, rng, hooks);
  for (const Genome& g : result.state.elite) EXPECT_FALSE(is_failed_rating(*g.rating));
  for (const Genome& g : result.state.evolving) {
    EXPECT_EQ(is_failed_rating(*g.rating), g.control.bit(0));
  }
  for (const Genome& g : final_population(result.state, 8)) EXPECT_FALSE(g.control.bit(0));
}

TEST_F(EvolutionTest, RejectsBadConfig) {
  Rng rng(8);
  config.population = 0;
  EXPECT_VGT_ERROR(run_evolution(table, synthetic, 3, config, rng), ErrorCode::kInvalidConfig);
  config.population = 4;
  config.control_flip_prob = 0.0;
  EXPECT_VGT_ERROR(run_evolution(table, synthetic, 3, config, rng), ErrorCode::kInvalidConfig);
}

TEST(GenomeEvaluator, SimulatedRatingsOnTable) {
  const TrussGraph table = io::load_truss(testing::data_path("table.json"));
  const std::vector<ObjectiveSpec> objectives = {{"fwd", ObjectiveKind::kMoveForward},
                                                 {"low", ObjectiveKind::kLower}};
  GenomeEvaluator evaluator(table, objectives, PhysicsConfig{});
  Rng rng(9);
  const Genome g = random_genome(table, 5, rng);
  const RatingVector r = evaluator(g);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r, evaluator(g));
  EXPECT_EQ(r, score_all(objectives, table, evaluator.simulate(g)));
  EXPECT_GE(r[1], 0.0);
}

}  // namespace
}  // namespace vgt
