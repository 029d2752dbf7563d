#pragma once

#include <memory>

#include "vgt/objectives.hpp"
#include "vgt/observation.hpp"
#include "vgt/random.hpp"
#include "vgt/sim.hpp"

namespace vgt {

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
};

// Episodic environment with 2^num_channels discrete actions.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int observation_size() const = 0;
  virtual int num_channels() const = 0;
  virtual Observation reset(Rng& rng) = 0;
  virtual StepResult step(int action) = 0;
  virtual std::unique_ptr<Environment> clone() const = 0;
};

// Closed-loop truss episode: n_actions action steps from the settled start,
// reward 0 until the last step, which pays the objective score.
class TrussEnvironment final : public Environment {
 public:
  struct Options {
    int n_actions = 20;
    double position_noise = 0.0;  // m, uniform in the ground plane per node
    double failure_reward = -1.0;  // paid when the simulation blows up
  };

  TrussEnvironment(std::shared_ptr<const Simulator> sim, ChannelAssignment assignment,
                   ObjectiveSpec objective, SimState initial, Options options);

  int observation_size() const override;
  int num_channels() const override;
  Observation reset(Rng& rng) override;
  StepResult step(int action) override;
  std::unique_ptr<Environment> clone() const override;

  const Trajectory& trajectory() const { return trajectory_; }

 private:
  std::shared_ptr<const Simulator> sim_;
  ChannelAssignment assignment_;
  ObjectiveSpec objective_;
  SimState initial_;
  Options options_;

  SimState state_;
  Trajectory trajectory_;
  int action_index_ = 0;
};

// One-step contextual bandit: the observation is a random context in
// [-1, 1]^context_size and the reward is 1 iff the action equals `target`.
class BanditEnvironment final : public Environment {
 public:
  BanditEnvironment(int n_channels, int target, int context_size);

  int observation_size() const override { return context_size_; }
  int num_channels() const override { return n_channels_; }
  Observation reset(Rng& rng) override;
  StepResult step(int action) override;
  std::unique_ptr<Environment> clone() const override;

 private:
  int n_channels_;
  int target_;
  int context_size_;
  Observation context_;
};

}  // namespace vgt
