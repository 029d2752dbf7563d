#pragma once

#include <Eigen/Core>

#include <functional>
#include <span>
#include <vector>

#include "vgt/environment.hpp"
#include "vgt/policy.hpp"
#include "vgt/random.hpp"

namespace vgt {

struct PpoConfig {
  int updates = 600;
  int rollout_steps = 2048;  // minimum environment steps collected per update
  int epochs = 4;
  int minibatch_size = 64;
  double clip = 0.2;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double learning_rate = 3e-4;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double max_grad_norm = 0.5;  // <= 0 disables clipping
  bool normalize_advantages = true;
  std::vector<int> hidden = {64, 64};
  int workers = 1;
  // Truss episodes only.
  double position_noise = 0.0;
  double failure_reward = -1.0;

  void validate() const;
};

// Flattened transitions; observations are stored one per column.
struct Batch {
  Eigen::MatrixXd observations;
  std::vector<int> actions;
  Eigen::VectorXd old_log_probs;
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;

  int size() const { return static_cast<int>(actions.size()); }
  Batch subset(std::span<const int> rows) const;
};

struct LossResult {
  double policy_loss = 0.0;  // -mean clipped surrogate
  double value_loss = 0.0;   // 0.5 * mean squared error
  double entropy = 0.0;      // mean policy entropy
  double total = 0.0;        // policy + value_coef * value - entropy_coef * entropy
  Eigen::VectorXd actor_grad;
  Eigen::VectorXd critic_grad;
};

// Clipped-surrogate loss and, if requested, its exact gradient with respect
// to the actor and critic parameters.
LossResult ppo_loss(const Policy& policy, const Batch& batch, const PpoConfig& config,
                    bool with_gradients = true);

// Generalized advantage estimation. done[t] marks the last step of an
// episode; nothing is bootstrapped past it.
void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const char> done, double gamma, double lambda,
                 Eigen::VectorXd& advantages, Eigen::VectorXd& returns);

// In place: zero mean, unit (population) standard deviation.
void normalize_advantages(Eigen::VectorXd& advantages);

struct UpdateRecord {
  int update = 0;
  double mean_return = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
};

struct TrainingResult {
  Policy policy;
  std::vector<UpdateRecord> history;
};

// Standard PPO. Episodes are seeded from (run seed, update, episode index)
// and gathered in index order, so results do not depend on config.workers.
// Throws NonFiniteLoss if an update produces a non-finite loss.
TrainingResult train_ppo(const Environment& prototype, const PpoConfig& config, Rng& rng,
                         const std::function<void(const UpdateRecord&)>& on_update = {});

// Closed-loop control of one channel design for one objective.
TrainingResult train_ppo(const TrussGraph& graph, const ChannelAssignment& assignment,
                         const ObjectiveSpec& objective, const PhysicsConfig& physics,
                         const SimState& initial, int n_actions, const PpoConfig& config, Rng& rng,
                         const std::function<void(const UpdateRecord&)>& on_update = {});

}  // namespace vgt
