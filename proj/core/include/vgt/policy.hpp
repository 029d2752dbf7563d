#pragma once

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <vector>

#include "vgt/mlp.hpp"
#include "vgt/observation.hpp"
#include "vgt/random.hpp"

namespace vgt {

struct PolicyArchitecture {
  int observation_size = 0;
  int n_channels = 0;
  std::vector<int> hidden = {64, 64};

  int action_count() const { return 1 << n_channels; }
};

enum class ActMode { kStochastic, kDeterministic };

// Actor-critic pair. The actor scores all 2^n_channels channel patterns; the
// chosen index decodes to per-channel on/off states via decode_action.
class Policy {
 public:
  Policy() = default;
  // Zero-initialized; use the Rng overload for training.
  explicit Policy(PolicyArchitecture arch);
  Policy(PolicyArchitecture arch, Rng& rng);

  const PolicyArchitecture& architecture() const { return arch_; }
  int action_count() const { return arch_.action_count(); }

  Mlp& actor() { return actor_; }
  Mlp& critic() { return critic_; }
  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }

  Eigen::VectorXd logits(const Observation& obs) const;
  double value(const Observation& obs) const;

 private:
  PolicyArchitecture arch_;
  Mlp actor_;
  Mlp critic_;
};

Eigen::VectorXd log_softmax(const Eigen::VectorXd& logits);
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

// Lowest index among the maximal entries.
int argmax(const Eigen::VectorXd& values);
int sample_categorical(const Eigen::VectorXd& logits, Rng& rng);

int act(const Policy& policy, const Observation& obs, ActMode mode, Rng& rng);

// Checkpoint: {"format": "vgt-policy", "version": 1, "architecture": {...},
// "actor": [...layers], "critic": [...layers]}. Weights are row-major.
nlohmann::json policy_to_json(const Policy& policy);
Policy policy_from_json(const nlohmann::json& j);

}  // namespace vgt
