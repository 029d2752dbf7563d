#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "vgt/ppo.hpp"

namespace vgt::testing {

// Small network and a batch whose importance ratios sit well away from the
// clip boundaries, so the loss is smooth around the current parameters.
struct PpoFixture {
  Policy policy;
  Batch batch;
  PpoConfig config;
};

inline PpoFixture ppo_fixture(Rng& rng, int n = 12) {
  PpoFixture f;
  f.policy = Policy(PolicyArchitecture{3, 2, {5, 4}}, rng);
  // Larger output weights than the default init so the policy is far from
  // uniform and every term of the gradient matters.
  for (auto* net : {&f.policy.actor(), &f.policy.critic()}) {
    Eigen::VectorXd p = net->parameters();
    std::normal_distribution<double> noise(0.0, 0.5);
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] += noise(rng);
    net->set_parameters(p);
  }
  f.config.clip = 0.2;
  f.config.entropy_coef = 0.05;
  f.config.value_coef = 0.7;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  f.batch.observations.resize(3, n);
  f.batch.old_log_probs.resize(n);
  f.batch.advantages.resize(n);
  f.batch.returns.resize(n);
  const double ratios[] = {1.0, 0.9, 1.1, 0.5, 1.6, 1.05};
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < 3; ++r) f.batch.observations(r, i) = u(rng);
    const int a = uniform_index(rng, 4);
    f.batch.actions.push_back(a);
    const Eigen::VectorXd logp = log_softmax(f.policy.logits({f.batch.observations(0, i), f.batch.observations(1, i),
                                                              f.batch.observations(2, i)}));
    f.batch.old_log_probs(i) = logp(a) - std::log(ratios[i % 6]);
    f.batch.advantages(i) = u(rng) * 2.0;
    f.batch.returns(i) = u(rng);
  }
  return f;
}

// Largest relative gap between analytic and central-difference gradients
// of the total loss, over actor and critic parameters. Components smaller
// than `floor` in both estimates are compared absolutely against floor.
inline double ppo_gradient_error(PpoFixture f, double h = 1e-6, double floor = 1e-6) {
  const LossResult analytic = ppo_loss(f.policy, f.batch, f.config);
  double worst = 0.0;
  auto check = [&](Mlp& net, const Eigen::VectorXd& grad) {
    Eigen::VectorXd p = net.parameters();
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double keep = p[i];
      p[i] = keep + h;
      net.set_parameters(p);
      const double up = ppo_loss(f.policy, f.batch, f.config, false).total;
      p[i] = keep - h;
      net.set_parameters(p);
      const double down = ppo_loss(f.policy, f.batch, f.config, false).total;
      p[i] = keep;
      net.set_parameters(p);
      const double fd = (up - down) / (2 * h);
      const double scale = std::max({std::abs(fd), std::abs(grad[i]), floor});
      worst = std::max(worst, std::abs(fd - grad[i]) / scale);
    }
  };
  check(f.policy.actor(), analytic.actor_grad);
  check(f.policy.critic(), analytic.critic_grad);
  return worst;
}

// With every ratio exactly 1 and no entropy or value terms, the clipped
// surrogate gradient must equal the vanilla policy gradient
// -(1/N) sum A_i grad log pi(a_i | s_i). Returns the largest absolute gap.
inline double ratio_one_gap(PpoFixture f) {
  const int n = f.batch.size();
  Eigen::MatrixXd grad_logits = Eigen::MatrixXd::Zero(f.policy.action_count(), n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd logp = log_softmax(f.policy.actor().forward(f.batch.observations.col(i)).col(0));
    f.batch.old_log_probs(i) = logp(f.batch.actions[static_cast<size_t>(i)]);
    // d log pi(a) / d logits = e_a - p
    Eigen::VectorXd d = -logp.array().exp().matrix();
    d(f.batch.actions[static_cast<size_t>(i)]) += 1.0;
    grad_logits.col(i) = -f.batch.advantages(i) / n * d;
  }
  Mlp::Tape tape;
  f.policy.actor().forward(f.batch.observations, tape);
  const Eigen::VectorXd vanilla = f.policy.actor().backward(tape, grad_logits);
  f.config.entropy_coef = 0.0;
  f.config.value_coef = 0.0;
  const LossResult loss = ppo_loss(f.policy, f.batch, f.config);
  return (loss.actor_grad - vanilla).cwiseAbs().maxCoeff();
}

inline PpoConfig bandit_config() {
  PpoConfig c;
  c.updates = 200;
  c.rollout_steps = 128;
  c.minibatch_size = 32;
  c.epochs = 4;
  c.learning_rate = 3e-3;
  c.hidden = {32};
  c.workers = 1;
  return c;
}

// Index of the first update whose mean return exceeds `threshold`, or -1.
inline int first_update_above(const std::vector<UpdateRecord>& history, double threshold) {
  const auto it = std::find_if(history.begin(), history.end(),
                               [&](const UpdateRecord& r) { return r.mean_return > threshold; });
  return it == history.end() ? -1 : static_cast<int>(it - history.begin());
}

}  // namespace vgt::testing
