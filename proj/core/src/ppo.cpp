#include "vgt/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vgt/error.hpp"
#include "vgt/parallel.hpp"

namespace vgt {

void PpoConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidConfig, msg); };
  if (updates < 0) fail("updates must be non-negative");
  if (rollout_steps < 1) fail("rollout_steps must be at least 1");
  if (epochs < 1) fail("epochs must be at least 1");
  if (minibatch_size < 1) fail("minibatch_size must be at least 1");
  if (!(clip > 0.0)) fail("clip must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail("gamma must lie in [0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) fail("gae_lambda must lie in [0, 1]");
  if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
  if (!(entropy_coef >= 0.0)) fail("entropy_coef must be non-negative");
  if (!(value_coef >= 0.0)) fail("value_coef must be non-negative");
  if (!std::isfinite(max_grad_norm)) fail("max_grad_norm must be finite");
  for (int h : hidden) {
    if (h < 1) fail("hidden layer sizes must be positive");
  }
  if (!(position_noise >= 0.0)) fail("position_noise must be non-negative");
  if (!std::isfinite(failure_reward)) fail("failure_reward must be finite");
}

Batch Batch::subset(std::span<const int> rows) const {
  Batch out;
  const auto n = static_cast<Eigen::Index>(rows.size());
  out.observations.resize(observations.rows(), n);
  out.actions.resize(rows.size());
  out.old_log_probs.resize(n);
  out.advantages.resize(n);
  out.returns.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const int i = rows[static_cast<size_t>(k)];
    out.observations.col(k) = observations.col(i);
    out.actions[static_cast<size_t>(k)] = actions[static_cast<size_t>(i)];
    out.old_log_probs(k) = old_log_probs(i);
    out.advantages(k) = advantages(i);
    out.returns(k) = returns(i);
  }
  return out;
}

LossResult ppo_loss(const Policy& policy, const Batch& batch, const PpoConfig& config,
                    bool with_gradients) {
  const int n = batch.size();
  if (n == 0) throw Error(ErrorCode::kInvalidConfig, "empty batch");
  const double inv_n = 1.0 / n;

  Mlp::Tape actor_tape;
  Mlp::Tape critic_tape;
  const Eigen::MatrixXd logits = policy.actor().forward(batch.observations, actor_tape);
  const Eigen::MatrixXd values = policy.critic().forward(batch.observations, critic_tape);

  LossResult out;
  Eigen::MatrixXd grad_logits = Eigen::MatrixXd::Zero(logits.rows(), n);
  Eigen::MatrixXd grad_values(1, n);

  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd logp = log_softmax(logits.col(i));
    const Eigen::VectorXd p = logp.array().exp();
    const int a = batch.actions[static_cast<size_t>(i)];
    const double adv = batch.advantages(i);
    const double ratio = std::exp(logp(a) - batch.old_log_probs(i));
    const double clipped = std::clamp(ratio, 1.0 - config.clip, 1.0 + config.clip);
    const double unclipped_obj = ratio * adv;
    const double clipped_obj = clipped * adv;
    const bool unclipped_active = unclipped_obj <= clipped_obj;
    out.policy_loss -= std::min(unclipped_obj, clipped_obj) * inv_n;

    const double entropy = -(p.array() * logp.array()).sum();
    out.entropy += entropy * inv_n;

    const double v = values(0, i);
    const double err = v - batch.returns(i);
    out.value_loss += 0.5 * err * err * inv_n;

    if (with_gradients) {
      auto g = grad_logits.col(i);
      if (unclipped_active) {
        g = unclipped_obj * inv_n * p;
        g(a) -= unclipped_obj * inv_n;
      }
      g.array() += config.entropy_coef * inv_n * p.array() * (logp.array() + entropy);
      grad_values(0, i) = config.value_coef * err * inv_n;
    }
  }
  out.total = out.policy_loss + config.value_coef * out.value_loss - config.entropy_coef * out.entropy;

  if (with_gradients) {
    out.actor_grad = policy.actor().backward(actor_tape, grad_logits);
    out.critic_grad = policy.critic().backward(critic_tape, grad_values);
  }
  return out;
}

void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const char> done, double gamma, double lambda,
                 Eigen::VectorXd& advantages, Eigen::VectorXd& returns) {
  const size_t n = rewards.size();
  if (values.size() != n || done.size() != n) {
    throw Error(ErrorCode::kInvalidConfig, "rewards, values and done must have equal length");
  }
  advantages.resize(static_cast<Eigen::Index>(n));
  returns.resize(static_cast<Eigen::Index>(n));
  double next_adv = 0.0;
  double next_value = 0.0;
  for (size_t k = n; k-- > 0;) {
    if (done[k]) {
      next_adv = 0.0;
      next_value = 0.0;
    }
    const double delta = rewards[k] + gamma * next_value - values[k];
    next_adv = delta + gamma * lambda * next_adv;
    next_value = values[k];
    advantages(static_cast<Eigen::Index>(k)) = next_adv;
    returns(static_cast<Eigen::Index>(k)) = next_adv + values[k];
  }
}

void normalize_advantages(Eigen::VectorXd& advantages) {
  if (advantages.size() == 0) return;
  const double mean = advantages.mean();
  advantages.array() -= mean;
  const double sd = std::sqrt(advantages.squaredNorm() / static_cast<double>(advantages.size()));
  advantages /= (sd + 1e-8);
}

namespace {

struct Episode {
  std::vector<Observation> observations;
  std::vector<int> actions;
  std::vector<double> log_probs;
  std::vector<double> values;
  std::vector<double> rewards;
  double total_reward = 0.0;
};

Episode run_episode(const Policy& policy, Environment& env, std::uint64_t seed) {
  Rng rng(seed);
  Episode ep;
  Observation obs = env.reset(rng);
  for (;;) {
    const Eigen::VectorXd logits = policy.logits(obs);
    const int action = sample_categorical(logits, rng);
    ep.observations.push_back(obs);
    ep.actions.push_back(action);
    ep.log_probs.push_back(log_softmax(logits)(action));
    ep.values.push_back(policy.value(obs));
    StepResult r = env.step(action);
    ep.rewards.push_back(r.reward);
    ep.total_reward += r.reward;
    if (r.done) break;
    obs = std::move(r.observation);
  }
  return ep;
}

// Collects whole episodes in index order until at least `min_steps`
// transitions are available. Episodes beyond that point are discarded so
// the batch does not depend on how many ran concurrently.
std::vector<Episode> collect(const Policy& policy,
                             std::vector<std::unique_ptr<Environment>>& envs, int min_steps,
                             std::uint64_t run_seed, int update) {
  std::vector<Episode> episodes;
  int steps = 0;
  const int wave = static_cast<int>(envs.size());
  while (steps < min_steps) {
    const int base = static_cast<int>(episodes.size());
    std::vector<Episode> fresh(static_cast<size_t>(wave));
    parallel_for(wave, wave, [&](int k) {
      const auto seed = derive_seed(run_seed, static_cast<std::uint64_t>(update),
                                    static_cast<std::uint64_t>(base + k));
      fresh[static_cast<size_t>(k)] = run_episode(policy, *envs[static_cast<size_t>(k)], seed);
    });
    for (Episode& ep : fresh) {
      if (steps >= min_steps) break;
      steps += static_cast<int>(ep.actions.size());
      episodes.push_back(std::move(ep));
    }
  }
  return episodes;
}

Batch assemble(const std::vector<Episode>& episodes, int obs_size, const PpoConfig& config) {
  std::vector<double> rewards, values, log_probs;
  std::vector<char> done;
  Batch batch;
  for (const Episode& ep : episodes) {
    for (size_t t = 0; t < ep.actions.size(); ++t) {
      rewards.push_back(ep.rewards[t]);
      values.push_back(ep.values[t]);
      log_probs.push_back(ep.log_probs[t]);
      done.push_back(t + 1 == ep.actions.size() ? 1 : 0);
      batch.actions.push_back(ep.actions[t]);
    }
  }
  const auto n = static_cast<Eigen::Index>(batch.actions.size());
  batch.observations.resize(obs_size, n);
  Eigen::Index col = 0;
  for (const Episode& ep : episodes) {
    for (const Observation& o : ep.observations) {
      batch.observations.col(col++) = Eigen::Map<const Eigen::VectorXd>(o.data(), obs_size);
    }
  }
  batch.old_log_probs = Eigen::Map<const Eigen::VectorXd>(log_probs.data(), n);
  compute_gae(rewards, values, done, config.gamma, config.gae_lambda, batch.advantages, batch.returns);
  if (config.normalize_advantages) normalize_advantages(batch.advantages);
  return batch;
}

void clip_gradients(Eigen::VectorXd& actor, Eigen::VectorXd& critic, double max_norm) {
  if (max_norm <= 0.0) return;
  const double norm = std::sqrt(actor.squaredNorm() + critic.squaredNorm());
  if (norm > max_norm) {
    const double scale = max_norm / (norm + 1e-12);
    actor *= scale;
    critic *= scale;
  }
}

}  // namespace

TrainingResult train_ppo(const Environment& prototype, const PpoConfig& config, Rng& rng,
                         const std::function<void(const UpdateRecord&)>& on_update) {
  config.validate();
  if (prototype.num_channels() < 1 || prototype.num_channels() > kMaxActionChannels) {
    throw Error(ErrorCode::kInvalidConfig, "environment channel count out of range");
  }
  PolicyArchitecture arch{prototype.observation_size(), prototype.num_channels(), config.hidden};
  TrainingResult result{Policy(arch, rng), {}};
  Policy& policy = result.policy;
  const std::uint64_t run_seed = rng();

  std::vector<std::unique_ptr<Environment>> envs;
  const int workers = std::max(1, resolve_workers(config.workers));
  for (int k = 0; k < workers; ++k) envs.push_back(prototype.clone());

  Adam actor_opt(policy.actor().parameter_count(), config.learning_rate);
  Adam critic_opt(policy.critic().parameter_count(), config.learning_rate);

  for (int update = 0; update < config.updates; ++update) {
    const std::vector<Episode> episodes =
        collect(policy, envs, config.rollout_steps, run_seed, update);
    const Batch batch = assemble(episodes, arch.observation_size, config);

    UpdateRecord rec;
    rec.update = update;
    for (const Episode& ep : episodes) rec.mean_return += ep.total_reward;
    rec.mean_return /= static_cast<double>(episodes.size());

    std::vector<int> order(static_cast<size_t>(batch.size()));
    std::iota(order.begin(), order.end(), 0);
    double pl = 0.0, vl = 0.0, ent = 0.0;
    int minibatches = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      for (size_t start = 0; start < order.size(); start += static_cast<size_t>(config.minibatch_size)) {
        const size_t stop = std::min(order.size(), start + static_cast<size_t>(config.minibatch_size));
        const Batch mb = batch.subset(std::span<const int>(order).subspan(start, stop - start));
        LossResult loss = ppo_loss(policy, mb, config);
        if (!std::isfinite(loss.total) || !loss.actor_grad.allFinite() || !loss.critic_grad.allFinite()) {
          throw Error(ErrorCode::kNonFiniteLoss, "non-finite loss at update " + std::to_string(update));
        }
        clip_gradients(loss.actor_grad, loss.critic_grad, config.max_grad_norm);
        Eigen::VectorXd actor_params = policy.actor().parameters();
        Eigen::VectorXd critic_params = policy.critic().parameters();
        actor_opt.step(actor_params, loss.actor_grad);
        critic_opt.step(critic_params, loss.critic_grad);
        policy.actor().set_parameters(actor_params);
        policy.critic().set_parameters(critic_params);
        pl += loss.policy_loss;
        vl += loss.value_loss;
        ent += loss.entropy;
        ++minibatches;
      }
    }
    rec.policy_loss = pl / minibatches;
    rec.value_loss = vl / minibatches;
    rec.entropy = ent / minibatches;
    result.history.push_back(rec);
    if (on_update) on_update(rec);
  }
  return result;
}

TrainingResult train_ppo(const TrussGraph& graph, const ChannelAssignment& assignment,
                         const ObjectiveSpec& objective, const PhysicsConfig& physics,
                         const SimState& initial, int n_actions, const PpoConfig& config, Rng& rng,
                         const std::function<void(const UpdateRecord&)>& on_update) {
  if (!validate_assignment(graph, assignment).ok()) {
    throw Error(ErrorCode::kInvalidGenome, "channel assignment violates channel invariants");
  }
  auto sim = std::make_shared<const Simulator>(graph, physics);
  TrussEnvironment::Options options;
  options.n_actions = n_actions;
  options.position_noise = config.position_noise;
  options.failure_reward = config.failure_reward;
  TrussEnvironment env(std::move(sim), assignment, objective, initial, options);
  return train_ppo(env, config, rng, on_update);
}

}  // namespace vgt
