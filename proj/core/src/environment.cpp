#include "vgt/environment.hpp"

#include "vgt/error.hpp"

namespace vgt {

TrussEnvironment::TrussEnvironment(std::shared_ptr<const Simulator> sim, ChannelAssignment assignment,
                                   ObjectiveSpec objective, SimState initial, Options options)
    : sim_(std::move(sim)),
      assignment_(std::move(assignment)),
      objective_(std::move(objective)),
      initial_(std::move(initial)),
      options_(options) {
  if (options_.n_actions < 1) throw Error(ErrorCode::kInvalidConfig, "episodes need at least one action");
}

int TrussEnvironment::observation_size() const { return vgt::observation_size(sim_->graph()); }

int TrussEnvironment::num_channels() const { return sim_->graph().num_channels(); }

Observation TrussEnvironment::reset(Rng& rng) {
  state_ = initial_;
  if (options_.position_noise > 0.0) {
    std::uniform_real_distribution<double> noise(-options_.position_noise, options_.position_noise);
    for (Vec3& p : state_.positions) {
      p.x() += noise(rng);
      p.y() += noise(rng);
    }
  }
  trajectory_ = Trajectory{};
  trajectory_.states.push_back(state_);
  action_index_ = 0;
  return observe(sim_->graph(), state_);
}

StepResult TrussEnvironment::step(int action) {
  state_.channel_states = encode_action(action, num_channels());
  for (int k = 0; k < sim_->config().steps_per_action; ++k) {
    if (!sim_->advance(assignment_, state_)) {
      trajectory_.flagged = true;
      return {Observation(static_cast<size_t>(observation_size()), 0.0), options_.failure_reward, true};
    }
  }
  trajectory_.states.push_back(state_);
  ++action_index_;

  StepResult out;
  try {
    out.observation = observe(sim_->graph(), state_);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateBeam) throw;
    return {Observation(static_cast<size_t>(observation_size()), 0.0), options_.failure_reward, true};
  }
  if (action_index_ >= options_.n_actions) {
    out.done = true;
    out.reward = score(objective_, sim_->graph(), trajectory_);
  }
  return out;
}

std::unique_ptr<Environment> TrussEnvironment::clone() const {
  return std::make_unique<TrussEnvironment>(sim_, assignment_, objective_, initial_, options_);
}

BanditEnvironment::BanditEnvironment(int n_channels, int target, int context_size)
    : n_channels_(n_channels), target_(target), context_size_(context_size) {
  if (n_channels < 1 || n_channels > kMaxActionChannels) {
    throw Error(ErrorCode::kInvalidConfig, "bandit channel count out of range");
  }
  if (target < 0 || target >= (1 << n_channels)) {
    throw Error(ErrorCode::kInvalidConfig, "bandit target outside the action range");
  }
  if (context_size < 1) throw Error(ErrorCode::kInvalidConfig, "bandit context size must be positive");
}

Observation BanditEnvironment::reset(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  context_.resize(static_cast<size_t>(context_size_));
  for (double& x : context_) x = u(rng);
  return context_;
}

StepResult BanditEnvironment::step(int action) {
  return {context_, action == target_ ? 1.0 : 0.0, true};
}

std::unique_ptr<Environment> BanditEnvironment::clone() const {
  return std::make_unique<BanditEnvironment>(*this);
}

}  // namespace vgt
