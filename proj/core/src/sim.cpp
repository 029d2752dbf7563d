#include "vgt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vgt/error.hpp"

namespace vgt {

void PhysicsConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidConfig, msg); };
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(node_mass > 0.0)) fail("node_mass must be positive");
  if (!(stiffness > 0.0)) fail("stiffness must be positive");
  if (damping < 0.0) fail("damping must be non-negative");
  if (ground_stiffness < 0.0 || ground_damping < 0.0) fail("ground constants must be non-negative");
  if (friction_coeff < 0.0) fail("friction_coeff must be non-negative");
  if (!(actuation_rate >= 0.0)) fail("actuation_rate must be non-negative");
  if (steps_per_action < 1) fail("steps_per_action must be at least 1");
  if (fixed_group_stiffness < 0.0) fail("fixed_group_stiffness must be non-negative");
  if (!(contract_ratio > 0.0 && contract_ratio < expand_ratio)) {
    fail("contract_ratio must be positive and below expand_ratio");
  }
  if (contract_length.has_value() != expand_length.has_value()) {
    fail("contract_length and expand_length must be given together");
  }
  if (contract_length && !(*contract_length > 0.0 && *contract_length < *expand_length)) {
    fail("contract_length must be positive and below expand_length");
  }
  if (!(max_speed > 0.0)) fail("max_speed must be positive");
  if (settle_window < 1 || settle_max_steps < 1) fail("settle limits must be positive");
}

Controller sequence_controller(const ControlSequence& control) {
  return [control](int action, const SimState&) {
    return control.row(action % control.steps());
  };
}

Simulator::Simulator(const TrussGraph& graph, PhysicsConfig config)
    : graph_(graph), config_(std::move(config)) {
  config_.validate();
  const int ne = graph_.num_edges();
  contract_.resize(static_cast<size_t>(ne));
  expand_.resize(static_cast<size_t>(ne));
  for (int e = 0; e < ne; ++e) {
    if (config_.contract_length) {
      contract_[static_cast<size_t>(e)] = *config_.contract_length;
      expand_[static_cast<size_t>(e)] = *config_.expand_length;
    } else {
      const double l0 = graph_.rest_length(e);
      contract_[static_cast<size_t>(e)] = config_.contract_ratio * l0;
      expand_[static_cast<size_t>(e)] = config_.expand_ratio * l0;
    }
  }
  for (const auto& group : graph_.fixed_groups()) {
    for (size_t a = 0; a < group.size(); ++a) {
      for (size_t b = a + 1; b < group.size(); ++b) {
        const int i = group[a];
        const int j = group[b];
        const double rest = (graph_.vertices()[static_cast<size_t>(j)] -
                             graph_.vertices()[static_cast<size_t>(i)]).norm();
        fixed_pairs_.push_back({i, j, rest});
      }
    }
  }
}

SimState Simulator::rest_state() const {
  SimState s;
  s.positions = graph_.vertices();
  s.velocities.assign(graph_.vertices().size(), Vec3::Zero());
  s.rest_lengths.resize(static_cast<size_t>(graph_.num_edges()));
  for (int e = 0; e < graph_.num_edges(); ++e) {
    s.rest_lengths[static_cast<size_t>(e)] =
        std::clamp(graph_.rest_length(e), contract_length(e), expand_length(e));
  }
  s.channel_states.assign(static_cast<size_t>(graph_.num_channels()), false);
  return s;
}

bool Simulator::advance(const ChannelAssignment& assignment, SimState& state) const {
  const PhysicsConfig& c = config_;
  const double dt = c.dt;
  const size_t nv = state.positions.size();

  // (1) Rest lengths slew toward the commanded end length.
  const double max_change = c.actuation_rate * dt;
  for (int e = 0; e < graph_.num_edges(); ++e) {
    const int channel = assignment[e];
    const bool on = channel >= 0 && state.channel_states[static_cast<size_t>(channel)];
    const double target = on ? expand_length(e) : contract_length(e);
    double& rest = state.rest_lengths[static_cast<size_t>(e)];
    rest += std::clamp(target - rest, -max_change, max_change);
    rest = std::clamp(rest, contract_length(e), expand_length(e));
  }

  std::vector<Vec3> force(nv, Vec3::Zero());
  auto spring = [&](int i, int j, double k, double rest) {
    const Vec3 d = state.positions[static_cast<size_t>(j)] - state.positions[static_cast<size_t>(i)];
    const double length = d.norm();
    if (!(length > 1e-12)) return;
    const Vec3 u = d / length;
    const double axial_speed =
        (state.velocities[static_cast<size_t>(j)] - state.velocities[static_cast<size_t>(i)]).dot(u);
    // Positive magnitude pulls the endpoints together.
    const double magnitude = k * (length - rest) + c.damping * axial_speed;
    force[static_cast<size_t>(i)] += magnitude * u;
    force[static_cast<size_t>(j)] -= magnitude * u;
  };

  // (2) Beams.
  for (int e = 0; e < graph_.num_edges(); ++e) {
    spring(graph_.edge(e).a, graph_.edge(e).b, c.stiffness, state.rest_lengths[static_cast<size_t>(e)]);
  }
  // (5) Rigid groups as stiff springs at rest-pose distances.
  for (const Pair& p : fixed_pairs_) spring(p.i, p.j, c.fixed_group_stiffness, p.rest);

  const double m = c.node_mass;
  for (size_t v = 0; v < nv; ++v) {
    Vec3& f = force[v];
    // (3) Gravity.
    f.z() -= m * c.gravity;

    // (4) Penalty contact with Coulomb friction on z = 0.
    const Vec3& x = state.positions[v];
    const Vec3& vel = state.velocities[v];
    if (x.z() < 0.0) {
      const double normal = std::max(0.0, -c.ground_stiffness * x.z() - c.ground_damping * vel.z());
      f.z() += normal;
      const Eigen::Vector2d trial = vel.head<2>() + dt * f.head<2>() / m;
      const Eigen::Vector2d needed = -m * trial / dt;
      const double limit = c.friction_coeff * normal;
      const double needed_norm = needed.norm();
      if (needed_norm <= limit) {
        f.head<2>() += needed;
      } else {
        f.head<2>() += limit * needed / needed_norm;
      }
    }
  }

  // (6) Velocities first, then positions with the new velocities.
  bool ok = true;
  for (size_t v = 0; v < nv; ++v) {
    state.velocities[v] += dt * force[v] / m;
    state.positions[v] += dt * state.velocities[v];
    if (!state.positions[v].allFinite() || !state.velocities[v].allFinite() ||
        state.velocities[v].norm() > c.max_speed) {
      ok = false;
    }
  }
  state.time += dt;
  return ok;
}

SimState Simulator::step(const ChannelAssignment& assignment, const SimState& state) const {
  SimState next = state;
  if (!advance(assignment, next)) {
    throw Error(ErrorCode::kNumericalBlowup, "state diverged at t=" + std::to_string(next.time));
  }
  return next;
}

Trajectory Simulator::rollout(const ChannelAssignment& assignment, const SimState& initial,
                              const Controller& controller, int n_actions) const {
  Trajectory out;
  out.states.reserve(static_cast<size_t>(n_actions) + 1);
  out.states.push_back(initial);
  SimState state = initial;
  long physics_step = 0;
  for (int a = 0; a < n_actions; ++a) {
    std::vector<bool> command = controller(a, state);
    if (static_cast<int>(command.size()) != graph_.num_channels()) {
      throw Error(ErrorCode::kInvalidConfig, "controller returned the wrong number of channels");
    }
    state.channel_states = std::move(command);
    for (int k = 0; k < config_.steps_per_action; ++k) {
      if (!advance(assignment, state)) {
        out.flagged = true;
        out.blowup_step = physics_step;
        return out;
      }
      ++physics_step;
    }
    out.states.push_back(state);
  }
  return out;
}

SimState Simulator::settle() const {
  SimState state = rest_state();
  const ChannelAssignment all_off{std::vector<int>(static_cast<size_t>(graph_.num_edges()), kUnassigned)};
  const double nv = std::max<double>(1.0, static_cast<double>(graph_.num_vertices()));
  int quiet = 0;
  double per_node = 0.0;
  for (int k = 0; k < config_.settle_max_steps; ++k) {
    if (!advance(all_off, state)) {
      throw Error(ErrorCode::kNumericalBlowup, "blow-up while settling");
    }
    per_node = energy(state).kinetic / nv;
    bool at_target = true;
    for (int e = 0; e < graph_.num_edges(); ++e) {
      if (state.rest_lengths[static_cast<size_t>(e)] != contract_length(e)) {
        at_target = false;
        break;
      }
    }
    quiet = (at_target && per_node < config_.settle_energy) ? quiet + 1 : 0;
    if (quiet >= config_.settle_window) {
      state.time = 0.0;
      return state;
    }
  }
  std::ostringstream msg;
  msg << "kinetic energy per node still " << per_node << " J after " << config_.settle_max_steps
      << " steps";
  throw Error(ErrorCode::kNoSettle, msg.str());
}

EnergyBreakdown Simulator::energy(const SimState& state) const {
  const PhysicsConfig& c = config_;
  EnergyBreakdown out;
  for (size_t v = 0; v < state.positions.size(); ++v) {
    out.kinetic += 0.5 * c.node_mass * state.velocities[v].squaredNorm();
    const double z = state.positions[v].z();
    out.gravity += c.node_mass * c.gravity * z;
    if (z < 0.0) out.ground += 0.5 * c.ground_stiffness * z * z;
  }
  auto stretch = [&](int i, int j, double rest) {
    return (state.positions[static_cast<size_t>(j)] - state.positions[static_cast<size_t>(i)]).norm() - rest;
  };
  for (int e = 0; e < graph_.num_edges(); ++e) {
    const double s = stretch(graph_.edge(e).a, graph_.edge(e).b, state.rest_lengths[static_cast<size_t>(e)]);
    out.beam += 0.5 * c.stiffness * s * s;
  }
  for (const Pair& p : fixed_pairs_) {
    const double s = stretch(p.i, p.j, p.rest);
    out.fixed_group += 0.5 * c.fixed_group_stiffness * s * s;
  }
  return out;
}

int Simulator::contact_count(const SimState& state) const {
  return static_cast<int>(std::count_if(state.positions.begin(), state.positions.end(),
                                        [](const Vec3& p) { return p.z() < 0.0; }));
}

SimState step(const TrussGraph& graph, const ChannelAssignment& assignment,
              const SimState& state, const PhysicsConfig& config) {
  return Simulator(graph, config).step(assignment, state);
}

Trajectory rollout(const TrussGraph& graph, const ChannelAssignment& assignment,
                   const SimState& initial, const Controller& controller, int n_actions,
                   const PhysicsConfig& config) {
  return Simulator(graph, config).rollout(assignment, initial, controller, n_actions);
}

SimState settle(const TrussGraph& graph, const PhysicsConfig& config) {
  return Simulator(graph, config).settle();
}

}  // namespace vgt
