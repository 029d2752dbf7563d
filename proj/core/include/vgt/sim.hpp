#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vgt/genome.hpp"
#include "vgt/truss_graph.hpp"

namespace vgt {

// Mass-spring constants. Beam end lengths default to ratios of each beam's
// rest-pose length; setting contract_length / expand_length overrides them
// with one absolute value for every beam.
struct PhysicsConfig {
  double dt = 1e-3;                  // s
  double node_mass = 0.1;            // kg
  double stiffness = 2000.0;         // N/m
  double damping = 5.0;              // N*s/m, axial
  double gravity = 9.81;             // m/s^2
  double contract_ratio = 0.8;
  double expand_ratio = 1.2;
  std::optional<double> contract_length;  // m
  std::optional<double> expand_length;    // m
  double actuation_rate = 0.5;       // m/s
  double ground_stiffness = 1e4;     // N/m
  double ground_damping = 20.0;      // N*s/m, normal direction only
  double friction_coeff = 0.8;
  int steps_per_action = 100;
  double fixed_group_stiffness = 2e4;  // N/m

  double max_speed = 1e3;            // m/s; faster is treated as blow-up
  double settle_energy = 1e-6;       // J per node
  int settle_window = 100;           // consecutive quiet steps required
  int settle_max_steps = 200000;

  // Throws InvalidConfig on a violated invariant.
  void validate() const;
};

struct SimState {
  std::vector<Vec3> positions;   // m
  std::vector<Vec3> velocities;  // m/s
  std::vector<double> rest_lengths;
  std::vector<bool> channel_states;
  double time = 0.0;

  friend bool operator==(const SimState&, const SimState&) = default;
};

struct Trajectory {
  std::vector<SimState> states;  // initial state, then one per action step
  bool flagged = false;
  long blowup_step = -1;         // physics step index at which blow-up was detected
};

struct EnergyBreakdown {
  double kinetic = 0.0;
  double beam = 0.0;
  double fixed_group = 0.0;
  double gravity = 0.0;
  double ground = 0.0;

  double total() const { return kinetic + beam + fixed_group + gravity + ground; }
};

// Per-action-step channel command. `action` counts from 0.
using Controller = std::function<std::vector<bool>(int action, const SimState& state)>;

Controller sequence_controller(const ControlSequence& control);

// Precomputes per-beam limits and fixed-group springs for one graph.
// Stateless after construction; safe to share between threads.
class Simulator {
 public:
  Simulator(const TrussGraph& graph, PhysicsConfig config);

  const TrussGraph& graph() const { return graph_; }
  const PhysicsConfig& config() const { return config_; }

  double contract_length(int e) const { return contract_[static_cast<size_t>(e)]; }
  double expand_length(int e) const { return expand_[static_cast<size_t>(e)]; }

  // Rest pose at rest with every channel off and beams at rest-pose length
  // (clamped into their actuation range).
  SimState rest_state() const;

  // One semi-implicit Euler step. Returns false on blow-up; `state` then
  // holds the offending values.
  bool advance(const ChannelAssignment& assignment, SimState& state) const;

  // Throws NumericalBlowup instead of returning false.
  SimState step(const ChannelAssignment& assignment, const SimState& state) const;

  Trajectory rollout(const ChannelAssignment& assignment, const SimState& initial,
                     const Controller& controller, int n_actions) const;

  // Drops the rest pose under gravity with all channels off until the
  // kinetic energy per node stays below settle_energy for settle_window
  // steps. Throws NoSettle at the step cap.
  SimState settle() const;

  EnergyBreakdown energy(const SimState& state) const;

  // Number of nodes below the ground plane.
  int contact_count(const SimState& state) const;

 private:
  struct Pair {
    int i;
    int j;
    double rest;
  };

  TrussGraph graph_;
  PhysicsConfig config_;
  std::vector<double> contract_;
  std::vector<double> expand_;
  std::vector<Pair> fixed_pairs_;
};

// Free-function forms. Each builds a Simulator; prefer the class in loops.
SimState step(const TrussGraph& graph, const ChannelAssignment& assignment,
              const SimState& state, const PhysicsConfig& config);
Trajectory rollout(const TrussGraph& graph, const ChannelAssignment& assignment,
                   const SimState& initial, const Controller& controller, int n_actions,
                   const PhysicsConfig& config);
SimState settle(const TrussGraph& graph, const PhysicsConfig& config);

}  // namespace vgt
