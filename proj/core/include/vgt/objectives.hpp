#pragma once

#include <Eigen/Geometry>

#include <cmath>
#include <string>
#include <vector>

#include "vgt/sim.hpp"
#include "vgt/truss_graph.hpp"

namespace vgt {

enum class ObjectiveKind { kMoveForward, kTurn, kLower, kTilt };

enum class LowerMode {
  kMinimum,  // deepest mean tabletop height reached during the episode
  kFinal,    // mean tabletop height at the last snapshot
};

struct ObjectiveSpec {
  std::string name;
  ObjectiveKind kind = ObjectiveKind::kMoveForward;
  double target_angle = 0.0;  // rad; used by kTurn and kTilt
  LowerMode lower_mode = LowerMode::kMinimum;
};

std::string_view to_string(ObjectiveKind kind);
ObjectiveKind objective_kind_from_string(std::string_view name);
bool uses_target_angle(ObjectiveKind kind);

// Rating of a trajectory whose simulation blew up.
inline constexpr double kFlaggedScore = -1e30;

// Body frame carried by the center beam: midpoint plus heading about +z.
struct CenterFrame {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;  // rad, 0 when the beam projects onto +x

  Eigen::Matrix3d rotation() const {
    return Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();
  }
  Vec3 forward() const { return {std::cos(yaw), std::sin(yaw), 0.0}; }
};

// Throws DegenerateBeam when the center beam's ground projection is shorter
// than 1e-9 m.
CenterFrame center_frame(const TrussGraph& graph, const SimState& state);

// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

// Mean height of the tabletop (fixed_groups[0]).
double tabletop_height(const TrussGraph& graph, const SimState& state);

// Angle between the tabletop's best-fit plane normal and vertical, in [0, pi/2].
double tabletop_tilt(const TrussGraph& graph, const SimState& state);

// Higher is better for every kind. Flagged trajectories score kFlaggedScore.
double score(const ObjectiveSpec& spec, const TrussGraph& graph, const Trajectory& trajectory);

std::vector<double> score_all(const std::vector<ObjectiveSpec>& specs, const TrussGraph& graph,
                              const Trajectory& trajectory);

}  // namespace vgt
