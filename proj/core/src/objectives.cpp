#include "vgt/objectives.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vgt/error.hpp"

namespace vgt {

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kMoveForward: return "move_forward";
    case ObjectiveKind::kTurn: return "turn";
    case ObjectiveKind::kLower: return "lower";
    case ObjectiveKind::kTilt: return "tilt";
  }
  return "unknown";
}

ObjectiveKind objective_kind_from_string(std::string_view name) {
  for (auto kind : {ObjectiveKind::kMoveForward, ObjectiveKind::kTurn, ObjectiveKind::kLower,
                    ObjectiveKind::kTilt}) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown objective kind '" + std::string(name) + "'");
}

bool uses_target_angle(ObjectiveKind kind) {
  return kind == ObjectiveKind::kTurn || kind == ObjectiveKind::kTilt;
}

CenterFrame center_frame(const TrussGraph& graph, const SimState& state) {
  if (graph.num_edges() == 0) throw Error(ErrorCode::kDegenerateBeam, "graph has no center beam");
  const Edge& beam = graph.edge(graph.center_edge());
  const Vec3& lo = state.positions[static_cast<size_t>(beam.a)];
  const Vec3& hi = state.positions[static_cast<size_t>(beam.b)];
  const Vec3 d = hi - lo;
  const double planar = std::hypot(d.x(), d.y());
  if (!(planar >= 1e-9)) {
    throw Error(ErrorCode::kDegenerateBeam, "center beam is vertical");
  }
  CenterFrame frame;
  frame.position = 0.5 * (lo + hi);
  frame.yaw = std::atan2(d.y(), d.x());
  return frame;
}

double wrap_angle(double angle) {
  constexpr double kPi = std::numbers::pi;
  double w = std::remainder(angle, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

namespace {

const std::vector<int>& tabletop(const TrussGraph& graph) {
  if (graph.fixed_groups().empty() || graph.fixed_groups()[0].empty()) {
    throw Error(ErrorCode::kInvalidGraph, "objective needs a tabletop group (fixed_groups[0])");
  }
  return graph.fixed_groups()[0];
}

}  // namespace

double tabletop_height(const TrussGraph& graph, const SimState& state) {
  const auto& group = tabletop(graph);
  double sum = 0.0;
  for (int v : group) sum += state.positions[static_cast<size_t>(v)].z();
  return sum / static_cast<double>(group.size());
}

double tabletop_tilt(const TrussGraph& graph, const SimState& state) {
  const auto& group = tabletop(graph);
  if (group.size() < 3) throw Error(ErrorCode::kInvalidGraph, "tabletop needs three vertices");
  Vec3 mean = Vec3::Zero();
  for (int v : group) mean += state.positions[static_cast<size_t>(v)];
  mean /= static_cast<double>(group.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (int v : group) {
    const Vec3 d = state.positions[static_cast<size_t>(v)] - mean;
    cov += d * d.transpose();
  }
  // Eigenvalues come back ascending: column 0 is the plane normal.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  const Vec3 normal = solver.eigenvectors().col(0).normalized();
  return std::atan2(normal.head<2>().norm(), std::abs(normal.z()));
}

double score(const ObjectiveSpec& spec, const TrussGraph& graph, const Trajectory& trajectory) {
  if (trajectory.flagged) return kFlaggedScore;
  if (trajectory.states.size() < 2) {
    throw Error(ErrorCode::kInvalidConfig, "scoring needs at least two snapshots");
  }
  const SimState& first = trajectory.states.front();
  const SimState& last = trajectory.states.back();

  switch (spec.kind) {
    case ObjectiveKind::kMoveForward: {
      const CenterFrame start = center_frame(graph, first);
      const CenterFrame end = center_frame(graph, last);
      return (end.position - start.position).dot(start.forward());
    }
    case ObjectiveKind::kTurn: {
      const double turned = center_frame(graph, last).yaw - center_frame(graph, first).yaw;
      return -std::abs(wrap_angle(turned - spec.target_angle));
    }
    case ObjectiveKind::kLower: {
      const double initial = tabletop_height(graph, first);
      if (spec.lower_mode == LowerMode::kFinal) return initial - tabletop_height(graph, last);
      double lowest = initial;
      for (const SimState& s : trajectory.states) lowest = std::min(lowest, tabletop_height(graph, s));
      return initial - lowest;
    }
    case ObjectiveKind::kTilt:
      return -std::abs(tabletop_tilt(graph, last) - spec.target_angle);
  }
  return kFlaggedScore;
}

std::vector<double> score_all(const std::vector<ObjectiveSpec>& specs, const TrussGraph& graph,
                              const Trajectory& trajectory) {
  std::vector<double> out;
  out.reserve(specs.size());
  for (const auto& spec : specs) out.push_back(score(spec, graph, trajectory));
  return out;
}

}  // namespace vgt
