#include "vgt/observation.hpp"

#include "vgt/error.hpp"
#include "vgt/objectives.hpp"

namespace vgt {

int observation_size(const TrussGraph& graph) {
  return 12 * graph.num_vertices() + graph.num_channels();
}

Observation observe(const TrussGraph& graph, const SimState& state) {
  const CenterFrame frame = center_frame(graph, state);
  const Eigen::Matrix3d to_body = frame.rotation().transpose();
  const size_t nv = static_cast<size_t>(graph.num_vertices());

  Observation out(static_cast<size_t>(observation_size(graph)));
  auto put = [&](size_t block, size_t v, const Vec3& x) {
    const size_t base = block * 3 * nv + 3 * v;
    out[base] = x.x();
    out[base + 1] = x.y();
    out[base + 2] = x.z();
  };
  for (size_t v = 0; v < nv; ++v) {
    put(0, v, state.positions[v]);
    put(1, v, state.velocities[v]);
    put(2, v, to_body * (state.positions[v] - frame.position));
    put(3, v, to_body * state.velocities[v]);
  }
  for (size_t c = 0; c < state.channel_states.size(); ++c) {
    out[12 * nv + c] = state.channel_states[c] ? 1.0 : 0.0;
  }
  return out;
}

std::vector<bool> encode_action(int action, int n_channels) {
  if (n_channels < 1 || n_channels > kMaxActionChannels) {
    throw Error(ErrorCode::kOutOfRange, "unsupported channel count " + std::to_string(n_channels));
  }
  if (action < 0 || action >= (1 << n_channels)) {
    throw Error(ErrorCode::kOutOfRange, "action " + std::to_string(action) + " outside [0, 2^" +
                                            std::to_string(n_channels) + ")");
  }
  std::vector<bool> bits(static_cast<size_t>(n_channels));
  for (int i = 0; i < n_channels; ++i) bits[static_cast<size_t>(i)] = ((action >> i) & 1) != 0;
  return bits;
}

int decode_action(const std::vector<bool>& bits) {
  if (bits.empty() || static_cast<int>(bits.size()) > kMaxActionChannels) {
    throw Error(ErrorCode::kOutOfRange, "unsupported channel count");
  }
  int action = 0;
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) action |= 1 << i;
  }
  return action;
}

}  // namespace vgt
