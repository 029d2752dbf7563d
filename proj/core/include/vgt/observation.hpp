#pragma once

#include <vector>

#include "vgt/sim.hpp"
#include "vgt/truss_graph.hpp"

namespace vgt {

using Observation = std::vector<double>;

// 12 * n_v + n_channels.
int observation_size(const TrussGraph& graph);

// [V (3n_v), U (3n_v), V' (3n_v), U' (3n_v), k (n_channels)]
//
// V' and U' are positions and velocities expressed in the center-beam frame:
// translated by -p_c and rotated by the inverse of the frame's yaw. Only yaw
// is removed, so the relative block keeps gravity along -z. Channel states
// are 0 or 1. Throws DegenerateBeam if the center frame is undefined.
Observation observe(const TrussGraph& graph, const SimState& state);

// Bit i of `action` is channel i. Throws OutOfRange outside [0, 2^n_channels).
std::vector<bool> encode_action(int action, int n_channels);
int decode_action(const std::vector<bool>& bits);

// Largest channel count whose action space is addressable.
inline constexpr int kMaxActionChannels = 20;

}  // namespace vgt
