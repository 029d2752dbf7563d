#pragma once

#include "vgt/genome.hpp"
#include "vgt/random.hpp"
#include "vgt/truss_graph.hpp"

namespace vgt {

// Channel-growing initialization on the half graph.
//
// Seeds one beam per channel (self-mirrored channels on self-mirrored beams,
// mirrored pairs on a beam and its image), then repeatedly labels a random
// unassigned beam that touches a labelled one with one of the channels it
// touches. Every label is written to the beam and its mirror image at once,
// so the result is symmetric by construction.
//
// A self-mirrored beam may only carry a self-mirrored channel. If growth
// strands such a beam among mirrored-pair channels the attempt is restarted
// with the same generator; InitializationStalled is raised after
// `max_restarts` failed attempts.
ChannelAssignment initialize_assignment(const TrussGraph& graph, Rng& rng,
                                        int max_restarts = 1000);

// Relabels one mirror orbit with a channel it already touches, keeping every
// channel non-empty and connected. Candidates are tried in random order and
// NoValidMutation is raised once all of them have been rejected.
ChannelAssignment mutate_assignment(const TrussGraph& graph, const ChannelAssignment& assignment,
                                    Rng& rng);

// Flips each bit with probability flip_prob, resampling until at least one
// bit changed.
ControlSequence mutate_control(const ControlSequence& control, Rng& rng, double flip_prob);

}  // namespace vgt
