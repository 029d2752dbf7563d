#include "vgt/operators.hpp"

#include <algorithm>
#include <optional>

#include "vgt/error.hpp"

namespace vgt {
namespace {

// A self-mirrored beam is its own image, so its label must equal its mirror.
bool admissible(const TrussGraph& graph, int edge, int channel) {
  return !graph.is_self_mirrored_edge(edge) || graph.is_self_mirrored_channel(channel);
}

void assign_orbit(const TrussGraph& graph, std::vector<int>& channels, int edge, int channel) {
  channels[static_cast<size_t>(edge)] = channel;
  channels[static_cast<size_t>(graph.edge_mirror(edge))] = graph.channel_mirror(channel);
}

std::vector<int> admissible_incident(const TrussGraph& graph, const std::vector<int>& channels,
                                     int edge) {
  std::vector<int> out = channels_incident_edge(graph, channels, edge);
  std::erase_if(out, [&](int c) { return !admissible(graph, edge, c); });
  return out;
}

void check_preconditions(const TrussGraph& graph) {
  int self_channels = 0;
  for (int c = 0; c < graph.num_channels(); ++c) {
    if (graph.is_self_mirrored_channel(c)) ++self_channels;
  }
  int self_half_edges = 0;
  int paired_half_edges = 0;
  for (int e : graph.half_edges()) {
    (graph.is_self_mirrored_edge(e) ? self_half_edges : paired_half_edges)++;
  }
  const int pairs = (graph.num_channels() - self_channels) / 2;
  if (self_half_edges < self_channels) {
    throw Error(ErrorCode::kInsufficientSelfMirroredEdges,
                std::to_string(self_channels) + " self-mirrored channels but only " +
                    std::to_string(self_half_edges) + " self-mirrored edges");
  }
  if (paired_half_edges < pairs) {
    throw Error(ErrorCode::kInsufficientSelfMirroredEdges,
                "not enough mirrored edge pairs to seed every mirrored channel pair");
  }
  if (self_channels == 0 && self_half_edges > 0) {
    throw Error(ErrorCode::kUnsatisfiableSymmetry,
                "self-mirrored edges exist but no channel is self-mirrored");
  }
}

std::optional<std::vector<int>> try_initialize(const TrussGraph& graph, Rng& rng) {
  std::vector<int> channels(static_cast<size_t>(graph.num_edges()), kUnassigned);

  std::vector<int> unassigned_self;
  std::vector<int> unassigned_paired;
  for (int e : graph.half_edges()) {
    (graph.is_self_mirrored_edge(e) ? unassigned_self : unassigned_paired).push_back(e);
  }
  auto take = [&rng](std::vector<int>& pool) {
    const int i = uniform_index(rng, static_cast<int>(pool.size()));
    const int e = pool[static_cast<size_t>(i)];
    pool.erase(pool.begin() + i);
    return e;
  };

  // Seeding: one beam per channel, or per mirrored pair of channels.
  for (int c = 0; c < graph.num_channels(); ++c) {
    const int m = graph.channel_mirror(c);
    if (m < c) continue;
    const int e = (m == c) ? take(unassigned_self) : take(unassigned_paired);
    assign_orbit(graph, channels, e, c);
  }

  std::vector<int> remaining = unassigned_self;
  remaining.insert(remaining.end(), unassigned_paired.begin(), unassigned_paired.end());
  std::sort(remaining.begin(), remaining.end());

  // Growth: label beams adjacent to already-labelled ones.
  while (!remaining.empty()) {
    std::vector<int> frontier;
    for (int e : remaining) {
      if (!admissible_incident(graph, channels, e).empty()) frontier.push_back(e);
    }
    if (frontier.empty()) return std::nullopt;
    const int e = pick(rng, frontier);
    const int c = pick(rng, admissible_incident(graph, channels, e));
    assign_orbit(graph, channels, e, c);
    remaining.erase(std::find(remaining.begin(), remaining.end(), e));
  }
  return channels;
}

bool all_channels_connected(const TrussGraph& graph, const std::vector<int>& channels) {
  std::vector<int> counts(static_cast<size_t>(graph.num_channels()), 0);
  for (int c : channels) ++counts[static_cast<size_t>(c)];
  for (int c = 0; c < graph.num_channels(); ++c) {
    if (counts[static_cast<size_t>(c)] == 0) return false;
    if (!channel_subgraph_connected(graph, channels, c)) return false;
  }
  return true;
}

}  // namespace

ChannelAssignment initialize_assignment(const TrussGraph& graph, Rng& rng, int max_restarts) {
  check_preconditions(graph);
  for (int attempt = 0; attempt <= max_restarts; ++attempt) {
    if (auto channels = try_initialize(graph, rng)) {
      return ChannelAssignment{std::move(*channels)};
    }
  }
  throw Error(ErrorCode::kInitializationStalled,
              "channel growth stranded a self-mirrored edge on every attempt");
}

ChannelAssignment mutate_assignment(const TrussGraph& graph, const ChannelAssignment& assignment,
                                    Rng& rng) {
  std::vector<int> channels = assignment.channels;

  // Half-graph edges that touch at least one admissible channel other than their own.
  std::vector<int> candidates;
  for (int e : graph.half_edges()) {
    const auto inc = admissible_incident(graph, channels, e);
    if (std::any_of(inc.begin(), inc.end(), [&](int c) { return c != channels[static_cast<size_t>(e)]; })) {
      candidates.push_back(e);
    }
  }

  while (!candidates.empty()) {
    const int i = uniform_index(rng, static_cast<int>(candidates.size()));
    const int e = candidates[static_cast<size_t>(i)];
    const int original = channels[static_cast<size_t>(e)];
    std::vector<int> options = admissible_incident(graph, channels, e);
    std::erase(options, original);
    std::shuffle(options.begin(), options.end(), rng);
    for (int c : options) {
      assign_orbit(graph, channels, e, c);
      if (all_channels_connected(graph, channels)) return ChannelAssignment{std::move(channels)};
      assign_orbit(graph, channels, e, original);
    }
    candidates.erase(candidates.begin() + i);
  }
  throw Error(ErrorCode::kNoValidMutation, "no relabelling keeps every channel connected");
}

ControlSequence mutate_control(const ControlSequence& control, Rng& rng, double flip_prob) {
  if (!(flip_prob > 0.0 && flip_prob <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "flip_prob must lie in (0, 1]");
  }
  std::bernoulli_distribution flip(flip_prob);
  while (true) {
    ControlSequence out = control;
    bool changed = false;
    for (int i = 0; i < out.size(); ++i) {
      if (flip(rng)) {
        out.flip(i);
        changed = true;
      }
    }
    if (changed) return out;
  }
}

}  // namespace vgt
