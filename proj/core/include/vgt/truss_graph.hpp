#pragma once

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vgt {

using Vec3 = Eigen::Vector3d;

// Undirected beam between two joints, stored with a < b.
struct Edge {
  int a = 0;
  int b = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct MirrorPlane {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitX();

  // Reflection of p across the plane. Assumes a unit normal.
  Vec3 reflect(const Vec3& p) const;
};

// Unassigned marker used while channel labels are being grown.
inline constexpr int kUnassigned = -1;

// A truss with a fixed channel budget. Vertex positions are the rest pose.
//
// When no mirror plane is present every mirror map is the identity: each
// edge is its own mirror image, each channel is self-mirrored and the half
// graph is the whole graph. Operators can then treat both cases uniformly.
//
// Instances are immutable once constructed.
class TrussGraph {
 public:
  TrussGraph() = default;
  TrussGraph(std::vector<Vec3> vertices, std::vector<Edge> edges, int n_channels,
             std::vector<std::vector<int>> fixed_groups = {}, int center_edge = 0);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_channels() const { return n_channels_; }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<size_t>(e)]; }
  const std::vector<std::vector<int>>& fixed_groups() const { return fixed_groups_; }
  int center_edge() const { return center_edge_; }

  // Rest-pose beam length.
  double rest_length(int e) const;

  // Index of the edge joining a and b, or -1.
  int find_edge(int a, int b) const;

  const std::vector<int>& incident_edges(int vertex) const {
    return incident_[static_cast<size_t>(vertex)];
  }
  // Edges that share at least one joint with e (excluding e).
  const std::vector<int>& edge_neighbors(int e) const {
    return neighbors_[static_cast<size_t>(e)];
  }

  bool has_mirror() const { return plane_.has_value(); }
  const std::optional<MirrorPlane>& mirror_plane() const { return plane_; }

  int vertex_mirror(int v) const { return vertex_mirror_[static_cast<size_t>(v)]; }
  int edge_mirror(int e) const { return edge_mirror_[static_cast<size_t>(e)]; }
  int channel_mirror(int c) const { return channel_mirror_[static_cast<size_t>(c)]; }
  const std::vector<int>& channel_mirror_map() const { return channel_mirror_; }

  bool is_self_mirrored_edge(int e) const { return edge_mirror(e) == e; }
  bool is_self_mirrored_channel(int c) const { return channel_mirror(c) == c; }

  // E_m: edges mapped onto themselves.
  const std::vector<int>& self_mirrored_edges() const { return self_mirrored_edges_; }
  // One representative per mirror orbit (the lower index), plus all of E_m.
  const std::vector<int>& half_edges() const { return half_edges_; }
  bool in_half_graph(int e) const { return in_half_[static_cast<size_t>(e)] != 0; }

  friend TrussGraph build_mirror_maps(const TrussGraph& graph, const MirrorPlane& plane,
                                      double tol,
                                      std::optional<std::vector<int>> channel_mirror);

 private:
  void build_adjacency();
  void set_identity_maps();
  void set_channel_mirror(std::vector<int> channel_mirror);

  std::vector<Vec3> vertices_;
  std::vector<Edge> edges_;
  int n_channels_ = 0;
  std::vector<std::vector<int>> fixed_groups_;
  int center_edge_ = 0;

  std::vector<std::vector<int>> incident_;
  std::vector<std::vector<int>> neighbors_;

  std::optional<MirrorPlane> plane_;
  std::vector<int> vertex_mirror_;
  std::vector<int> edge_mirror_;
  std::vector<int> channel_mirror_;
  std::vector<int> self_mirrored_edges_;
  std::vector<int> half_edges_;
  std::vector<char> in_half_;
};

// Pairs channel 2k with 2k+1; the last channel is self-mirrored when n is odd.
std::vector<int> default_channel_mirror(int n_channels);

// Derives vertex, edge and channel mirror maps from geometry. Throws
// UnmatchedVertex when a reflected vertex has no partner within tol, and
// UnmatchedEdge when the reflected topology is missing a beam.
TrussGraph build_mirror_maps(const TrussGraph& graph, const MirrorPlane& plane,
                             double tol = 1e-6,
                             std::optional<std::vector<int>> channel_mirror = std::nullopt);

struct ChannelAssignment {
  std::vector<int> channels;

  int operator[](int e) const { return channels[static_cast<size_t>(e)]; }
  int size() const { return static_cast<int>(channels.size()); }

  friend bool operator==(const ChannelAssignment&, const ChannelAssignment&) = default;
};

// True iff the beams labelled `channel` form one connected piece, where two
// beams are adjacent when they share a joint. Throws EmptyChannel when no
// beam carries the channel.
bool channel_subgraph_connected(const TrussGraph& graph, std::span<const int> channels,
                                int channel);
bool channel_subgraph_connected(const TrussGraph& graph, const ChannelAssignment& assignment,
                                int channel);

// Sorted, de-duplicated channels carried by beams that touch `edge`.
// Unassigned beams contribute nothing.
std::vector<int> channels_incident_edge(const TrussGraph& graph, std::span<const int> channels,
                                        int edge);
std::vector<int> channels_incident_edge(const TrussGraph& graph,
                                        const ChannelAssignment& assignment, int edge);

// Mirrored relabelling: result[edge_mirror(e)] = channel_mirror(channels[e]).
ChannelAssignment mirror_assignment(const TrussGraph& graph, const ChannelAssignment& assignment);

struct AssignmentReport {
  bool length_ok = true;
  bool labels_in_range = true;
  bool all_channels_present = true;
  bool connected = true;
  bool symmetric = true;
  std::vector<int> missing_channels;
  std::vector<int> disconnected_channels;
  std::vector<int> asymmetric_edges;

  bool ok() const {
    return length_ok && labels_in_range && all_channels_present && connected && symmetric;
  }
};

// Full invariant suite: coverage, per-channel connectivity and mirror symmetry.
AssignmentReport validate_assignment(const TrussGraph& graph, const ChannelAssignment& assignment);

// Whole-graph connectivity under shared-joint adjacency.
bool edges_connected(const TrussGraph& graph);

}  // namespace vgt
