#include "vgt/truss_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <utility>

#include "vgt/error.hpp"

namespace vgt {

Vec3 MirrorPlane::reflect(const Vec3& p) const {
  return p - 2.0 * (p - point).dot(normal) * normal;
}

TrussGraph::TrussGraph(std::vector<Vec3> vertices, std::vector<Edge> edges, int n_channels,
                       std::vector<std::vector<int>> fixed_groups, int center_edge)
    : vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      n_channels_(n_channels),
      fixed_groups_(std::move(fixed_groups)),
      center_edge_(center_edge) {
  if (n_channels_ <= 0) {
    throw Error(ErrorCode::kInvalidGraph, "n_channels must be positive");
  }
  const int nv = num_vertices();
  for (const Vec3& p : vertices_) {
    if (!p.allFinite()) throw Error(ErrorCode::kInvalidGraph, "non-finite vertex position");
  }
  std::set<std::pair<int, int>> seen;
  for (Edge& e : edges_) {
    if (e.a < 0 || e.b < 0 || e.a >= nv || e.b >= nv) {
      throw Error(ErrorCode::kInvalidGraph, "edge references an invalid vertex");
    }
    if (e.a == e.b) throw Error(ErrorCode::kInvalidGraph, "edge joins a vertex to itself");
    if (e.a > e.b) std::swap(e.a, e.b);
    if (!seen.emplace(e.a, e.b).second) {
      throw Error(ErrorCode::kInvalidGraph,
                  "duplicate edge " + std::to_string(e.a) + "-" + std::to_string(e.b));
    }
  }
  for (const auto& group : fixed_groups_) {
    for (int v : group) {
      if (v < 0 || v >= nv) throw Error(ErrorCode::kInvalidGraph, "fixed group vertex out of range");
    }
  }
  if (!edges_.empty() && (center_edge_ < 0 || center_edge_ >= num_edges())) {
    throw Error(ErrorCode::kInvalidGraph, "center_edge out of range");
  }
  build_adjacency();
  if (!edges_connected(*this)) {
    throw Error(ErrorCode::kInvalidGraph, "edge set is not connected");
  }
  set_identity_maps();
}

void TrussGraph::build_adjacency() {
  incident_.assign(vertices_.size(), {});
  for (int e = 0; e < num_edges(); ++e) {
    incident_[static_cast<size_t>(edges_[static_cast<size_t>(e)].a)].push_back(e);
    incident_[static_cast<size_t>(edges_[static_cast<size_t>(e)].b)].push_back(e);
  }
  neighbors_.assign(edges_.size(), {});
  for (int e = 0; e < num_edges(); ++e) {
    auto& out = neighbors_[static_cast<size_t>(e)];
    for (int v : {edge(e).a, edge(e).b}) {
      for (int other : incident_edges(v)) {
        if (other != e) out.push_back(other);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
}

void TrussGraph::set_identity_maps() {
  plane_.reset();
  vertex_mirror_.resize(vertices_.size());
  for (int v = 0; v < num_vertices(); ++v) vertex_mirror_[static_cast<size_t>(v)] = v;
  edge_mirror_.resize(edges_.size());
  self_mirrored_edges_.clear();
  half_edges_.clear();
  in_half_.assign(edges_.size(), 1);
  for (int e = 0; e < num_edges(); ++e) {
    edge_mirror_[static_cast<size_t>(e)] = e;
    self_mirrored_edges_.push_back(e);
    half_edges_.push_back(e);
  }
  channel_mirror_.resize(static_cast<size_t>(n_channels_));
  for (int c = 0; c < n_channels_; ++c) channel_mirror_[static_cast<size_t>(c)] = c;
}

void TrussGraph::set_channel_mirror(std::vector<int> channel_mirror) {
  if (static_cast<int>(channel_mirror.size()) != n_channels_) {
    throw Error(ErrorCode::kInvalidChannelMirror, "channel_mirror length must equal n_channels");
  }
  for (int c = 0; c < n_channels_; ++c) {
    const int m = channel_mirror[static_cast<size_t>(c)];
    if (m < 0 || m >= n_channels_ || channel_mirror[static_cast<size_t>(m)] != c) {
      throw Error(ErrorCode::kInvalidChannelMirror, "channel_mirror is not an involution");
    }
  }
  channel_mirror_ = std::move(channel_mirror);
}

double TrussGraph::rest_length(int e) const {
  const Edge& ed = edge(e);
  return (vertices_[static_cast<size_t>(ed.b)] - vertices_[static_cast<size_t>(ed.a)]).norm();
}

int TrussGraph::find_edge(int a, int b) const {
  if (a < 0 || b < 0 || a >= num_vertices() || b >= num_vertices()) return -1;
  for (int e : incident_edges(a)) {
    const Edge& ed = edge(e);
    if ((ed.a == a && ed.b == b) || (ed.a == b && ed.b == a)) return e;
  }
  return -1;
}

std::vector<int> default_channel_mirror(int n_channels) {
  std::vector<int> map(static_cast<size_t>(std::max(n_channels, 0)));
  for (int c = 0; c < n_channels; ++c) {
    if (c % 2 == 0) {
      map[static_cast<size_t>(c)] = (c + 1 < n_channels) ? c + 1 : c;
    } else {
      map[static_cast<size_t>(c)] = c - 1;
    }
  }
  return map;
}

TrussGraph build_mirror_maps(const TrussGraph& graph, const MirrorPlane& plane, double tol,
                             std::optional<std::vector<int>> channel_mirror) {
  const double norm = plane.normal.norm();
  if (!(norm > 1e-12) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kDegenerateNormal, "mirror plane normal has zero length");
  }
  MirrorPlane unit{plane.point, plane.normal / norm};

  TrussGraph out = graph;
  const int nv = graph.num_vertices();
  out.vertex_mirror_.assign(static_cast<size_t>(nv), -1);
  for (int v = 0; v < nv; ++v) {
    const Vec3 r = unit.reflect(graph.vertices()[static_cast<size_t>(v)]);
    int best = -1;
    double best_dist = tol;
    for (int w = 0; w < nv; ++w) {
      const double d = (graph.vertices()[static_cast<size_t>(w)] - r).norm();
      if (d <= best_dist) {
        best = w;
        best_dist = d;
      }
    }
    if (best < 0) {
      throw Error(ErrorCode::kUnmatchedVertex,
                  "vertex " + std::to_string(v) + " has no mirror partner");
    }
    out.vertex_mirror_[static_cast<size_t>(v)] = best;
  }
  for (int v = 0; v < nv; ++v) {
    if (out.vertex_mirror(out.vertex_mirror(v)) != v) {
      throw Error(ErrorCode::kUnmatchedVertex,
                  "vertex mirror is not an involution at vertex " + std::to_string(v));
    }
  }

  const int ne = graph.num_edges();
  out.edge_mirror_.assign(static_cast<size_t>(ne), -1);
  out.self_mirrored_edges_.clear();
  out.half_edges_.clear();
  out.in_half_.assign(static_cast<size_t>(ne), 0);
  for (int e = 0; e < ne; ++e) {
    const Edge& ed = graph.edge(e);
    const int m = graph.find_edge(out.vertex_mirror(ed.a), out.vertex_mirror(ed.b));
    if (m < 0) {
      throw Error(ErrorCode::kUnmatchedEdge,
                  "edge " + std::to_string(e) + " has no mirrored counterpart");
    }
    out.edge_mirror_[static_cast<size_t>(e)] = m;
  }
  for (int e = 0; e < ne; ++e) {
    const int m = out.edge_mirror(e);
    if (m == e) out.self_mirrored_edges_.push_back(e);
    if (m >= e) {
      out.half_edges_.push_back(e);
      out.in_half_[static_cast<size_t>(e)] = 1;
    }
  }

  out.plane_ = unit;
  out.set_channel_mirror(channel_mirror ? std::move(*channel_mirror)
                                        : default_channel_mirror(graph.num_channels()));
  return out;
}

bool channel_subgraph_connected(const TrussGraph& graph, std::span<const int> channels,
                                int channel) {
  const int ne = graph.num_edges();
  int start = -1;
  int count = 0;
  for (int e = 0; e < ne; ++e) {
    if (channels[static_cast<size_t>(e)] == channel) {
      if (start < 0) start = e;
      ++count;
    }
  }
  if (start < 0) {
    throw Error(ErrorCode::kEmptyChannel, "no edge carries channel " + std::to_string(channel));
  }
  std::vector<char> visited(static_cast<size_t>(ne), 0);
  std::deque<int> queue{start};
  visited[static_cast<size_t>(start)] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const int e = queue.front();
    queue.pop_front();
    for (int n : graph.edge_neighbors(e)) {
      if (!visited[static_cast<size_t>(n)] && channels[static_cast<size_t>(n)] == channel) {
        visited[static_cast<size_t>(n)] = 1;
        ++reached;
        queue.push_back(n);
      }
    }
  }
  return reached == count;
}

bool channel_subgraph_connected(const TrussGraph& graph, const ChannelAssignment& assignment,
                                int channel) {
  return channel_subgraph_connected(graph, std::span<const int>(assignment.channels), channel);
}

std::vector<int> channels_incident_edge(const TrussGraph& graph, std::span<const int> channels,
                                        int edge) {
  std::vector<int> out;
  for (int n : graph.edge_neighbors(edge)) {
    const int c = channels[static_cast<size_t>(n)];
    if (c != kUnassigned) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> channels_incident_edge(const TrussGraph& graph,
                                        const ChannelAssignment& assignment, int edge) {
  return channels_incident_edge(graph, std::span<const int>(assignment.channels), edge);
}

ChannelAssignment mirror_assignment(const TrussGraph& graph, const ChannelAssignment& assignment) {
  ChannelAssignment out = assignment;
  for (int e = 0; e < graph.num_edges(); ++e) {
    const int c = assignment[e];
    out.channels[static_cast<size_t>(graph.edge_mirror(e))] =
        c == kUnassigned ? kUnassigned : graph.channel_mirror(c);
  }
  return out;
}

AssignmentReport validate_assignment(const TrussGraph& graph, const ChannelAssignment& assignment) {
  AssignmentReport report;
  if (assignment.size() != graph.num_edges()) {
    report.length_ok = false;
    report.labels_in_range = false;
    report.all_channels_present = false;
    report.connected = false;
    report.symmetric = false;
    return report;
  }
  std::vector<int> counts(static_cast<size_t>(graph.num_channels()), 0);
  for (int c : assignment.channels) {
    if (c < 0 || c >= graph.num_channels()) {
      report.labels_in_range = false;
    } else {
      ++counts[static_cast<size_t>(c)];
    }
  }
  for (int c = 0; c < graph.num_channels(); ++c) {
    if (counts[static_cast<size_t>(c)] == 0) {
      report.all_channels_present = false;
      report.missing_channels.push_back(c);
    } else if (!channel_subgraph_connected(graph, assignment, c)) {
      report.connected = false;
      report.disconnected_channels.push_back(c);
    }
  }
  if (report.labels_in_range) {
    for (int e = 0; e < graph.num_edges(); ++e) {
      if (assignment[graph.edge_mirror(e)] != graph.channel_mirror(assignment[e])) {
        report.symmetric = false;
        report.asymmetric_edges.push_back(e);
      }
    }
  } else {
    report.symmetric = false;
  }
  return report;
}

bool edges_connected(const TrussGraph& graph) {
  const int ne = graph.num_edges();
  if (ne == 0) return true;
  std::vector<char> visited(static_cast<size_t>(ne), 0);
  std::deque<int> queue{0};
  visited[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const int e = queue.front();
    queue.pop_front();
    for (int n : graph.edge_neighbors(e)) {
      if (!visited[static_cast<size_t>(n)]) {
        visited[static_cast<size_t>(n)] = 1;
        ++reached;
        queue.push_back(n);
      }
    }
  }
  return reached == ne;
}

}  // namespace vgt
