#pragma once

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "vgt/error.hpp"
#include "vgt/operators.hpp"
#include "vgt/random.hpp"
#include "vgt/truss_graph.hpp"

namespace vgt::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(VGT_DATA_DIR) / name;
}

inline TrussGraph triangle(int n_channels = 2) {
  return TrussGraph({{0, 0, 0}, {1, 0, 0}, {0.5, 0.8, 0}}, {{0, 1}, {1, 2}, {0, 2}}, n_channels);
}

inline TrussGraph path4(int n_channels = 2) {
  return TrussGraph({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}}, {{0, 1}, {1, 2}, {2, 3}}, n_channels);
}

// Union-find over edge indices: two edges of `channel` are merged when they
// share a vertex. Written independently of the BFS in the library.
inline bool union_find_connected(const TrussGraph& graph, const std::vector<int>& channels, int channel) {
  const int n = graph.num_edges();
  std::vector<int> parent(static_cast<size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  };
  std::vector<int> members;
  for (int e = 0; e < n; ++e) {
    if (channels[static_cast<size_t>(e)] == channel) members.push_back(e);
  }
  for (int a : members) {
    for (int b : members) {
      const Edge& ea = graph.edge(a);
      const Edge& eb = graph.edge(b);
      if (ea.a == eb.a || ea.a == eb.b || ea.b == eb.a || ea.b == eb.b) {
        parent[static_cast<size_t>(find(a))] = find(b);
      }
    }
  }
  std::set<int> roots;
  for (int e : members) roots.insert(find(e));
  return roots.size() == 1;
}

// Scan of every edge for a shared endpoint.
inline std::vector<int> brute_incident_channels(const TrussGraph& graph, const std::vector<int>& channels,
                                                int edge) {
  std::set<int> out;
  const Edge& q = graph.edge(edge);
  for (int e = 0; e < graph.num_edges(); ++e) {
    if (e == edge || channels[static_cast<size_t>(e)] < 0) continue;
    const Edge& o = graph.edge(e);
    if (o.a == q.a || o.a == q.b || o.b == q.a || o.b == q.b) out.insert(channels[static_cast<size_t>(e)]);
  }
  return {out.begin(), out.end()};
}

// Independent invariant check: coverage, union-find connectivity, symmetry.
inline bool assignment_valid(const TrussGraph& graph, const ChannelAssignment& a) {
  if (a.size() != graph.num_edges()) return false;
  std::vector<int> count(static_cast<size_t>(graph.num_channels()), 0);
  for (int c : a.channels) {
    if (c < 0 || c >= graph.num_channels()) return false;
    ++count[static_cast<size_t>(c)];
  }
  for (int c = 0; c < graph.num_channels(); ++c) {
    if (count[static_cast<size_t>(c)] == 0) return false;
    if (!union_find_connected(graph, a.channels, c)) return false;
  }
  for (int e = 0; e < graph.num_edges(); ++e) {
    if (a[graph.edge_mirror(e)] != graph.channel_mirror(a[e])) return false;
  }
  return true;
}

inline std::vector<int> random_involution(Rng& rng, int n) {
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> map(static_cast<size_t>(n));
  std::iota(map.begin(), map.end(), 0);
  for (size_t i = 0; i + 1 < order.size(); i += 2) {
    if (uniform01(rng) < 0.6) {
      map[static_cast<size_t>(order[i])] = order[i + 1];
      map[static_cast<size_t>(order[i + 1])] = order[i];
    }
  }
  return map;
}

// Random connected truss that is symmetric about a random plane, with a
// random channel involution, and for which channel-growing initialization
// has been observed to succeed once (so a valid assignment exists).
inline TrussGraph random_mirrored_truss(Rng& rng, int min_edges, int max_edges, int min_channels,
                                        int max_channels) {
  for (;;) {
    const Vec3 normal = Vec3(uniform01(rng) - 0.5, uniform01(rng) - 0.5, uniform01(rng) - 0.5).normalized();
    const MirrorPlane plane{Vec3(uniform01(rng), uniform01(rng), uniform01(rng)), normal};
    const int pairs = 2 + uniform_index(rng, 5);
    const int on_plane = uniform_index(rng, 4);

    std::vector<Vec3> vertices;
    std::vector<int> mirror;
    for (int i = 0; i < pairs; ++i) {
      Vec3 p(uniform01(rng) * 2 - 1, uniform01(rng) * 2 - 1, uniform01(rng) * 2 - 1);
      double side = (p - plane.point).dot(normal);
      if (std::abs(side) < 0.1) p += (0.2 - side) * normal;
      vertices.push_back(p);
      vertices.push_back(plane.reflect(p));
      const int k = static_cast<int>(vertices.size());
      mirror.push_back(k - 1);
      mirror.push_back(k - 2);
    }
    for (int i = 0; i < on_plane; ++i) {
      Vec3 p(uniform01(rng) * 2 - 1, uniform01(rng) * 2 - 1, uniform01(rng) * 2 - 1);
      p -= (p - plane.point).dot(normal) * normal;
      vertices.push_back(p);
      mirror.push_back(static_cast<int>(vertices.size()) - 1);
    }
    const int nv = static_cast<int>(vertices.size());

    std::set<std::pair<int, int>> edges;
    auto add = [&](int a, int b) {
      edges.insert({std::min(a, b), std::max(a, b)});
      const int ma = mirror[static_cast<size_t>(a)];
      const int mb = mirror[static_cast<size_t>(b)];
      edges.insert({std::min(ma, mb), std::max(ma, mb)});
    };
    // Random spanning tree over vertices, closed under the mirror.
    std::vector<int> order(static_cast<size_t>(nv));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 1; i < nv; ++i) {
      add(order[static_cast<size_t>(uniform_index(rng, i))], order[static_cast<size_t>(i)]);
    }
    const int target = min_edges + uniform_index(rng, max_edges - min_edges + 1);
    for (int tries = 0; static_cast<int>(edges.size()) < target && tries < 200; ++tries) {
      const int a = uniform_index(rng, nv);
      const int b = uniform_index(rng, nv);
      if (a != b) add(a, b);
    }
    const int ne = static_cast<int>(edges.size());
    if (ne < min_edges || ne > max_edges) continue;

    std::vector<Edge> edge_list;
    for (const auto& [a, b] : edges) edge_list.push_back({a, b});
    const int n_channels = min_channels + uniform_index(rng, max_channels - min_channels + 1);
    if (n_channels > ne) continue;
    std::optional<std::vector<int>> channel_mirror;
    if (uniform01(rng) < 0.5) channel_mirror = random_involution(rng, n_channels);

    try {
      TrussGraph bare(std::move(vertices), std::move(edge_list), n_channels);
      TrussGraph graph = build_mirror_maps(bare, plane, 1e-6, channel_mirror);
      Rng probe(rng());
      (void)initialize_assignment(graph, probe);
      return graph;
    } catch (const Error&) {
      continue;  // no symmetric assignment exists for this draw
    }
  }
}

}  // namespace vgt::testing
