#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "horncode/error.hpp"
#include "horncode/geometry.hpp"

namespace horncode {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// +1 when a -> b follows the triangle's cyclic order, -1 when it runs against it.
int direction(const Triangle& t, std::uint32_t a, std::uint32_t b) {
  for (int e = 0; e < 3; ++e) {
    if (t[e] == a) return t[(e + 1) % 3] == b ? 1 : -1;
  }
  return 0;
}

}  // namespace

MeshTopology mesh_topology(const Mesh& mesh) {
  check_indices(mesh);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::size_t>> edges;
  std::set<std::uint32_t> used;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const auto a = tri[e], b = tri[(e + 1) % 3];
      auto& list = edges[{std::min(a, b), std::max(a, b)}];
      list.push_back(t);
      if (list.size() > 2) throw Error(ErrorKind::NonManifold, "edge shared by more than two triangles");
      used.insert(a);
    }
  }

  MeshTopology out;
  out.euler = static_cast<long>(used.size()) - static_cast<long>(edges.size()) +
              static_cast<long>(mesh.triangles.size());

  DisjointSets boundary(mesh.vertex_count());
  std::set<std::uint32_t> boundary_vertices;
  std::vector<std::vector<std::pair<std::size_t, std::pair<std::uint32_t, std::uint32_t>>>> adj(
      mesh.triangles.size());
  for (const auto& [e, tris] : edges) {
    if (tris.size() == 1) {
      boundary.unite(e.first, e.second);
      boundary_vertices.insert(e.first);
      boundary_vertices.insert(e.second);
    } else {
      adj[tris[0]].push_back({tris[1], e});
      adj[tris[1]].push_back({tris[0], e});
    }
  }
  std::set<std::size_t> loops;
  for (auto v : boundary_vertices) loops.insert(boundary.find(v));
  out.boundary_components = static_cast<int>(loops.size());

  // Orientation propagation: sign[t] flips triangle t; neighbours must traverse
  // their shared edge in opposite directions.
  std::vector<int> sign(mesh.triangles.size(), 0);
  bool orientable = true;
  for (std::size_t start = 0; start < mesh.triangles.size(); ++start) {
    if (sign[start] != 0) continue;
    ++out.connected_components;
    sign[start] = 1;
    std::queue<std::size_t> queue;
    queue.push(start);
    while (!queue.empty()) {
      const auto t = queue.front();
      queue.pop();
      for (const auto& [u, e] : adj[t]) {
        const int want = -direction(mesh.triangles[t], e.first, e.second) * sign[t] *
                         direction(mesh.triangles[u], e.first, e.second);
        if (sign[u] == 0) {
          sign[u] = want;
          queue.push(u);
        } else if (sign[u] != want) {
          orientable = false;
        }
      }
    }
  }
  out.theta = orientable ? 1 : -1;
  const long deficit = 2 - out.euler - out.boundary_components;
  out.genus = static_cast<int>(orientable ? deficit / 2 : deficit);
  return out;
}

ConeSummary cone_directions(std::span<const double> points, std::size_t dim, double r_min, double eps) {
  if (dim == 0 || !(eps > 0)) throw Error(ErrorKind::BadParams, "bad cone parameters");
  std::vector<double> dirs;
  for (std::size_t i = 0; i + dim <= points.size(); i += dim) {
    std::span<const double> p{points.data() + i, dim};
    const double n = norm(p);
    if (n < r_min) continue;
    for (double x : p) dirs.push_back(x / n);
  }
  ConeSummary out;
  out.samples = dirs.size() / dim;
  if (out.samples < 50) throw Error(ErrorKind::TooFewFarSamples, "fewer than 50 samples beyond r_min");
  auto point = [&](std::size_t i) { return std::span<const double>{dirs.data() + i * dim, dim}; };
  auto net = [&](double e) {
    std::vector<std::size_t> centres;
    for (std::size_t i = 0; i < out.samples; ++i) {
      bool covered = false;
      for (auto c : centres) {
        if (distance(point(i), point(c)) <= e) {
          covered = true;
          break;
        }
      }
      if (!covered) centres.push_back(i);
    }
    return centres;
  };
  const auto coarse = net(eps);
  out.net_coarse = coarse.size();
  out.net_fine = net(eps / 2).size();
  out.ratio = static_cast<double>(out.net_fine) / static_cast<double>(out.net_coarse);
  out.direction_dim = out.ratio >= 3.0 ? 2 : out.ratio >= 1.5 ? 1 : 0;
  out.cone_dim = out.direction_dim + 1;
  out.verdict = out.cone_dim >= 2 ? "dim 2" : "dim < 2";

  // Single-linkage clusters of the coarse net centres; every sample is within eps
  // of a centre, so linking centres closer than 2 eps follows the sample set.
  DisjointSets sets(coarse.size());
  for (std::size_t a = 0; a < coarse.size(); ++a) {
    for (std::size_t b = a + 1; b < coarse.size(); ++b) {
      if (distance(point(coarse[a]), point(coarse[b])) <= 2 * eps) sets.unite(a, b);
    }
  }
  for (std::size_t a = 0; a < coarse.size(); ++a) {
    if (sets.find(a) == a) ++out.clusters;
  }
  return out;
}

ConeSummary cone_directions(const Mesh& mesh, double r_min, double eps) {
  return cone_directions(mesh.coords, mesh.dim, r_min, eps);
}

}  // namespace horncode
