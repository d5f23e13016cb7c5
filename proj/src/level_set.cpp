#include <cmath>
#include <numeric>
#include <unordered_map>

#include "horncode/error.hpp"
#include "horncode/geometry.hpp"
#include "horncode/regression.hpp"

namespace horncode {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  std::size_t add() {
    parent.push_back(parent.size());
    return parent.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

LinkMeasure link_length(const Mesh& mesh, std::span<const double> center, double r,
                        const std::vector<char>* triangle_mask) {
  if (center.size() != mesh.dim) throw Error(ErrorKind::BadParams, "center dimension mismatch");
  if (!(r > 0)) throw Error(ErrorKind::BadParams, "radius must be positive");
  const std::size_t dim = mesh.dim;
  // Values exactly on the sphere are nudged outward so no crossing lands on a vertex.
  std::vector<double> f(mesh.vertex_count());
  for (std::size_t v = 0; v < f.size(); ++v) {
    f[v] = distance(mesh.vertex(v), center) - r;
    if (std::abs(f[v]) <= 1e-12 * r) f[v] = 1e-12 * r;
  }
  std::unordered_map<std::uint64_t, std::size_t> edge_id;
  UnionFind uf;
  std::vector<double> pa(dim), pb(dim);
  auto crossing = [&](std::uint32_t a, std::uint32_t b, std::vector<double>& out) {
    const double t = f[a] / (f[a] - f[b]);
    auto x = mesh.vertex(a), y = mesh.vertex(b);
    for (std::size_t k = 0; k < dim; ++k) out[k] = x[k] + t * (y[k] - x[k]);
    const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
    auto [it, fresh] = edge_id.try_emplace(key, 0);
    if (fresh) it->second = uf.add();
    return it->second;
  };
  LinkMeasure out;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (triangle_mask && !(*triangle_mask)[t]) continue;
    const auto& tri = mesh.triangles[t];
    std::size_t ids[2];
    int found = 0;
    for (int e = 0; e < 3; ++e) {
      const auto a = tri[e], b = tri[(e + 1) % 3];
      if ((f[a] < 0) != (f[b] < 0)) {
        ids[found] = crossing(a, b, found == 0 ? pa : pb);
        ++found;
      }
    }
    if (found != 2) continue;
    out.length += distance(pa, pb);
    uf.unite(ids[0], ids[1]);
  }
  if (edge_id.empty()) throw Error(ErrorKind::LevelSetEmpty, "level set at r = " + std::to_string(r) + " is empty");
  for (std::size_t i = 0; i < uf.parent.size(); ++i) {
    if (uf.find(i) == i) ++out.components;
  }
  return out;
}

GrowthEstimate growth_exponent(const Mesh& mesh, std::span<const double> center, std::span<const double> radii,
                               const std::vector<char>* triangle_mask) {
  if (radii.size() < 6) throw Error(ErrorKind::GridTooSmall, "growth_exponent needs at least six radii");
  const bool up = radii[1] > radii[0];
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (up ? !(radii[i] > radii[i - 1]) : !(radii[i] < radii[i - 1])) {
      throw Error(ErrorKind::BadParams, "radii must be strictly monotone");
    }
  }
  GrowthEstimate g;
  g.radii_used.assign(radii.begin(), radii.end());
  for (double r : radii) g.lengths.push_back(link_length(mesh, center, r, triangle_mask).length);
  const auto fit = fit_power_law(g.radii_used, g.lengths);
  g.slope = fit.slope;
  g.residual = fit.residual;
  try {
    g.rounded = rational_round(g.slope, 12, 0.1);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoRationalNearby) throw;
  }
  return g;
}

}  // namespace horncode
