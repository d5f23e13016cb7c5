#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "horncode/mesh.hpp"
#include "horncode/random_codes.hpp"
#include "horncode/rational.hpp"

namespace horncode {

// Inner distance on a triangulated surface: shortest paths in the graph whose nodes
// are the vertices plus `steiner_per_edge` evenly spaced points on every edge, with
// every pair of nodes on a triangle's boundary joined by a straight segment.
// Segment lengths are rounded up to an integer grid (unit = diameter * 2^-40) so
// path sums are exact: symmetry and the triangle inequality hold bit for bit.
class InnerMetric {
 public:
  explicit InnerMetric(const Mesh& mesh, int steiner_per_edge = 1);

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t node_count() const { return offsets_.size() - 1; }

  // Distances from vertex p to every vertex; unreachable entries are infinite.
  std::vector<double> from(std::uint32_t p) const;
  // Throws Disconnected when q is unreachable.
  double distance(std::uint32_t p, std::uint32_t q) const;

  // Graph shortest paths from p, each straightened inside the strip of triangles it
  // crosses (strip unfolded to the plane, funnel pass). Every value is the length of
  // a path on the surface and never exceeds the graph distance. Infinite if unreachable.
  std::vector<double> shortened_from(std::uint32_t p, std::span<const std::uint32_t> targets) const;

 private:
  std::vector<std::uint64_t> ticks_from(std::uint32_t p, std::optional<std::uint32_t> stop,
                                        std::vector<std::uint32_t>* pred = nullptr) const;
  std::vector<std::uint32_t> node_triangles(std::uint32_t node) const;
  double straighten(const std::vector<std::uint32_t>& nodes) const;
  // Planar meshes only: true when the segment p-q stays inside the triangulated region.
  bool segment_inside(std::uint32_t p, std::uint32_t q) const;

  std::size_t vertex_count_ = 0;
  double unit_ = 1.0;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> targets_;
  std::vector<std::uint64_t> weights_;
  std::size_t dim_ = 3;
  std::vector<double> coords_;
  std::vector<Triangle> triangles_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> steiner_edge_;  // node - vertex_count -> edge
  std::vector<std::vector<std::uint32_t>> vertex_triangles_;
  std::vector<std::array<std::uint32_t, 3>> neighbours_;  // across edge (t[e], t[e+1])
  // Boundary or saddle vertices (angle sum above 2 pi): the only vertices a shortest
  // path can pass through. Paths fed to the straightening step avoid the others.
  std::vector<char> transit_;
};

double inner_distance(const Mesh& mesh, std::uint32_t p, std::uint32_t q);

struct LneEstimate {
  double constant = 1.0;  // max inner / Euclidean ratio seen (>= 1)
  std::size_t pairs = 0;
  std::uint32_t worst_p = 0;
  std::uint32_t worst_q = 0;
};

// Ratios use InnerMetric::shortened_from. Sources: about sqrt(budget) vertices, half by farthest-point sampling and half at
// random; each source is paired with its share of random targets. Throws BadParams
// for budget < 1000 and Disconnected when a sampled pair is not joined.
LneEstimate lne_constant(const Mesh& mesh, std::size_t pair_budget, std::uint64_t seed = kDefaultSeed,
                         int steiner_per_edge = 1);
namespace serial {
LneEstimate lne_constant(const Mesh& mesh, std::size_t pair_budget, std::uint64_t seed = kDefaultSeed,
                         int steiner_per_edge = 1);
}  // namespace serial

struct LinkMeasure {
  double length = 0.0;
  std::size_t components = 0;
};

// Level set {|x - center| = r} traced across triangles. With a mask, only triangles
// whose flag is set contribute. Throws LevelSetEmpty.
LinkMeasure link_length(const Mesh& mesh, std::span<const double> center, double r,
                        const std::vector<char>* triangle_mask = nullptr);

struct GrowthEstimate {
  double slope = 0.0;
  std::optional<Rational> rounded;  // empty when no rational with den <= 12 is within 0.1
  double residual = 0.0;
  std::vector<double> radii_used;
  std::vector<double> lengths;
};

// Power-law fit of link length against radius. Radii must be strictly monotone
// (increasing toward infinity, decreasing toward a point) and at least six.
GrowthEstimate growth_exponent(const Mesh& mesh, std::span<const double> center, std::span<const double> radii,
                               const std::vector<char>* triangle_mask = nullptr);

struct MeshTopology {
  int theta = 1;
  int genus = 0;  // orientable genus, or cross-cap count when theta = -1
  int boundary_components = 0;
  long euler = 0;
  int connected_components = 0;
};

// Throws NonManifold when an edge is shared by more than two triangles.
MeshTopology mesh_topology(const Mesh& mesh);

struct ConeSummary {
  std::size_t samples = 0;
  std::size_t net_coarse = 0;  // greedy eps-net size of the unit directions
  std::size_t net_fine = 0;    // same at eps / 2
  double ratio = 0.0;
  std::size_t clusters = 0;  // single-linkage clusters at eps
  int direction_dim = 0;
  int cone_dim = 1;  // direction_dim + 1
  std::string verdict;  // "dim 2" or "dim < 2"
};

// Directions x/|x| of vertices with |x| >= r_min. Throws TooFewFarSamples below 50.
ConeSummary cone_directions(const Mesh& mesh, double r_min, double eps = 0.25);
ConeSummary cone_directions(std::span<const double> points, std::size_t dim, double r_min, double eps = 0.25);

}  // namespace horncode
