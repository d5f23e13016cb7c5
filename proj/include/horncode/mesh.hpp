#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace horncode {

using Triangle = std::array<std::uint32_t, 3>;

// Triangulated sample of a surface in R^dim. Coordinates are stored row-major.
struct Mesh {
  std::size_t dim = 3;
  std::vector<double> coords;
  std::vector<Triangle> triangles;
  std::map<std::size_t, std::string> marks;  // vertex index -> end / puncture tag

  std::size_t vertex_count() const { return dim == 0 ? 0 : coords.size() / dim; }
  std::span<const double> vertex(std::size_t i) const { return {coords.data() + i * dim, dim}; }
  std::span<double> vertex(std::size_t i) { return {coords.data() + i * dim, dim}; }

  std::uint32_t add_vertex(std::span<const double> p);
  void add_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c) { triangles.push_back({a, b, c}); }
};

double distance(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

// Throws BadParams on out-of-range or repeated triangle indices.
void check_indices(const Mesh& mesh);

// Vertices and triangles both renumbered; marks follow their vertices.
Mesh permuted(const Mesh& mesh, const std::vector<std::size_t>& vertex_perm,
              const std::vector<std::size_t>& triangle_perm);

// One uniform 1-to-4 split; new vertices are edge midpoints (no projection).
Mesh subdivide(const Mesh& mesh);

// Drops unused vertices and renumbers.
Mesh compact(const Mesh& mesh);

// ASCII OFF. dim == 3 uses the plain "OFF" header; other dimensions use "nOFF" with a
// dimension line.
void write_off(std::ostream& os, const Mesh& mesh);
Mesh read_off(std::istream& is);
Mesh load_off(const std::string& path);
void save_off(const std::string& path, const Mesh& mesh);

// Sidecar JSON {"<vertex index>": "<tag>"}.
std::string marks_to_json(const Mesh& mesh);
void apply_marks_json(Mesh& mesh, const std::string& text);

}  // namespace horncode
