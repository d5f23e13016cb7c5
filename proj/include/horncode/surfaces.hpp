#pragma once

#include <string_view>
#include <vector>

#include "horncode/mesh.hpp"
#include "horncode/rational.hpp"

namespace horncode {

enum class SurfaceFamily {
  Horn,        // x^2 + y^2 = z^(2 beta), 0 <= z <= hi, beta >= 1
  Tube,        // x^2 + y^2 = z^(2 beta), lo <= z <= hi, beta <= 1
  Strip,       // {lo <= x <= hi, 0 <= y <= x^beta}, beta <= 1, planar
  Cylinder,    // x^2 + y^2 = 1, |z| <= hi
  Paraboloid,  // z = x^2 + y^2, z <= hi
  Torus,
  GenusG,      // closed orientable surface of the given genus
  MoebiusBand,
  Sphere,
  SpherePair,  // two unit spheres touching at the origin
  Disc,        // flat unit disc
};

SurfaceFamily parse_surface_family(std::string_view name);

// Zero means "family default" for ranges and resolutions.
struct SurfaceParams {
  Rational beta{1};
  double lo = 0.0;
  double hi = 0.0;
  int n_along = 0;
  int n_around = 0;
  int genus = 1;
};

Mesh generate_surface(SurfaceFamily family, const SurfaceParams& params = {});

Mesh make_horn(const Rational& beta, double z_max, int n_rings, int n_around);
Mesh make_tube(const Rational& beta, double z_min, double z_max, int n_rings, int n_around);
Mesh make_strip(const Rational& beta, double x_min, double x_max, int rows, int max_columns);
Mesh make_cylinder(double half_length, int n_rings, int n_around);
Mesh make_paraboloid(double z_max, int n_rings, int n_around);
Mesh make_torus(double major, double minor, int n_major, int n_minor);
Mesh make_moebius_band(double half_width, int n_around, int n_across);
Mesh make_sphere(double radius, int n_lat, int n_lon);
Mesh make_sphere_pair(int n_lat, int n_lon);
Mesh make_disc(double radius, int n_rings, int n_around);

// Closed surface bounding a union of axis-aligned unit voxels. Faces are split at
// the per-axis breakpoints, which must include every voxel boundary.
struct VoxelSurfaceSpec {
  std::vector<std::array<int, 3>> voxels;  // voxel (i,j,k) spans [i,i+1]x[j,j+1]x[k,k+1] + offset
  std::array<double, 3> offset{0.0, 0.0, 0.0};
  std::array<std::vector<double>, 3> breakpoints;
};
Mesh make_voxel_surface(const VoxelSurfaceSpec& spec);

// Plate of (2g+1) x 3 x 1 voxels with g square holes, centred at the origin so the
// surface is symmetric under x -> -x. Genus 0 is a single unit cube.
VoxelSurfaceSpec genus_plate(int genus);

// Breakpoints on each axis: voxel boundaries, uniform cells_per_unit subdivision, and
// geometric grading toward each listed centre (h_min near it, growing by `growth`).
struct Grading {
  std::array<double, 3> centre;
  double h_min = 0.01;
  double growth = 0.15;
  double radius = 0.5;
};
void set_breakpoints(VoxelSurfaceSpec& spec, int cells_per_unit, const std::vector<Grading>& gradings);

Mesh make_genus_surface(int genus, int cells_per_unit);

}  // namespace horncode
