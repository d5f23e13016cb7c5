#pragma once

#include <optional>
#include <vector>

#include "horncode/code_model.hpp"
#include "horncode/geometry.hpp"
#include "horncode/mesh.hpp"
#include "horncode/report.hpp"

namespace horncode {

// Normal form N(theta, g, beta): compact model surface with one puncture per end,
// re-embedded so end i is a beta_i-tube. Genus follows the code convention (for
// theta = -1 the base has genus + 1 cross-caps).
struct NormalFormSpec {
  int theta = 1;
  int genus = 0;
  BetaVector beta;  // ascending, entries <= 1
};

// Validates and sorts; throws InvalidCode / OutOfRangeExponent.
NormalFormSpec make_normal_form_spec(int theta, int genus, BetaVector beta);

InnerLipschitzCode normal_form_code(const NormalFormSpec& spec);

// Base surface with puncture sites already chosen (farthest-point among flat face
// points) and the mesh graded toward them. `clear` is the radius around each
// puncture inside which the base is flat; ends are measured between 1.5 r_cut and
// s_high, close enough to the puncture that the |x - x_i|^-1 coordinate dominates.
struct NormalFormBase {
  Mesh mesh;
  std::vector<std::uint32_t> punctures;
  std::vector<double> clear;
  std::vector<double> s_high;
  double r_cut = 0.0;
};

// theta = 1: voxel plate of genus g in R^3. theta = -1: centrally symmetric plate of
// genus g modulo x -> -x, embedded in R^6 by x -> x x^T (Veronese), which is
// injective on antipodal classes.
NormalFormBase normal_form_base(int theta, int genus, std::size_t ends);

// Removes the base vertices within r_cut of each puncture, maps the rest by
//   F(x) = ((x - x_i) / |x - x_i|^(1 + beta_i), |x - x_i|^-1)_i
// and tags vertices within clear[i] of puncture i as "end<i>". r_cut <= 0 selects 2%
// of the base bounding-box diagonal. With no punctures the base is returned as is.
// Throws PunctureTooClose when two punctures are within 10 r_cut in base inner distance.
Mesh puncture_embed(const Mesh& base, const std::vector<std::uint32_t>& punctures, const BetaVector& beta,
                    double r_cut = 0.0, const std::vector<double>& clear = {});

double default_cut_radius(const Mesh& base);

// Point the level sets of end i are centred on: F(x_i) with block i zeroed.
std::vector<double> end_centre(const Mesh& base, const std::vector<std::uint32_t>& punctures,
                               const BetaVector& beta, std::size_t i);

struct NormalFormReport {
  NormalFormSpec spec;
  std::vector<CheckResult> checks;
  std::vector<GrowthEstimate> ends;
  MeshTopology topology;
  Mesh mesh;
  bool passed = false;
};

// Builds the normal form (optionally over a caller-supplied closed base), measures
// topology and per-end growth, and compares the result with normal_form_code(spec).
NormalFormReport verify_normal_form(const NormalFormSpec& spec, const Mesh* base_override = nullptr);

}  // namespace horncode
