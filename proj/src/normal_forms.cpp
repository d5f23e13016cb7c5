#include "horncode/normal_forms.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <set>

#include "horncode/error.hpp"
#include "horncode/surfaces.hpp"

namespace horncode {

namespace {

constexpr int kCellsPerUnit = 2;
constexpr double kClear = 1.5;        // flat radius around each puncture site on the plate
constexpr int kRows = 7;              // plate rows in y; the hole row is the middle one
constexpr int kThick = 2;             // keeps the opposite face outside the clear ball
constexpr std::size_t kRadii = 8;
// Ends are measured for s in [1.5 kCut, kSHigh] (plate units), where the |x - x_i|^-1
// coordinate dominates the distance to the end centre; the grading reaches kHMin.
constexpr double kCut = 1e-3;
constexpr double kSHigh = 0.02;
constexpr double kHMin = 1e-4;

using Point3 = std::array<double, 3>;

double dist3(const Point3& a, const Point3& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

double antipodal_dist(const Point3& a, const Point3& b) {
  return std::min(dist3(a, b), std::hypot(a[0] + b[0], a[1] + b[1], a[2] + b[2]));
}

// Plate of width 2g + 3 + 2 pad columns, kRows rows and kThick layers, holes in the middle row at
// columns 2, 4, ..., 2g; symmetric under x -> -x.
VoxelSurfaceSpec punctured_plate(int genus, int pad) {
  const int width = 2 * genus + 3 + 2 * pad;
  VoxelSurfaceSpec spec;
  for (int i = 0; i < width; ++i) {
    for (int j = 0; j < kRows; ++j) {
      const int h = i - pad;
      if (j == kRows / 2 && h >= 2 && h <= 2 * genus && h % 2 == 0) continue;
      for (int k = 0; k < kThick; ++k) spec.voxels.push_back({i, j, k});
    }
  }
  spec.offset = {-0.5 * width, -0.5 * kRows, -0.5 * kThick};
  return spec;
}

// Flat face points at distance kClear from every edge and hole of the plate.
std::vector<Point3> plate_sites(int genus, int pad, bool top_only) {
  const int width = 2 * genus + 3 + 2 * pad;
  std::vector<Point3> sites;
  const double y = 0.5 * kRows - kClear;
  for (int i = 0; i < width; ++i) {
    const double x = i + 0.5 - 0.5 * width;
    if (std::abs(x) > 0.5 * width - kClear + 1e-12) continue;
    for (double sy : {1.0, -1.0}) {
      for (double z : {0.5 * kThick, -0.5 * kThick}) {
        if (top_only && z < 0) continue;
        sites.push_back({x, sy * y, z});
      }
    }
  }
  return sites;
}

void symmetrize(VoxelSurfaceSpec& spec) {
  for (auto& bp : spec.breakpoints) {
    std::vector<double> pos;
    bool zero = false;
    for (double x : bp) {
      if (std::abs(x) < 1e-9) zero = true;
      pos.push_back(std::abs(x));
    }
    std::sort(pos.begin(), pos.end());
    std::vector<double> clean;
    for (double x : pos) {
      if (x < 1e-9) continue;
      if (!clean.empty() && x - clean.back() < 1e-9) continue;
      clean.push_back(x);
    }
    bp.clear();
    for (auto it = clean.rbegin(); it != clean.rend(); ++it) bp.push_back(-*it);
    if (zero) bp.push_back(0.0);
    bp.insert(bp.end(), clean.begin(), clean.end());
  }
}

using Key = std::array<long long, 3>;

Key key_of(std::span<const double> p) {
  return {std::llround(p[0] * 1e8), std::llround(p[1] * 1e8), std::llround(p[2] * 1e8)};
}

std::uint32_t find_vertex(const std::map<Key, std::uint32_t>& ids, const Point3& p) {
  auto it = ids.find(key_of(p));
  if (it == ids.end()) throw Error(ErrorKind::BadParams, "puncture site is not a mesh vertex");
  return it->second;
}

// Mesh of the plate modulo x -> -x, embedded by the Veronese map. Returns the mesh and
// the representative-coordinate lookup used to place punctures.
Mesh antipodal_quotient(const Mesh& plate, std::map<Key, std::uint32_t>& ids) {
  const std::size_t n = plate.vertex_count();
  std::map<Key, std::uint32_t> by_key;
  for (std::size_t v = 0; v < n; ++v) by_key.emplace(key_of(plate.vertex(v)), static_cast<std::uint32_t>(v));
  std::vector<std::int64_t> rep(n, -1);
  Mesh out;
  out.dim = 6;
  const double r2 = std::sqrt(2.0);
  ids.clear();
  for (std::size_t v = 0; v < n; ++v) {
    if (rep[v] >= 0) continue;
    const auto p = plate.vertex(v);
    const Point3 q{-p[0], -p[1], -p[2]};
    auto it = by_key.find(key_of(q));
    if (it == by_key.end()) throw Error(ErrorKind::BadParams, "plate mesh is not centrally symmetric");
    const double x = p[0], y = p[1], z = p[2];
    const std::array<double, 6> w{x * x, y * y, z * z, r2 * x * y, r2 * x * z, r2 * y * z};
    const auto id = out.add_vertex(w);
    rep[v] = id;
    rep[it->second] = id;
    ids.emplace(key_of(p), id);
    ids.emplace(key_of(q), id);
  }
  std::set<std::array<std::uint32_t, 3>> seen;
  for (const auto& t : plate.triangles) {
    Triangle nt{static_cast<std::uint32_t>(rep[t[0]]), static_cast<std::uint32_t>(rep[t[1]]),
                static_cast<std::uint32_t>(rep[t[2]])};
    std::array<std::uint32_t, 3> sorted = nt;
    std::sort(sorted.begin(), sorted.end());
    if (sorted[0] == sorted[1] || sorted[1] == sorted[2]) {
      throw Error(ErrorKind::BadParams, "triangle meets its antipode");
    }
    if (seen.insert(sorted).second) out.triangles.push_back(nt);
  }
  return out;
}

double bbox_diagonal(const Mesh& m) {
  std::vector<double> lo(m.dim, std::numeric_limits<double>::infinity()), hi(m.dim, -lo[0]);
  for (std::size_t v = 0; v < m.vertex_count(); ++v) {
    const auto p = m.vertex(v);
    for (std::size_t a = 0; a < m.dim; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  double s = 0.0;
  for (std::size_t a = 0; a < m.dim; ++a) s += (hi[a] - lo[a]) * (hi[a] - lo[a]);
  return std::sqrt(s);
}

// Block i of F at x: (x - x_i) / |x - x_i|^(1 + beta), then |x - x_i|^-1.
void puncture_block(std::span<const double> x, std::span<const double> xi, double beta, double* out) {
  const std::size_t m = x.size();
  const double s = distance(x, xi);
  const double scale = std::pow(s, -(1.0 + beta));
  for (std::size_t a = 0; a < m; ++a) out[a] = (x[a] - xi[a]) * scale;
  out[m] = 1.0 / s;
}

std::vector<std::uint32_t> farthest_vertices(const Mesh& m, std::size_t count) {
  std::vector<std::uint32_t> picked;
  if (count == 0) return picked;
  std::vector<double> d(m.vertex_count(), std::numeric_limits<double>::infinity());
  std::uint32_t next = 0;
  while (picked.size() < count) {
    picked.push_back(next);
    double best = -1.0;
    for (std::size_t v = 0; v < m.vertex_count(); ++v) {
      d[v] = std::min(d[v], distance(m.vertex(v), m.vertex(next)));
      if (d[v] > best) {
        best = d[v];
        next = static_cast<std::uint32_t>(v);
      }
    }
  }
  return picked;
}

std::string end_tag(std::size_t i) { return "end" + std::to_string(i); }

CheckResult check(std::string name, std::string measured, std::string expected, bool pass, double tol = 0.0) {
  return {std::move(name), std::move(measured), std::move(expected), tol, pass};
}

}  // namespace

NormalFormSpec make_normal_form_spec(int theta, int genus, BetaVector beta) {
  if (theta != 1 && theta != -1) throw Error(ErrorKind::InvalidCode, "theta must be +1 or -1");
  if (genus < 0) throw Error(ErrorKind::InvalidCode, "genus must be non-negative");
  for (const auto& b : beta) {
    if (b > Rational{1}) throw Error(ErrorKind::OutOfRangeExponent, "end exponent " + b.str() + " > 1");
  }
  std::sort(beta.begin(), beta.end());
  return {theta, genus, std::move(beta)};
}

InnerLipschitzCode normal_form_code(const NormalFormSpec& spec) {
  return make_code({make_component_code(spec.theta, spec.genus, spec.beta)});
}

NormalFormBase normal_form_base(int theta, int genus, std::size_t ends) {
  if (theta != 1 && theta != -1) throw Error(ErrorKind::InvalidCode, "theta must be +1 or -1");
  if (genus < 0) throw Error(ErrorKind::InvalidCode, "genus must be non-negative");
  const bool quotient = theta == -1;
  int pad = 0;
  std::vector<Point3> sites = plate_sites(genus, pad, quotient);
  while (sites.size() < ends) sites = plate_sites(genus, ++pad, quotient);

  // Farthest-point choice among the sites, measured in the quotient when needed.
  std::vector<Point3> chosen;
  if (ends > 0) {
    std::vector<double> d(sites.size(), std::numeric_limits<double>::infinity());
    std::size_t next = 0;
    while (chosen.size() < ends) {
      chosen.push_back(sites[next]);
      double best = -1.0;
      for (std::size_t s = 0; s < sites.size(); ++s) {
        d[s] = std::min(d[s], quotient ? antipodal_dist(sites[s], chosen.back()) : dist3(sites[s], chosen.back()));
        if (d[s] > best) {
          best = d[s];
          next = s;
        }
      }
    }
  }

  auto spec = punctured_plate(genus, pad);
  std::vector<Grading> gradings;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& c : chosen) {
    gradings.push_back({{c[0], c[1], nan}, kHMin, 0.15, kClear});
    if (quotient) gradings.push_back({{-c[0], -c[1], nan}, kHMin, 0.15, kClear});
  }
  set_breakpoints(spec, kCellsPerUnit, gradings);
  symmetrize(spec);
  Mesh plate = make_voxel_surface(spec);

  NormalFormBase base;
  std::map<Key, std::uint32_t> ids;
  if (quotient) {
    base.mesh = antipodal_quotient(plate, ids);
  } else {
    for (std::size_t v = 0; v < plate.vertex_count(); ++v) ids.emplace(key_of(plate.vertex(v)), v);
    base.mesh = std::move(plate);
  }
  const double r2 = std::sqrt(2.0);
  for (const auto& c : chosen) {
    const auto id = find_vertex(ids, c);
    base.punctures.push_back(id);
    if (!quotient) {
      base.clear.push_back(kClear);
      base.s_high.push_back(kSHigh);
      continue;
    }
    // Radius of the Veronese image of the flat disc, probed along its boundary circle.
    const auto yc = base.mesh.vertex(id);
    double clear = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 64; ++k) {
      const double t = 2.0 * M_PI * k / 64;
      const double x = c[0] + kClear * std::cos(t), y = c[1] + kClear * std::sin(t), z = c[2];
      const std::array<double, 6> w{x * x, y * y, z * z, r2 * x * y, r2 * x * z, r2 * y * z};
      clear = std::min(clear, distance(w, yc));
    }
    base.clear.push_back(clear);
    base.s_high.push_back(kSHigh * clear / kClear);
  }
  base.r_cut = kCut;
  for (double c : base.clear) base.r_cut = std::min(base.r_cut, kCut * c / kClear);
  return base;
}

double default_cut_radius(const Mesh& base) { return 0.02 * bbox_diagonal(base); }

Mesh puncture_embed(const Mesh& base, const std::vector<std::uint32_t>& punctures, const BetaVector& beta,
                    double r_cut, const std::vector<double>& clear) {
  if (punctures.size() != beta.size()) throw Error(ErrorKind::BadParams, "one exponent per puncture required");
  if (!clear.empty() && clear.size() != punctures.size()) throw Error(ErrorKind::BadParams, "clear radius count");
  if (punctures.empty()) return base;
  for (auto p : punctures) {
    if (p >= base.vertex_count()) throw Error(ErrorKind::BadParams, "puncture index out of range");
  }
  if (std::set<std::uint32_t>(punctures.begin(), punctures.end()).size() != punctures.size()) {
    throw Error(ErrorKind::BadParams, "punctures must be distinct");
  }
  if (r_cut <= 0.0) r_cut = default_cut_radius(base);

  if (punctures.size() > 1) {
    InnerMetric metric(base);
    for (std::size_t i = 0; i < punctures.size(); ++i) {
      const auto d = metric.from(punctures[i]);
      for (std::size_t j = i + 1; j < punctures.size(); ++j) {
        if (d[punctures[j]] < 10.0 * r_cut) {
          throw Error(ErrorKind::PunctureTooClose, "punctures " + std::to_string(i) + " and " + std::to_string(j) +
                                                       " are within 10 r_cut");
        }
      }
    }
  }

  const std::size_t m = base.dim, e = punctures.size();
  std::vector<double> tag_radius(e, 5.0 * r_cut);
  if (!clear.empty()) tag_radius = clear;
  std::vector<double> betas(e);
  for (std::size_t i = 0; i < e; ++i) betas[i] = beta[i].to_double();

  Mesh out;
  out.dim = (m + 1) * e;
  std::vector<std::int64_t> remap(base.vertex_count(), -1);
  std::vector<double> image(out.dim);
  for (std::size_t v = 0; v < base.vertex_count(); ++v) {
    const auto x = base.vertex(v);
    bool keep = true;
    std::size_t nearest = 0;
    double nearest_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < e; ++i) {
      const double s = distance(x, base.vertex(punctures[i]));
      if (s < r_cut) keep = false;
      if (s < nearest_d) {
        nearest_d = s;
        nearest = i;
      }
    }
    if (!keep) continue;
    for (std::size_t i = 0; i < e; ++i) puncture_block(x, base.vertex(punctures[i]), betas[i], image.data() + i * (m + 1));
    remap[v] = out.add_vertex(image);
    if (nearest_d < tag_radius[nearest]) out.marks[static_cast<std::size_t>(remap[v])] = end_tag(nearest);
  }
  for (const auto& t : base.triangles) {
    if (remap[t[0]] < 0 || remap[t[1]] < 0 || remap[t[2]] < 0) continue;
    out.add_triangle(static_cast<std::uint32_t>(remap[t[0]]), static_cast<std::uint32_t>(remap[t[1]]),
                     static_cast<std::uint32_t>(remap[t[2]]));
  }
  return compact(out);
}

std::vector<double> end_centre(const Mesh& base, const std::vector<std::uint32_t>& punctures, const BetaVector& beta,
                               std::size_t i) {
  const std::size_t m = base.dim, e = punctures.size();
  if (i >= e || beta.size() != e) throw Error(ErrorKind::BadParams, "end index out of range");
  std::vector<double> c(e * (m + 1), 0.0);
  const auto xi = base.vertex(punctures[i]);
  for (std::size_t j = 0; j < e; ++j) {
    if (j != i) puncture_block(xi, base.vertex(punctures[j]), beta[j].to_double(), c.data() + j * (m + 1));
  }
  return c;
}

NormalFormReport verify_normal_form(const NormalFormSpec& input, const Mesh* base_override) {
  NormalFormReport report;
  report.spec = make_normal_form_spec(input.theta, input.genus, input.beta);
  const auto& spec = report.spec;
  const std::size_t e = spec.beta.size();

  NormalFormBase base;
  if (base_override != nullptr) {
    base.mesh = *base_override;
    base.punctures = farthest_vertices(base.mesh, e);
    base.r_cut = default_cut_radius(base.mesh);
    base.clear.assign(e, 5.0 * base.r_cut);
    base.s_high.assign(e, 4.0 * base.r_cut);
  } else {
    base = normal_form_base(spec.theta, spec.genus, e);
  }
  const double r_cut = base.r_cut;
  report.mesh = puncture_embed(base.mesh, base.punctures, spec.beta, r_cut, base.clear);
  report.topology = mesh_topology(report.mesh);
  const auto& topo = report.topology;
  // Codes count cross-caps minus one for non-orientable components.
  const int code_genus = topo.theta == 1 ? topo.genus : topo.genus - 1;

  report.checks.push_back(check("theta", std::to_string(topo.theta), std::to_string(spec.theta), topo.theta == spec.theta));
  report.checks.push_back(check("genus", std::to_string(code_genus), std::to_string(spec.genus), code_genus == spec.genus));
  report.checks.push_back(check("ends", std::to_string(topo.boundary_components), std::to_string(e),
                                topo.boundary_components == static_cast<int>(e)));
  report.checks.push_back(check("connected", std::to_string(topo.connected_components), "1",
                                topo.connected_components == 1));

  report.ends.resize(e);
  std::vector<std::exception_ptr> failures(e);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < e; ++i) {
    try {
      const double b = spec.beta[i].to_double();
      const auto c = end_centre(base.mesh, base.punctures, spec.beta, i);
      const double s_hi = base.s_high[i], s_lo = 1.5 * r_cut;
      std::vector<double> radii;
      for (std::size_t k = 0; k < kRadii; ++k) {
        const double s = s_hi * std::pow(s_lo / s_hi, static_cast<double>(k) / (kRadii - 1));
        radii.push_back(std::sqrt(std::pow(s, -2.0 * b) + 1.0 / (s * s)));
      }
      std::vector<char> mask(report.mesh.triangles.size(), 0);
      const auto tag = end_tag(i);
      auto tagged = [&](std::uint32_t v) {
        auto it = report.mesh.marks.find(v);
        return it != report.mesh.marks.end() && it->second == tag;
      };
      for (std::size_t t = 0; t < mask.size(); ++t) {
        const auto& tri = report.mesh.triangles[t];
        mask[t] = tagged(tri[0]) && tagged(tri[1]) && tagged(tri[2]);
      }
      report.ends[i] = growth_exponent(report.mesh, c, radii, &mask);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }

  bool exponents_ok = true;
  BetaVector measured;
  for (std::size_t i = 0; i < e; ++i) {
    const std::string name = "end" + std::to_string(i) + " exponent";
    if (failures[i]) {
      std::string what = "error";
      try {
        std::rethrow_exception(failures[i]);
      } catch (const std::exception& ex) {
        what = ex.what();
      }
      report.checks.push_back(check(name, what, spec.beta[i].str(), false, 0.1));
      exponents_ok = false;
      continue;
    }
    const auto& g = report.ends[i];
    const bool ok = std::abs(g.slope - spec.beta[i].to_double()) <= 0.1;
    exponents_ok = exponents_ok && ok && g.rounded.has_value();
    if (g.rounded) measured.push_back(*g.rounded);
    report.checks.push_back(check(name, format_double(g.slope), spec.beta[i].str(), ok, 0.1));
  }

  bool code_ok = false;
  std::string code_text = "unavailable";
  if (exponents_ok && code_genus >= 0 && topo.connected_components == 1) {
    try {
      std::sort(measured.begin(), measured.end());
      const auto code = make_code({make_component_code(topo.theta, code_genus, measured)});
      code_text = serialize(code);
      code_ok = code_equiv(code, normal_form_code(spec)).has_value();
    } catch (const Error& ex) {
      code_text = ex.what();
    }
  }
  report.checks.push_back(check("code", code_text, serialize(normal_form_code(spec)), code_ok));
  report.passed = all_pass(report.checks);
  return report;
}

}  // namespace horncode
