#include "horncode/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <set>

#include "horncode/error.hpp"

namespace horncode {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::BadParams, what);
}

std::vector<double> geometric(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double ratio = std::log(hi / lo) / (n - 1);
  for (int k = 0; k < n; ++k) out[k] = lo * std::exp(ratio * k);
  out.back() = hi;
  return out;
}

std::vector<double> uniform(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[k] = lo + (hi - lo) * k / (n - 1);
  return out;
}

// Surface of revolution about the z axis: one ring per entry of zs, optional apex
// at the origin below the first ring. Triangles are consistently oriented.
Mesh revolve(const std::vector<double>& zs, const std::function<double(double)>& radius, int n_around,
             bool apex) {
  Mesh m;
  std::uint32_t top = 0;
  if (apex) top = m.add_vertex(std::vector<double>{0.0, 0.0, 0.0});
  const std::uint32_t base = m.vertex_count();
  for (double z : zs) {
    const double rho = radius(z);
    for (int j = 0; j < n_around; ++j) {
      const double phi = 2.0 * kPi * j / n_around;
      m.add_vertex(std::vector<double>{rho * std::cos(phi), rho * std::sin(phi), z});
    }
  }
  auto id = [&](std::size_t i, int j) {
    return static_cast<std::uint32_t>(base + i * n_around + ((j % n_around) + n_around) % n_around);
  };
  if (apex) {
    for (int j = 0; j < n_around; ++j) m.add_triangle(top, id(0, j + 1), id(0, j));
  }
  for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
    for (int j = 0; j < n_around; ++j) {
      m.add_triangle(id(i, j), id(i, j + 1), id(i + 1, j + 1));
      m.add_triangle(id(i, j), id(i + 1, j + 1), id(i + 1, j));
    }
  }
  return m;
}

void mark_ring(Mesh& m, std::size_t first, int count, const std::string& tag) {
  for (int j = 0; j < count; ++j) m.marks[first + j] = tag;
}

int pick(int value, int fallback) { return value > 0 ? value : fallback; }
double pick(double value, double fallback) { return value > 0 ? value : fallback; }

// UV sphere around `centre` whose poles lie on the given unit axis.
Mesh uv_sphere(double radius, int n_lat, int n_lon, std::array<double, 3> centre, int axis) {
  require(n_lat >= 2 && n_lon >= 3, "sphere resolution too small");
  Mesh m;
  auto place = [&](double along, double c, double s) {
    std::array<double, 3> p{};
    p[axis] = along;
    p[(axis + 1) % 3] = c;
    p[(axis + 2) % 3] = s;
    for (int k = 0; k < 3; ++k) p[k] = centre[k] + radius * p[k];
    return m.add_vertex(p);
  };
  const std::uint32_t north = place(1.0, 0.0, 0.0);
  for (int i = 1; i < n_lat; ++i) {
    const double th = kPi * i / n_lat;
    for (int j = 0; j < n_lon; ++j) {
      const double phi = 2.0 * kPi * j / n_lon;
      place(std::cos(th), std::sin(th) * std::cos(phi), std::sin(th) * std::sin(phi));
    }
  }
  const std::uint32_t south = place(-1.0, 0.0, 0.0);
  auto id = [&](int i, int j) { return static_cast<std::uint32_t>(1 + (i - 1) * n_lon + (j % n_lon)); };
  for (int j = 0; j < n_lon; ++j) m.add_triangle(north, id(1, j), id(1, j + 1));
  for (int i = 1; i + 1 < n_lat; ++i) {
    for (int j = 0; j < n_lon; ++j) {
      m.add_triangle(id(i, j), id(i + 1, j), id(i + 1, j + 1));
      m.add_triangle(id(i, j), id(i + 1, j + 1), id(i, j + 1));
    }
  }
  for (int j = 0; j < n_lon; ++j) m.add_triangle(south, id(n_lat - 1, j + 1), id(n_lat - 1, j));
  return m;
}

}  // namespace

SurfaceFamily parse_surface_family(std::string_view name) {
  static const std::pair<std::string_view, SurfaceFamily> table[] = {
      {"horn", SurfaceFamily::Horn},           {"tube", SurfaceFamily::Tube},
      {"strip", SurfaceFamily::Strip},         {"cylinder", SurfaceFamily::Cylinder},
      {"paraboloid", SurfaceFamily::Paraboloid}, {"torus", SurfaceFamily::Torus},
      {"genus_g", SurfaceFamily::GenusG},      {"moebius_band", SurfaceFamily::MoebiusBand},
      {"sphere", SurfaceFamily::Sphere},       {"sphere_pair", SurfaceFamily::SpherePair},
      {"disc", SurfaceFamily::Disc},
  };
  for (const auto& [n, f] : table) {
    if (n == name) return f;
  }
  throw Error(ErrorKind::BadParams, "unknown surface family '" + std::string(name) + "'");
}

Mesh make_horn(const Rational& beta, double z_max, int n_rings, int n_around) {
  require(beta >= Rational(1), "horn needs beta >= 1");
  require(z_max > 0 && n_rings >= 2 && n_around >= 3, "bad horn parameters");
  const double b = beta.to_double();
  return revolve(geometric(z_max * 1e-4, z_max, n_rings), [b](double z) { return std::pow(z, b); },
                 n_around, true);
}

Mesh make_tube(const Rational& beta, double z_min, double z_max, int n_rings, int n_around) {
  require(beta <= Rational(1), "tube needs beta <= 1");
  require(z_min > 0 && z_max > z_min && n_rings >= 2 && n_around >= 3, "bad tube parameters");
  const double b = beta.to_double();
  Mesh m = revolve(geometric(z_min, z_max, n_rings), [b](double z) { return std::pow(z, b); }, n_around,
                   false);
  mark_ring(m, 0, n_around, "inner");
  mark_ring(m, static_cast<std::size_t>(n_rings - 1) * n_around, n_around, "outer");
  return m;
}

Mesh make_strip(const Rational& beta, double x_min, double x_max, int rows, int max_columns) {
  require(beta <= Rational(1), "strip needs beta <= 1");
  require(x_min > 0 && x_max > x_min && rows >= 1 && max_columns >= 1, "bad strip parameters");
  const double b = beta.to_double();
  const double min_step = (x_max - x_min) / max_columns;
  std::vector<double> xs{x_min};
  while (xs.back() < x_max) {
    const double x = xs.back();
    double next = x + std::max(2.0 * std::pow(x, b) / rows, min_step);
    if (next > x_max || x_max - next < 0.5 * min_step) next = x_max;
    xs.push_back(next);
  }
  Mesh m;
  m.dim = 2;
  const std::size_t per = static_cast<std::size_t>(rows) + 1;
  for (double x : xs) {
    const double w = std::pow(x, b);
    for (int r = 0; r <= rows; ++r) {
      const auto v = m.add_vertex(std::vector<double>{x, w * r / rows});
      if (r == 0) m.marks[v] = "lower";
      if (r == rows) m.marks[v] = "upper";
    }
  }
  for (std::size_t c = 0; c + 1 < xs.size(); ++c) {
    for (std::size_t r = 0; r < per - 1; ++r) {
      const auto a = static_cast<std::uint32_t>(c * per + r);
      const auto d = static_cast<std::uint32_t>((c + 1) * per + r);
      m.add_triangle(a, d, d + 1);
      m.add_triangle(a, d + 1, a + 1);
    }
  }
  return m;
}

Mesh make_cylinder(double half_length, int n_rings, int n_around) {
  require(half_length > 0 && n_rings >= 2 && n_around >= 3, "bad cylinder parameters");
  Mesh m = revolve(uniform(-half_length, half_length, n_rings), [](double) { return 1.0; }, n_around, false);
  mark_ring(m, 0, n_around, "end0");
  mark_ring(m, static_cast<std::size_t>(n_rings - 1) * n_around, n_around, "end1");
  return m;
}

Mesh make_paraboloid(double z_max, int n_rings, int n_around) {
  require(z_max > 0 && n_rings >= 2 && n_around >= 3, "bad paraboloid parameters");
  Mesh m = revolve(geometric(z_max * 1e-6, z_max, n_rings), [](double z) { return std::sqrt(z); }, n_around,
                   true);
  mark_ring(m, 1 + static_cast<std::size_t>(n_rings - 1) * n_around, n_around, "end0");
  return m;
}

Mesh make_torus(double major, double minor, int n_major, int n_minor) {
  require(major > minor && minor > 0 && n_major >= 3 && n_minor >= 3, "bad torus parameters");
  Mesh m;
  for (int i = 0; i < n_major; ++i) {
    const double u = 2.0 * kPi * i / n_major;
    for (int j = 0; j < n_minor; ++j) {
      const double v = 2.0 * kPi * j / n_minor;
      const double rho = major + minor * std::cos(v);
      m.add_vertex(std::vector<double>{rho * std::cos(u), rho * std::sin(u), minor * std::sin(v)});
    }
  }
  auto id = [&](int i, int j) { return static_cast<std::uint32_t>((i % n_major) * n_minor + (j % n_minor)); };
  for (int i = 0; i < n_major; ++i) {
    for (int j = 0; j < n_minor; ++j) {
      m.add_triangle(id(i, j), id(i + 1, j), id(i + 1, j + 1));
      m.add_triangle(id(i, j), id(i + 1, j + 1), id(i, j + 1));
    }
  }
  return m;
}

Mesh make_moebius_band(double half_width, int n_around, int n_across) {
  require(half_width > 0 && half_width < 1 && n_around >= 5 && n_across >= 1, "bad Moebius parameters");
  Mesh m;
  for (int i = 0; i < n_around; ++i) {
    const double u = 2.0 * kPi * i / n_around;
    for (int j = 0; j <= n_across; ++j) {
      const double v = -half_width + 2.0 * half_width * j / n_across;
      const double rho = 1.0 + v * std::cos(u / 2);
      m.add_vertex(std::vector<double>{rho * std::cos(u), rho * std::sin(u), v * std::sin(u / 2)});
    }
  }
  // Going once around flips the cross-section: (n_around, j) is (0, n_across - j).
  auto id = [&](int i, int j) {
    if (i == n_around) return static_cast<std::uint32_t>(n_across - j);
    return static_cast<std::uint32_t>(i * (n_across + 1) + j);
  };
  for (int i = 0; i < n_around; ++i) {
    for (int j = 0; j < n_across; ++j) {
      m.add_triangle(id(i, j), id(i + 1, j), id(i + 1, j + 1));
      m.add_triangle(id(i, j), id(i + 1, j + 1), id(i, j + 1));
    }
  }
  return m;
}

Mesh make_sphere(double radius, int n_lat, int n_lon) {
  require(radius > 0, "bad sphere radius");
  return uv_sphere(radius, n_lat, n_lon, {0.0, 0.0, 0.0}, 2);
}

Mesh make_sphere_pair(int n_lat, int n_lon) {
  Mesh left = uv_sphere(1.0, n_lat, n_lon, {-1.0, 0.0, 0.0}, 0);   // north pole at the origin
  Mesh right = uv_sphere(1.0, n_lat, n_lon, {1.0, 0.0, 0.0}, 0);   // south pole at the origin
  Mesh m = left;
  const std::uint32_t shift = m.vertex_count();
  const std::uint32_t right_south = right.vertex_count() - 1;
  auto map = [&](std::uint32_t v) -> std::uint32_t {
    if (v == right_south) return 0;  // left north pole
    return shift + (v < right_south ? v : v - 1);
  };
  for (std::uint32_t v = 0; v < right.vertex_count(); ++v) {
    if (v != right_south) m.add_vertex(right.vertex(v));
  }
  for (const auto& t : right.triangles) m.add_triangle(map(t[0]), map(t[1]), map(t[2]));
  m.marks[0] = "o";
  return m;
}

Mesh make_disc(double radius, int n_rings, int n_around) {
  require(radius > 0 && n_rings >= 1 && n_around >= 3, "bad disc parameters");
  Mesh m;
  m.dim = 2;
  m.add_vertex(std::vector<double>{0.0, 0.0});
  // Ring k carries k * n_around points so triangles stay well shaped.
  std::vector<std::uint32_t> prev{0};
  for (int k = 1; k <= n_rings; ++k) {
    const int count = k * n_around;
    std::vector<std::uint32_t> ring;
    for (int j = 0; j < count; ++j) {
      const double phi = 2.0 * kPi * j / count;
      const double rho = radius * k / n_rings;
      ring.push_back(m.add_vertex(std::vector<double>{rho * std::cos(phi), rho * std::sin(phi)}));
    }
    if (k == 1) {
      for (int j = 0; j < count; ++j) m.add_triangle(0, ring[j], ring[(j + 1) % count]);
    } else {
      // Merge-walk the two rings by angle.
      const std::size_t a_n = prev.size(), b_n = ring.size();
      std::size_t ia = 0, ib = 0;
      while (ia < a_n || ib < b_n) {
        const double next_a = static_cast<double>(ia + 1) / a_n, next_b = static_cast<double>(ib + 1) / b_n;
        if (ia < a_n && (ib >= b_n || next_a < next_b)) {
          m.add_triangle(prev[ia], ring[ib % b_n], prev[(ia + 1) % a_n]);
          ++ia;
        } else {
          m.add_triangle(prev[ia % a_n], ring[ib], ring[(ib + 1) % b_n]);
          ++ib;
        }
      }
    }
    prev = std::move(ring);
  }
  return m;
}

void set_breakpoints(VoxelSurfaceSpec& spec, int cells_per_unit, const std::vector<Grading>& gradings) {
  require(!spec.voxels.empty() && cells_per_unit >= 1, "bad voxel spec");
  for (int a = 0; a < 3; ++a) {
    int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
    for (const auto& v : spec.voxels) {
      lo = std::min(lo, v[a]);
      hi = std::max(hi, v[a] + 1);
    }
    const double x0 = lo + spec.offset[a], x1 = hi + spec.offset[a];
    std::vector<double> pts;
    auto near_grading = [&](double x) {
      for (const auto& g : gradings) {
        if (!std::isnan(g.centre[a]) && std::abs(x - g.centre[a]) < g.radius) return true;
      }
      return false;
    };
    for (int u = lo; u <= hi; ++u) pts.push_back(u + spec.offset[a]);
    for (int u = lo; u < hi; ++u) {
      for (int s = 1; s < cells_per_unit; ++s) {
        const double x = u + spec.offset[a] + static_cast<double>(s) / cells_per_unit;
        if (!near_grading(x)) pts.push_back(x);
      }
    }
    for (const auto& g : gradings) {
      const double c = g.centre[a];
      if (std::isnan(c)) continue;
      pts.push_back(c);
      double d = 0.0, h = g.h_min;
      while (d + h < g.radius) {
        d += h;
        pts.push_back(c - d);
        pts.push_back(c + d);
        h *= 1.0 + g.growth;
      }
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> clean;
    for (double x : pts) {
      if (x < x0 - 1e-12 || x > x1 + 1e-12) continue;
      if (!clean.empty() && x - clean.back() < 1e-9) continue;
      clean.push_back(x);
    }
    spec.breakpoints[a] = std::move(clean);
  }
}

Mesh make_voxel_surface(const VoxelSurfaceSpec& spec) {
  const std::set<std::array<int, 3>> filled(spec.voxels.begin(), spec.voxels.end());
  auto index_of = [&](int a, double x) {
    const auto& bp = spec.breakpoints[a];
    auto it = std::lower_bound(bp.begin(), bp.end(), x - 1e-9);
    if (it == bp.end() || std::abs(*it - x) > 1e-9) throw Error(ErrorKind::BadParams, "missing voxel breakpoint");
    return static_cast<std::size_t>(it - bp.begin());
  };
  Mesh m;
  std::map<std::array<std::size_t, 3>, std::uint32_t> ids;
  auto vertex = [&](const std::array<std::size_t, 3>& key) {
    if (auto it = ids.find(key); it != ids.end()) return it->second;
    std::array<double, 3> p{spec.breakpoints[0][key[0]], spec.breakpoints[1][key[1]], spec.breakpoints[2][key[2]]};
    const auto id = m.add_vertex(p);
    ids.emplace(key, id);
    return id;
  };
  for (const auto& v : filled) {
    for (int a = 0; a < 3; ++a) {
      for (int sign : {-1, 1}) {
        auto nb = v;
        nb[a] += sign;
        if (filled.count(nb)) continue;
        const int u = (a + 1) % 3, w = (a + 2) % 3;
        const std::size_t plane = index_of(a, v[a] + (sign > 0 ? 1 : 0) + spec.offset[a]);
        const std::size_t u0 = index_of(u, v[u] + spec.offset[u]), u1 = index_of(u, v[u] + 1 + spec.offset[u]);
        const std::size_t w0 = index_of(w, v[w] + spec.offset[w]), w1 = index_of(w, v[w] + 1 + spec.offset[w]);
        for (std::size_t i = u0; i < u1; ++i) {
          for (std::size_t j = w0; j < w1; ++j) {
            auto key = [&](std::size_t iu, std::size_t jw) {
              std::array<std::size_t, 3> k{};
              k[a] = plane;
              k[u] = iu;
              k[w] = jw;
              return vertex(k);
            };
            // (u, w, a) is right-handed, so (i,j),(i+1,j),(i+1,j+1) faces +a.
            const auto p00 = key(i, j), p10 = key(i + 1, j), p11 = key(i + 1, j + 1), p01 = key(i, j + 1);
            if (sign > 0) {
              m.add_triangle(p00, p10, p11);
              m.add_triangle(p00, p11, p01);
            } else {
              m.add_triangle(p00, p11, p10);
              m.add_triangle(p00, p01, p11);
            }
          }
        }
      }
    }
  }
  return m;
}

VoxelSurfaceSpec genus_plate(int genus) {
  require(genus >= 0, "negative genus");
  VoxelSurfaceSpec spec;
  if (genus == 0) {
    spec.voxels = {{0, 0, 0}};
    spec.offset = {-0.5, -0.5, -0.5};
    return spec;
  }
  const int width = 2 * genus + 1;
  for (int i = 0; i < width; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (j == 1 && i % 2 == 1) continue;  // hole
      spec.voxels.push_back({i, j, 0});
    }
  }
  spec.offset = {-0.5 * width, -1.5, -0.5};
  return spec;
}

Mesh make_genus_surface(int genus, int cells_per_unit) {
  auto spec = genus_plate(genus);
  set_breakpoints(spec, cells_per_unit, {});
  return make_voxel_surface(spec);
}

Mesh generate_surface(SurfaceFamily family, const SurfaceParams& p) {
  switch (family) {
    case SurfaceFamily::Horn:
      return make_horn(p.beta, pick(p.hi, 1.0), pick(p.n_along, 200), pick(p.n_around, 200));
    case SurfaceFamily::Tube:
      return make_tube(p.beta, pick(p.lo, 1.0), pick(p.hi, 512.0), pick(p.n_along, 200), pick(p.n_around, 128));
    case SurfaceFamily::Strip:
      return make_strip(p.beta, pick(p.lo, 1.0), pick(p.hi, 1000.0), pick(p.n_around, 16), pick(p.n_along, 2000));
    case SurfaceFamily::Cylinder:
      return make_cylinder(pick(p.hi, 512.0), pick(p.n_along, 256), pick(p.n_around, 256));
    case SurfaceFamily::Paraboloid:
      return make_paraboloid(pick(p.hi, 1e4), pick(p.n_along, 200), pick(p.n_around, 128));
    case SurfaceFamily::Torus:
      return make_torus(2.0, 1.0, pick(p.n_along, 64), pick(p.n_around, 32));
    case SurfaceFamily::GenusG:
      return make_genus_surface(p.genus, pick(p.n_along, 4));
    case SurfaceFamily::MoebiusBand:
      return make_moebius_band(pick(p.hi, 0.4), pick(p.n_along, 96), pick(p.n_around, 8));
    case SurfaceFamily::Sphere:
      return make_sphere(pick(p.hi, 1.0), pick(p.n_along, 64), pick(p.n_around, 128));
    case SurfaceFamily::SpherePair:
      return make_sphere_pair(pick(p.n_along, 64), pick(p.n_around, 64));
    case SurfaceFamily::Disc:
      return make_disc(pick(p.hi, 1.0), pick(p.n_along, 24), pick(p.n_around, 6));
  }
  throw Error(ErrorKind::BadParams, "unknown surface family");
}

}  // namespace horncode
