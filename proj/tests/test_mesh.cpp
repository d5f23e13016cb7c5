#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "horncode/error.hpp"
#include "horncode/geometry.hpp"
#include "horncode/surfaces.hpp"

using namespace horncode;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

std::vector<double> dyadic(int from, int to) {
  std::vector<double> out;
  if (from <= to) {
    for (int k = from; k <= to; ++k) out.push_back(std::ldexp(1.0, k));
  } else {
    for (int k = from; k >= to; --k) out.push_back(std::ldexp(1.0, k));
  }
  return out;
}

std::uint32_t nearest(const Mesh& m, std::vector<double> p) {
  std::uint32_t best = 0;
  for (std::uint32_t v = 1; v < m.vertex_count(); ++v) {
    if (distance(m.vertex(v), p) < distance(m.vertex(best), p)) best = v;
  }
  return best;
}

Mesh random_permutation(const Mesh& m, Rng& rng) {
  std::vector<std::size_t> vp(m.vertex_count()), tp(m.triangles.size());
  std::iota(vp.begin(), vp.end(), 0);
  std::iota(tp.begin(), tp.end(), 0);
  std::shuffle(vp.begin(), vp.end(), rng);
  std::shuffle(tp.begin(), tp.end(), rng);
  return permuted(m, vp, tp);
}

}  // namespace

TEST_CASE("OFF and marks round trip") {
  Mesh tube = make_tube(Rational(1, 2), 1.0, 8.0, 6, 8);
  std::stringstream ss;
  write_off(ss, tube);
  CHECK(ss.str().rfind("OFF\n", 0) == 0);
  Mesh back = read_off(ss);
  CHECK(back.coords == tube.coords);
  CHECK(back.triangles == tube.triangles);
  apply_marks_json(back, marks_to_json(tube));
  CHECK(back.marks == tube.marks);

  Mesh wide;
  wide.dim = 6;
  for (int i = 0; i < 3; ++i) wide.add_vertex(std::vector<double>{1.0 * i, 0.5, -2.0, 0.125, 1e-7, 3.0});
  wide.add_triangle(0, 1, 2);
  std::stringstream ws;
  write_off(ws, wide);
  CHECK(ws.str().rfind("nOFF\n6\n", 0) == 0);
  Mesh wide_back = read_off(ws);
  CHECK(wide_back.dim == 6);
  CHECK(wide_back.coords == wide.coords);

  std::stringstream bad("OFF\n3 1 0\n0 0 0\n1 0 0\n");
  CHECK(kind_of([&] { read_off(bad); }) == ErrorKind::Io);
}

TEST_CASE("generators enforce exponent ranges") {
  CHECK(kind_of([] { make_horn(Rational(1, 2), 1.0, 10, 10); }) == ErrorKind::BadParams);
  CHECK(kind_of([] { make_tube(Rational(3, 2), 1.0, 10.0, 10, 10); }) == ErrorKind::BadParams);
  CHECK(kind_of([] { make_strip(Rational(2), 1.0, 10.0, 4, 10); }) == ErrorKind::BadParams);
  CHECK(kind_of([] { make_torus(2.0, 1.0, 0, 8); }) == ErrorKind::BadParams);
  CHECK(kind_of([] { parse_surface_family("klein"); }) == ErrorKind::BadParams);

  Mesh strip = generate_surface(SurfaceFamily::Strip, {Rational(-1), 1.0, 1000.0, 200, 8, 1});
  CHECK(strip.dim == 2);
  std::size_t lower = 0, upper = 0;
  for (const auto& [v, tag] : strip.marks) {
    lower += tag == "lower";
    upper += tag == "upper";
  }
  CHECK(lower > 0);
  CHECK(lower == upper);
}

TEST_CASE("inner distance is a metric dominating Euclidean distance") {
  Mesh torus = make_torus(2.0, 1.0, 48, 24);
  InnerMetric metric(torus);
  Rng rng(kDefaultSeed);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(torus.vertex_count() - 1));
  std::map<std::uint32_t, std::vector<double>> rows;
  auto row = [&](std::uint32_t v) -> const std::vector<double>& {
    auto it = rows.find(v);
    if (it == rows.end()) it = rows.emplace(v, metric.from(v)).first;
    return it->second;
  };
  std::vector<std::uint32_t> pool(40);
  for (auto& v : pool) v = pick(rng);
  std::uniform_int_distribution<std::size_t> pool_pick(0, pool.size() - 1);
  for (int i = 0; i < 1000; ++i) {
    const auto p = pool[pool_pick(rng)], q = pool[pool_pick(rng)], r = pool[pool_pick(rng)];
    CHECK(row(p)[q] == row(q)[p]);
    CHECK(row(p)[r] <= row(p)[q] + row(q)[r]);
    CHECK((row(p)[q] == 0.0) == (p == q));
    CHECK(row(p)[q] >= distance(torus.vertex(p), torus.vertex(q)));
  }
  CHECK(inner_distance(torus, 7, 7) == 0.0);
  CHECK(metric.distance(3, 250) == row(3)[250]);
}

TEST_CASE("unreachable vertices are reported") {
  Mesh two;
  for (auto p : {std::vector<double>{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 0, 0}, {6, 0, 0}, {5, 1, 0}}) two.add_vertex(p);
  two.add_triangle(0, 1, 2);
  two.add_triangle(3, 4, 5);
  CHECK(kind_of([&] { inner_distance(two, 0, 4); }) == ErrorKind::Disconnected);
}

TEST_CASE("antipodal geodesic on a cylinder cross-section") {
  Mesh cyl = make_cylinder(2.0, 256, 256);
  const std::uint32_t p = 128 * 256, q = 128 * 256 + 128;
  CHECK(cyl.vertex(p)[2] == cyl.vertex(q)[2]);
  CHECK(inner_distance(cyl, p, q) == doctest::Approx(kPi).epsilon(0.05));
}

TEST_CASE("one uniform refinement never lengthens inner distances by much") {
  Rng rng(kDefaultSeed);
  for (const auto& mesh : {make_cylinder(2.0, 12, 16), make_torus(2.0, 1.0, 16, 8), make_strip(Rational(1, 2), 1.0, 20.0, 4, 40),
                           make_sphere(1.0, 8, 16)}) {
    InnerMetric coarse(mesh), fine(subdivide(mesh));
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(mesh.vertex_count() - 1));
    for (int i = 0; i < 20; ++i) {
      const auto p = pick(rng);
      const auto dc = coarse.from(p);
      const auto df = fine.from(p);
      for (std::uint32_t q = 0; q < mesh.vertex_count(); q += 5) {
        // Integer rounding of segment lengths allows a few grid units of slack.
        CHECK(df[q] <= dc[q] * (1 + 1e-9) + 1e-9);
        CHECK(df[q] >= dc[q] * 0.95);
      }
    }
  }
}

TEST_CASE("LNE constants of model strips and a disc") {
  const Mesh half = make_strip(Rational(1, 2), 1.0, 100.0, 16, 2000);
  const auto e_half = lne_constant(half, 10000);
  CHECK(e_half.pairs >= 10000);
  CHECK(e_half.constant >= 1.0);
  CHECK(e_half.constant <= 1.05);

  const Mesh cusp = make_strip(Rational(-1), 1.0, 1000.0, 8, 300);
  const auto e_cusp = lne_constant(cusp, 10000);
  CHECK(e_cusp.pairs >= 10000);
  CHECK(e_cusp.constant >= 1.0);
  CHECK(e_cusp.constant <= 2.05);

  CHECK(lne_constant(make_disc(1.0, 24, 6), 10000).constant <= 1.02);
  CHECK(kind_of([&] { lne_constant(half, 999); }) == ErrorKind::BadParams);
}

TEST_CASE("parallel and serial LNE estimates agree exactly") {
  const Mesh strip = make_strip(Rational(-1, 2), 1.0, 50.0, 6, 120);
  const auto a = lne_constant(strip, 2000, 11);
  const auto b = serial::lne_constant(strip, 2000, 11);
  CHECK(a.constant == b.constant);
  CHECK(a.pairs == b.pairs);
  CHECK(a.worst_p == b.worst_p);
  CHECK(a.worst_q == b.worst_q);
}

TEST_CASE("crossing the cusp of the inverse strip costs at most twice the chord") {
  const Mesh cusp = make_strip(Rational(-1), 1.0, 1000.0, 8, 300);
  for (double x : {5.0, 40.0, 300.0}) {
    const auto low = nearest(cusp, {x, 0.0});
    const auto high = nearest(cusp, {x * 1.3, 1.0 / (x * 1.3)});
    CAPTURE(x);
    CHECK(inner_distance(cusp, low, high) <= 2.0 * distance(cusp.vertex(low), cusp.vertex(high)));
  }
}

TEST_CASE("link lengths on spheres and horns") {
  const Mesh sphere = make_sphere(1.0, 64, 128);
  const std::vector<double> north{0.0, 0.0, 1.0};
  auto equator = link_length(sphere, north, std::sqrt(2.0));
  CHECK(equator.length == doctest::Approx(2 * kPi).epsilon(0.02));
  CHECK(equator.components == 1);

  const Mesh horn = make_horn(Rational(2), 1.0, 200, 200);
  const std::vector<double> apex{0.0, 0.0, 0.0};
  for (double r : {0.01, 0.05, 0.1}) {
    // |x| = r on z^2 + z^4 = r^2 is the circle of radius z^2.
    const double z = std::sqrt((std::sqrt(1 + 4 * r * r) - 1) / 2);
    CAPTURE(r);
    CHECK(link_length(horn, apex, r).length == doctest::Approx(2 * kPi * z * z).epsilon(0.02));
  }

  const Mesh pair = make_sphere_pair(64, 64);
  CHECK(link_length(pair, apex, 0.2).components == 2);

  // Level sets through vertices are nudged rather than dropped.
  Mesh grid;
  grid.dim = 2;
  for (int i = -4; i <= 4; ++i) {
    for (int j = -4; j <= 4; ++j) grid.add_vertex(std::vector<double>{1.0 * i, 1.0 * j});
  }
  for (std::uint32_t i = 0; i < 8; ++i) {
    for (std::uint32_t j = 0; j < 8; ++j) {
      const std::uint32_t a = i * 9 + j;
      grid.add_triangle(a, a + 9, a + 10);
      grid.add_triangle(a, a + 10, a + 1);
    }
  }
  auto ring = link_length(grid, std::vector<double>{0.0, 0.0}, 2.0);
  CHECK(ring.components == 1);
  CHECK(ring.length == doctest::Approx(4 * std::sqrt(2.0) * 2).epsilon(0.3));
  CHECK(kind_of([&] { link_length(grid, std::vector<double>{0.0, 0.0}, 50.0); }) == ErrorKind::LevelSetEmpty);
}

TEST_CASE("horn exponents from link growth") {
  const std::vector<double> apex{0.0, 0.0, 0.0};
  for (auto beta : {Rational(1), Rational(3, 2), Rational(2)}) {
    CAPTURE(beta.str());
    const Mesh horn = generate_surface(SurfaceFamily::Horn, {beta});
    const auto g = growth_exponent(horn, apex, dyadic(-1, -10));
    CHECK(std::abs(g.slope - beta.to_double()) <= 0.1);
    REQUIRE(g.rounded.has_value());
    CHECK(*g.rounded == beta);
    CHECK(g.radii_used.size() == 10);
  }
}

TEST_CASE("tube exponents toward infinity") {
  const std::vector<double> origin{0.0, 0.0, 0.0};
  for (auto beta : {Rational(1), Rational(1, 2), Rational(0)}) {
    CAPTURE(beta.str());
    const auto g = growth_exponent(make_tube(beta, 1.0, 512.0, 200, 128), origin, dyadic(2, 8));
    CHECK(std::abs(g.slope - beta.to_double()) <= 0.1);
  }
  const auto cyl = growth_exponent(make_cylinder(512.0, 256, 256), origin, dyadic(2, 8));
  CHECK(std::abs(cyl.slope) <= 0.1);
  const auto par = growth_exponent(make_paraboloid(1e4, 200, 128), origin, dyadic(3, 12));
  CHECK(std::abs(par.slope - 0.5) <= 0.1);
  REQUIRE(par.rounded.has_value());
  CHECK(*par.rounded == Rational(1, 2));

  const Mesh tube = make_tube(Rational(0), 1.0, 512.0, 50, 16);
  CHECK(kind_of([&] { growth_exponent(tube, origin, dyadic(2, 6)); }) == ErrorKind::GridTooSmall);
  std::vector<double> zigzag{4, 8, 16, 8, 32, 64};
  CHECK(kind_of([&] { growth_exponent(tube, origin, zigzag); }) == ErrorKind::BadParams);
}

TEST_CASE("topology of model surfaces") {
  auto topo = [](const Mesh& m) {
    auto t = mesh_topology(m);
    return std::array<int, 3>{t.theta, t.genus, t.boundary_components};
  };
  CHECK(topo(make_torus(2.0, 1.0, 32, 16)) == std::array<int, 3>{1, 1, 0});
  CHECK(topo(make_sphere(1.0, 16, 32)) == std::array<int, 3>{1, 0, 0});
  CHECK(topo(make_moebius_band(0.4, 96, 8)) == std::array<int, 3>{-1, 1, 1});
  CHECK(topo(make_cylinder(2.0, 8, 16)) == std::array<int, 3>{1, 0, 2});
  CHECK(topo(make_disc(1.0, 6, 6)) == std::array<int, 3>{1, 0, 1});
  for (int g = 0; g <= 3; ++g) {
    CAPTURE(g);
    CHECK(topo(make_genus_surface(g, 2)) == std::array<int, 3>{1, g, 0});
  }
  auto mob = mesh_topology(make_moebius_band(0.4, 96, 8));
  CHECK(mob.euler == 0);
  CHECK(mob.connected_components == 1);
}

TEST_CASE("topology is invariant under vertex and triangle relabelling") {
  Rng rng(kDefaultSeed);
  for (const auto& mesh : {make_torus(2.0, 1.0, 24, 12), make_moebius_band(0.3, 40, 4), make_genus_surface(2, 2),
                           make_cylinder(1.0, 6, 10)}) {
    const auto base = mesh_topology(mesh);
    for (int i = 0; i < 5; ++i) {
      const auto t = mesh_topology(random_permutation(mesh, rng));
      CHECK(t.theta == base.theta);
      CHECK(t.genus == base.genus);
      CHECK(t.boundary_components == base.boundary_components);
      CHECK(t.euler == base.euler);
    }
  }
}

TEST_CASE("non-manifold edges are rejected") {
  Mesh fin;
  for (auto p : {std::vector<double>{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}}) fin.add_vertex(p);
  fin.add_triangle(0, 1, 2);
  fin.add_triangle(1, 0, 3);
  fin.add_triangle(0, 1, 4);
  CHECK(kind_of([&] { mesh_topology(fin); }) == ErrorKind::NonManifold);
}

TEST_CASE("tangent cone directions") {
  const auto cone = cone_directions(make_tube(Rational(1), 1.0, 1000.0, 200, 128), 10.0);
  CHECK(cone.verdict == "dim 2");
  CHECK(cone.cone_dim == 2);
  CHECK(cone.clusters == 1);

  const auto half = cone_directions(make_tube(Rational(1, 2), 1.0, 1e6, 200, 128), 1e4);
  CHECK(half.verdict == "dim < 2");
  CHECK(half.direction_dim == 0);

  const auto cyl = cone_directions(make_cylinder(1e4, 200, 64), 1e3);
  CHECK(cyl.verdict == "dim < 2");
  CHECK(cyl.clusters == 2);

  CHECK(kind_of([] { cone_directions(make_sphere(1.0, 8, 8), 5.0); }) == ErrorKind::TooFewFarSamples);
}
