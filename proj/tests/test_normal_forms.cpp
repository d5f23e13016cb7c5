#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include <omp.h>

#include "horncode/error.hpp"
#include "horncode/normal_forms.hpp"
#include "horncode/random_codes.hpp"
#include "horncode/strata.hpp"
#include "horncode/surfaces.hpp"

using namespace horncode;

namespace {

Rational q(long n, long d = 1) { return Rational{n, d}; }

const CheckResult& find_check(const NormalFormReport& r, const std::string& name) {
  auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const CheckResult& c) { return c.name == name; });
  REQUIRE(it != r.checks.end());
  return *it;
}

void require_pass(const NormalFormSpec& spec) {
  const auto r = verify_normal_form(spec);
  for (const auto& c : r.checks) {
    INFO(render_line(c));
    CHECK(c.pass);
  }
  CHECK(r.passed);
  REQUIRE(r.ends.size() == spec.beta.size());
  for (std::size_t i = 0; i < spec.beta.size(); ++i) {
    CHECK(std::abs(r.ends[i].slope - spec.beta[i].to_double()) <= 0.1);
  }
}

std::uint32_t extreme_vertex(const Mesh& m, double sign) {
  std::uint32_t best = 0;
  for (std::size_t v = 1; v < m.vertex_count(); ++v) {
    if (sign * m.vertex(v)[2] > sign * m.vertex(best)[2]) best = static_cast<std::uint32_t>(v);
  }
  return best;
}

std::uint32_t top_vertex(const Mesh& m) { return extreme_vertex(m, 1.0); }

// Growth of the single end of a once-punctured sphere, for s in [s_lo, s_hi].
double sphere_end_slope(const Rational& beta, double s_lo, double s_hi) {
  const Mesh sphere = make_sphere(1.0, 128, 128);
  const std::vector<std::uint32_t> p{top_vertex(sphere)};
  const Mesh m = puncture_embed(sphere, p, {beta}, 0.5 * s_lo);
  const auto c = end_centre(sphere, p, {beta}, 0);
  std::vector<double> radii;
  for (int k = 0; k < 8; ++k) {
    const double s = s_hi * std::pow(s_lo / s_hi, k / 7.0);
    radii.push_back(std::sqrt(std::pow(s, -2.0 * beta.to_double()) + 1.0 / (s * s)));
  }
  return growth_exponent(m, c, radii).slope;
}

}  // namespace

TEST_CASE("normal form codes are single components") {
  CHECK(normal_form_code(make_normal_form_spec(1, 0, {q(1, 2)})) == make_code({make_component_code(1, 0, {q(1, 2)})}));
  CHECK(normal_form_code(make_normal_form_spec(1, 3, {})) == make_code({make_component_code(1, 3, {})}));
  CHECK(normal_form_code(make_normal_form_spec(-1, 0, {q(1)})) == make_code({make_component_code(-1, 0, {q(1)})}));
  CHECK(make_normal_form_spec(1, 0, {q(1), q(-2), q(1, 3)}).beta == BetaVector{q(-2), q(1, 3), q(1)});
}

TEST_CASE("normal form spec validation") {
  auto kind = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    FAIL("no error");
    return ErrorKind::Io;
  };
  CHECK(kind([] { make_normal_form_spec(0, 0, {}); }) == ErrorKind::InvalidCode);
  CHECK(kind([] { make_normal_form_spec(1, -1, {}); }) == ErrorKind::InvalidCode);
  CHECK(kind([] { make_normal_form_spec(1, 0, {q(3, 2)}); }) == ErrorKind::OutOfRangeExponent);
}

TEST_CASE("normal form codes agree with strata of the model family") {
  Rng rng(kDefaultSeed);
  const std::vector<Rational> pool{q(-1), q(0), q(1, 3), q(1, 2), q(2, 3), q(1)};
  for (int trial = 0; trial < 200; ++trial) {
    const int theta = rng() % 2 ? 1 : -1;
    const int genus = static_cast<int>(rng() % 4);
    BetaVector beta;
    const int e = static_cast<int>(rng() % 5);
    for (int i = 0; i < e; ++i) beta.push_back(pool[rng() % pool.size()]);
    const auto spec = make_normal_form_spec(theta, genus, beta);
    StrataSpec strata{theta, genus, {}, {}};
    for (const auto& b : spec.beta) strata.ends.push_back({{b}, {b}});
    CHECK(code_equiv(normal_form_code(spec), code_from_strata(strata)).has_value());
  }
}

TEST_CASE("normal form codes are equivalent exactly when the triples agree") {
  Rng rng(kDefaultSeed + 1);
  const std::vector<Rational> pool{q(0), q(1, 2), q(1)};
  std::vector<NormalFormSpec> specs;
  for (int trial = 0; trial < 60; ++trial) {
    BetaVector beta;
    const int e = static_cast<int>(rng() % 3);
    for (int i = 0; i < e; ++i) beta.push_back(pool[rng() % pool.size()]);
    specs.push_back(make_normal_form_spec(rng() % 2 ? 1 : -1, static_cast<int>(rng() % 2), beta));
  }
  for (const auto& a : specs) {
    for (const auto& b : specs) {
      const bool same = a.theta == b.theta && a.genus == b.genus && a.beta == b.beta;
      CHECK(code_equiv(normal_form_code(a), normal_form_code(b)).has_value() == same);
    }
  }
}

TEST_CASE("puncture_embed with no punctures returns the base") {
  const Mesh torus = make_torus(2.0, 1.0, 32, 16);
  const Mesh m = puncture_embed(torus, {}, {});
  CHECK(m.coords == torus.coords);
  CHECK(m.triangles == torus.triangles);
  CHECK(m.dim == 3);
}

TEST_CASE("puncture_embed removes only the cut discs") {
  const Mesh sphere = make_sphere(1.0, 64, 64);
  const std::vector<std::uint32_t> p{top_vertex(sphere), extreme_vertex(sphere, -1.0)};
  REQUIRE(p[0] != p[1]);
  const double r_cut = 0.1;
  const Mesh m = puncture_embed(sphere, p, {q(1), q(1, 2)}, r_cut);
  CHECK(m.dim == 8);
  std::size_t touching = 0;
  for (const auto& t : sphere.triangles) {
    bool near = false;
    for (auto v : t) {
      for (auto pi : p) near = near || distance(sphere.vertex(v), sphere.vertex(pi)) < r_cut;
    }
    touching += near;
  }
  CHECK(m.triangles.size() == sphere.triangles.size() - touching);
  const auto topo = mesh_topology(m);
  CHECK(topo.boundary_components == 2);
  CHECK(topo.theta == 1);
  std::set<std::string> tags;
  for (const auto& [v, tag] : m.marks) tags.insert(tag);
  CHECK(tags == std::set<std::string>{"end0", "end1"});
}

TEST_CASE("puncture_embed rejects close punctures and bad arguments") {
  const Mesh sphere = make_sphere(1.0, 32, 32);
  const auto top = top_vertex(sphere);
  std::uint32_t nb = sphere.triangles[0][0] == top ? sphere.triangles[0][1] : 0;
  for (const auto& t : sphere.triangles) {
    if (t[0] == top) nb = t[1];
  }
  try {
    puncture_embed(sphere, {top, nb}, {q(1), q(1)});
    FAIL("expected PunctureTooClose");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PunctureTooClose);
  }
  CHECK_THROWS_AS(puncture_embed(sphere, {top}, {q(1), q(1)}), Error);
  CHECK_THROWS_AS(puncture_embed(sphere, {top, top}, {q(1), q(1)}), Error);
}

TEST_CASE("punctured round sphere grows like its exponent") {
  CHECK(std::abs(sphere_end_slope(q(1), 0.05, 0.3) - 1.0) <= 0.1);
  CHECK(std::abs(sphere_end_slope(q(1, 2), 0.05, 0.3) - 0.5) <= 0.1);
  CHECK(std::abs(sphere_end_slope(q(0), 0.05, 0.3)) <= 0.1);
}

TEST_CASE("normal form bases have the requested topology") {
  for (int theta : {1, -1}) {
    for (int g = 0; g <= 3; ++g) {
      const auto base = normal_form_base(theta, g, 0);
      const auto topo = mesh_topology(base.mesh);
      CHECK(topo.theta == theta);
      CHECK(topo.genus == (theta == 1 ? g : g + 1));
      CHECK(topo.boundary_components == 0);
      CHECK(base.mesh.dim == (theta == 1 ? 3u : 6u));
    }
  }
}

TEST_CASE("normal forms verify: sphere, torus and two-ended sphere") {
  require_pass(make_normal_form_spec(1, 0, {q(1)}));
  require_pass(make_normal_form_spec(1, 1, {q(1)}));
  require_pass(make_normal_form_spec(1, 0, {q(1, 2), q(1)}));
}

TEST_CASE("normal forms verify: four ends and non-orientable bases") {
  require_pass(make_normal_form_spec(1, 2, {q(0), q(1, 3), q(1, 2), q(1)}));
  require_pass(make_normal_form_spec(-1, 0, {q(1)}));
  require_pass(make_normal_form_spec(-1, 1, {q(1, 2)}));
  require_pass(make_normal_form_spec(-1, 2, {}));
}

TEST_CASE("a sphere base cannot stand in for a non-orientable normal form") {
  const Mesh sphere = make_sphere(1.0, 32, 32);
  const auto r = verify_normal_form(make_normal_form_spec(-1, 0, {}), &sphere);
  CHECK_FALSE(r.passed);
  CHECK_FALSE(find_check(r, "theta").pass);
  CHECK(find_check(r, "ends").pass);
  CHECK(find_check(r, "connected").pass);
}

TEST_CASE("per-end measurements do not depend on the thread count") {
  const auto spec = make_normal_form_spec(1, 0, {q(0), q(1, 2), q(1)});
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = verify_normal_form(spec);
  omp_set_num_threads(4);
  const auto four = verify_normal_form(spec);
  omp_set_num_threads(saved);
  REQUIRE(one.ends.size() == four.ends.size());
  for (std::size_t i = 0; i < one.ends.size(); ++i) {
    CHECK(one.ends[i].slope == four.ends[i].slope);
    CHECK(one.ends[i].lengths == four.ends[i].lengths);
  }
  CHECK(one.passed == four.passed);
}
