#include <doctest.h>

#include <cmath>
#include <random>

#include <omp.h>

#include "horncode/contact.hpp"
#include "horncode/error.hpp"
#include "horncode/kernels.hpp"

using namespace horncode;

namespace {

// Closed-form annulus distance between the x-axis and y = x^(1/2): the minimum
// sits at the innermost point of the graph, paired with (r/K, 0).
double oracle_sqrt_graph(double K, double r) {
  double R = r / K;
  double x = -0.5 + std::sqrt(0.25 + R * R);
  return std::sqrt((R - x) * (R - x) + x);
}

// x-axis against y = 1/x: the minimum is at the outermost point of the graph.
double oracle_inverse_graph(double K, double r) {
  double S = K * r;
  double x = std::sqrt((S * S + std::sqrt(S * S * S * S - 4.0)) / 2.0);
  return 1.0 / x;
}

bool rounds_to(const ContactEstimate& e, Rational expected) {
  return e.rounded && std::holds_alternative<Rational>(*e.rounded) &&
         std::get<Rational>(*e.rounded) == expected;
}

}  // namespace

TEST_CASE("curve parser reads Puiseux coordinates") {
  auto axis = parse_curve("t; 0");
  CHECK(axis.dim() == 2);
  CHECK(axis.t0() == 1.0);
  CHECK(axis(5.0) == std::vector<double>{5.0, 0.0});

  auto graph = parse_curve("t; t^(1/2)");
  CHECK(graph.coords()[1].leading().exponent == Rational(1, 2));
  CHECK(graph(4.0)[1] == doctest::Approx(2.0));

  auto mixed = parse_curve("-2*t^( -1 / 3 ) + 3t - 1.5 ; 4 ; 0.5t^(2) @ 2");
  CHECK(mixed.dim() == 3);
  CHECK(mixed.t0() == 2.0);
  CHECK(mixed(8.0)[0] == doctest::Approx(-2.0 * 0.5 + 24.0 - 1.5));
  CHECK(mixed(8.0)[2] == doctest::Approx(32.0));

  auto neg = parse_curve("-t; 0");
  CHECK(neg(3.0)[0] == -3.0);
}

TEST_CASE("curve parser reports error columns") {
  auto column = [](const char* text) -> std::size_t {
    try {
      (void)parse_curve(text);
    } catch (const ParseError& e) {
      return e.column();
    }
    return 0;
  };
  CHECK(column("t; t^") == 6);
  CHECK(column("t") == 2);
  CHECK(column("t; t^(1/)") == 9);
  CHECK(column("t; 2*") == 6);
  CHECK(column("t; 0 x") == 6);
  CHECK(column("t; 0 @ 0") == 8);
}

TEST_CASE("bounded curves are rejected") {
  try {
    (void)parse_curve("1; t^(-1)");
    FAIL("expected UnboundedCheckFailed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnboundedCheckFailed);
  }
}

TEST_CASE("parallel and serial closest-pair kernels agree exactly") {
  std::mt19937_64 rng(0x5EED);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (std::size_t dim : {2u, 3u, 7u}) {
    std::vector<double> a(300 * dim), b(211 * dim);
    for (auto& x : a) x = d(rng);
    for (auto& x : b) x = d(rng);
    b[5 * dim] = a[17 * dim];  // force nothing special, just shared coordinates
    PairMin p = min_pair_distance(a, b, dim);
    PairMin s = serial::min_pair_distance(a, b, dim);
    CHECK(p.distance == s.distance);
    CHECK(p.i == s.i);
    CHECK(p.j == s.j);
  }
}

TEST_CASE("annulus distance on closed-form configurations") {
  auto axis = parse_curve("t;0");
  CHECK(annulus_distance(axis, parse_curve("t;1"), 3.0, 100.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(annulus_distance(axis, axis, 3.0, 100.0) == 0.0);

  auto sqrt_graph = parse_curve("t;t^(1/2)");
  auto inv_graph = parse_curve("t;t^(-1)");
  for (double K : {2.0, 3.0, 4.0}) {
    for (double r : {10.0, 320.0, 20480.0}) {
      CAPTURE(K);
      CAPTURE(r);
      CHECK(annulus_distance(axis, sqrt_graph, K, r) ==
            doctest::Approx(oracle_sqrt_graph(K, r)).epsilon(1e-3));
      CHECK(annulus_distance(axis, inv_graph, K, r) ==
            doctest::Approx(oracle_inverse_graph(K, r)).epsilon(1e-3));
    }
  }
}

TEST_CASE("annulus distance is exactly symmetric") {
  const char* curves[] = {"t;0", "t;t^(1/2)", "t;t", "t;1", "t; 2t^(1/3) - t^(-1)", "-t;0"};
  for (const char* x : curves) {
    for (const char* y : curves) {
      auto a = parse_curve(x), b = parse_curve(y);
      CHECK(annulus_distance(a, b, 3.0, 250.0) == annulus_distance(b, a, 3.0, 250.0));
    }
  }
}

TEST_CASE("empty annulus is reported") {
  try {
    (void)annulus_distance(parse_curve("t;0 @ 1e6"), parse_curve("t;1"), 2.0, 10.0);
    FAIL("expected EmptyAnnulus");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyAnnulus);
  }
}

TEST_CASE("contact exponents of graph arcs") {
  auto axis = parse_curve("t;0");
  CHECK(rounds_to(estimate_contact(axis, parse_curve("t;t^(1/2)")), Rational(1, 2)));
  CHECK(rounds_to(estimate_contact(axis, parse_curve("t;t")), Rational(1)));
  CHECK(rounds_to(estimate_contact(axis, parse_curve("t;t^(-1)")), Rational(-1)));

  auto same = estimate_contact(axis, parse_curve("t;0"));
  REQUIRE(same.rounded.has_value());
  CHECK(std::holds_alternative<NegInfinity>(*same.rounded));
  CHECK(std::isinf(same.slope));

  ContactOptions small;
  small.radii = {10, 20, 40, 80, 160, 320};
  try {
    (void)estimate_contact(axis, parse_curve("t;1"), small);
    FAIL("expected GridTooSmall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridTooSmall);
  }
}

TEST_CASE("contact is independent of K and of an ambient rotation") {
  const double c = std::cos(0.7), s = std::sin(0.7);
  const std::vector<double> rot{c, -s, s, c};
  auto axis = parse_curve("t;0");
  for (const char* other : {"t;t^(1/2)", "t;t", "t;1", "t;t^(-1/2)", "t;t^(-1)", "t; t^(2/3) + 5"}) {
    CAPTURE(other);
    auto g = parse_curve(other);
    auto est = estimate_contact(axis, g);
    CHECK(std::abs(est.per_K.at(2.0) - est.per_K.at(4.0)) <= 0.05);
    auto rotated = estimate_contact(axis.transformed(rot), g.transformed(rot));
    CHECK(std::abs(rotated.slope - est.slope) <= 0.02);
  }
}

TEST_CASE("limit directions and the transverse-contact rule") {
  auto axis = parse_curve("t;0");
  CHECK(cones_differ(axis, parse_curve("t;t")));
  CHECK_FALSE(cones_differ(axis, parse_curve("t;t^(1/2)")));
  CHECK(cones_differ(axis, parse_curve("-t;0")));

  for (const char* other : {"t;t", "t;t^(1/2)", "t;1", "t;t^(-1)", "t;2t", "t;-t^(1/3)", "t;t^(5/6)"}) {
    CAPTURE(other);
    auto g = parse_curve(other);
    auto est = estimate_contact(axis, g);
    CHECK(rounds_to(est, Rational(1)) == cones_differ(axis, g));
  }
}

TEST_CASE("contact estimates do not depend on the thread count") {
  const auto a = parse_curve("t;0"), b = parse_curve("t;t^(1/3)");
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = estimate_contact(a, b);
  omp_set_num_threads(4);
  const auto four = estimate_contact(a, b);
  omp_set_num_threads(saved);
  CHECK(one.slope == four.slope);
  CHECK(one.per_K == four.per_K);
  CHECK(one.residual == four.residual);
}
