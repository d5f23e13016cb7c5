#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "horncode/code_model.hpp"
#include "horncode/error.hpp"
#include "horncode/random_codes.hpp"

using namespace horncode;

namespace {

Rational q(std::int64_t p, std::int64_t d = 1) { return Rational(p, d); }

InnerLipschitzCode torus() { return make_code({make_component_code(1, 1, {})}); }
InnerLipschitzCode klein() { return make_code({make_component_code(-1, 1, {})}); }

InnerLipschitzCode edge_of_spheres(const std::string& label = "o") {
  return make_code({make_component_code(1, 0, {}, {{label, {q(1)}}}),
                    make_component_code(1, 0, {}, {{label, {q(1)}}})});
}

std::vector<ComponentCode> cayley_components() {
  std::vector<ComponentCode> comps;
  for (int i = 1; i <= 4; ++i) {
    comps.push_back(make_component_code(1, 0, {q(1)}, {{"p" + std::to_string(i), {q(1)}}}));
  }
  comps.push_back(make_component_code(
      1, 0, {}, {{"p1", {q(1)}}, {"p2", {q(1)}}, {"p3", {q(1)}}, {"p4", {q(1)}}}));
  return comps;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("make_component_code sorts and enforces exponent ranges") {
  auto paraboloid = make_component_code(1, 0, {q(1, 2)});
  CHECK(paraboloid.ends == BetaVector{q(1, 2)});
  CHECK(paraboloid.attachments.empty());

  auto t = make_component_code(1, 1, {});
  CHECK(t.genus == 1);
  CHECK(t.ends.empty());

  auto two_ends = make_component_code(1, 0, {q(1), q(1, 3)});
  CHECK(two_ends.ends == BetaVector{q(1, 3), q(1)});

  CHECK(kind_of([] { make_component_code(1, 0, {q(3, 2)}); }) == ErrorKind::OutOfRangeExponent);
  CHECK(kind_of([] { make_component_code(1, 0, {}, {{"p", {q(1, 2)}}}); }) ==
        ErrorKind::OutOfRangeExponent);
  CHECK(kind_of([] { make_component_code(0, 0, {}); }) == ErrorKind::InvalidCode);
}

TEST_CASE("validate rejects dangling and unused labels") {
  InnerLipschitzCode c = torus();
  c.singular_labels.insert("ghost");
  CHECK(kind_of([&] { validate(c); }) == ErrorKind::InvalidCode);

  InnerLipschitzCode d = edge_of_spheres();
  d.singular_labels.clear();
  CHECK(kind_of([&] { validate(d); }) == ErrorKind::InvalidCode);

  InnerLipschitzCode empty;
  CHECK(kind_of([&] { validate(empty); }) == ErrorKind::InvalidCode);
}

TEST_CASE("torus and Klein bottle are not equivalent") {
  CHECK_FALSE(code_equiv(torus(), klein()).has_value());
  CHECK(code_equiv(torus(), torus()).has_value());
}

TEST_CASE("edge of two spheres is equivalent to its swapped and relabelled copy") {
  auto a = edge_of_spheres("origin");
  auto b = make_code({make_component_code(1, 0, {}, {{"x", {q(1)}}}),
                      make_component_code(1, 0, {}, {{"x", {q(1)}}})});
  std::swap(b.components[0], b.components[1]);
  auto w = code_equiv(a, b);
  REQUIRE(w.has_value());
  CHECK(w->point_bijection.at("origin") == "x");
  CHECK(apply_witness(normalize(a), *w) == normalize(b));
}

TEST_CASE("a code is equivalent to itself through the identity") {
  auto code = make_code(cayley_components());
  auto w = code_equiv(code, code);
  REQUIRE(w.has_value());
  std::vector<std::size_t> id(code.components.size());
  std::iota(id.begin(), id.end(), 0);
  CHECK(w->component_bijection == id);
  for (const auto& [from, to] : w->point_bijection) CHECK(from == to);
}

TEST_CASE("normalize removes only regular single-sheet points") {
  auto lone = make_code({make_component_code(1, 0, {q(1)}, {{"p", {q(1)}}})});
  auto n = normalize(lone);
  CHECK(n.singular_labels.empty());
  CHECK(n.components[0].attachments.empty());

  auto horn = make_code({make_component_code(1, 0, {q(1)}, {{"v", {q(3, 2)}}})});
  CHECK(normalize(horn) == horn);

  auto spheres = edge_of_spheres();
  CHECK(sheet_count(spheres, "o") == 2);
  CHECK(normalize(spheres) == spheres);

  // A single component with two regular sheets at one point is still singular.
  auto pinched = make_code({make_component_code(1, 0, {}, {{"p", {q(1), q(1)}}})});
  CHECK(normalize(pinched) == pinched);
}

TEST_CASE("normalize is idempotent and erases extra regular labels from the class") {
  Rng rng(kDefaultSeed);
  for (int i = 0; i < 100; ++i) {
    auto c = random_code(rng);
    auto once = normalize(c);
    CHECK(normalize(once) == once);

    // Adding a regular point to any component does not change the class.
    auto padded = c;
    padded.components[0].attachments["regular_extra"] = {q(1)};
    padded.singular_labels.insert("regular_extra");
    validate(padded);
    CHECK(code_equiv(padded, c).has_value());
  }
}

TEST_CASE("canonical form of the Cayley code is independent of component order") {
  auto comps = cayley_components();
  std::vector<std::size_t> perm(comps.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::string first;
  int count = 0;
  do {
    std::vector<ComponentCode> permuted;
    for (auto i : perm) permuted.push_back(comps[i]);
    std::string s = serialize(canonicalize(make_code(permuted)));
    if (first.empty()) first = s;
    CHECK(s == first);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(count == 120);
  // Hub component (no ends) sorts before the four one-ended components.
  auto canon = canonicalize(make_code(comps));
  CHECK(canon.components[0].ends.empty());
  CHECK(canon.components[0].attachments.size() == 4);
  CHECK(canon.singular_labels == std::set<std::string>{"s1", "s2", "s3", "s4"});
}

TEST_CASE("canonicalize renames labels of a single component") {
  auto c = make_code({make_component_code(1, 2, {q(0)}, {{"zeta", {q(2)}}, {"alpha", {q(3, 2), q(2)}}})});
  auto canon = canonicalize(c);
  CHECK(canon.singular_labels == std::set<std::string>{"s1", "s2"});
  CHECK(code_equiv(canon, c).has_value());
}

TEST_CASE("two identical components sharing a point canonicalize identically in every order") {
  auto a = make_component_code(1, 0, {q(1, 2)}, {{"p", {q(2)}}, {"r", {q(3, 2)}}});
  auto b = make_component_code(1, 0, {q(1, 2)}, {{"p", {q(2)}}, {"s", {q(3, 2)}}});
  auto c = make_component_code(-1, 1, {}, {{"r", {q(2)}}, {"s", {q(2)}}});
  std::vector<ComponentCode> comps{a, b, c};
  std::vector<std::size_t> perm{0, 1, 2};
  std::string first;
  do {
    std::vector<ComponentCode> permuted;
    for (auto i : perm) permuted.push_back(comps[i]);
    std::string s = serialize(canonicalize(make_code(permuted)));
    if (first.empty()) first = s;
    CHECK(s == first);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("equivalence laws on random codes") {
  Rng rng(kDefaultSeed);
  int equivalent_pairs = 0;
  for (int i = 0; i < 150; ++i) {
    auto a = random_code(rng, 3, 2);
    auto b = (i % 2 == 0) ? shuffle_code(a, rng) : random_code(rng, 3, 2);
    auto c = (i % 3 == 0) ? shuffle_code(b, rng) : random_code(rng, 3, 2);

    CHECK(code_equiv(a, a).has_value());
    auto ab = code_equiv(a, b);
    CHECK(ab.has_value() == code_equiv(b, a).has_value());
    if (ab && code_equiv(b, c)) CHECK(code_equiv(a, c).has_value());

    bool canon_equal = serialize(canonicalize(a)) == serialize(canonicalize(b));
    CHECK(canon_equal == ab.has_value());
    if (ab) {
      ++equivalent_pairs;
      CHECK(apply_witness(normalize(a), *ab) == normalize(b));
    }
  }
  CHECK(equivalent_pairs >= 75);
}

TEST_CASE("JSON round trip preserves the code") {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    auto c = random_code(rng);
    CHECK(code_from_json(to_json(c)) == c);
  }
  auto j = nlohmann::json::parse(
      R"({"components":[{"theta":1,"genus":0,"ends":["1/2"],"attachments":{}}],"singular_labels":[]})");
  CHECK(code_from_json(j) == make_code({make_component_code(1, 0, {q(1, 2)})}));
}

TEST_CASE("curve codes follow the one-tube one-horn recipe") {
  auto cubic = curve_code({{1, 3}}, {});
  CHECK(cubic == make_code({make_component_code(1, 1, {q(1), q(1), q(1)})}));

  auto node = curve_code({{0, 1}, {0, 1}}, {{"p", {{0, 1}, {1, 1}}}});
  REQUIRE(node.components.size() == 2);
  for (const auto& c : node.components) {
    CHECK(c == make_component_code(1, 0, {q(1)}, {{"p", {q(1)}}}));
  }
  CHECK(sheet_count(node, "p") == 2);

  auto line = curve_code({{0, 1}}, {});
  CHECK(line == make_code({make_component_code(1, 0, {q(1)})}));

  // A single smooth branch through a labelled point is regular and is dropped.
  auto smooth = curve_code({{0, 1}}, {{"p", {{0, 1}}}});
  CHECK(smooth.singular_labels.empty());

  CHECK(kind_of([] { curve_code({{0, 1}}, {{"p", {}}}); }) == ErrorKind::EmptyIncidence);
}
