#include "horncode/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "horncode/code_model.hpp"
#include "horncode/contact.hpp"
#include "horncode/error.hpp"
#include "horncode/geometry.hpp"
#include "horncode/normal_forms.hpp"
#include "horncode/strata.hpp"
#include "horncode/surfaces.hpp"

namespace horncode {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<double> dyadic(int from, int to) {
  std::vector<double> out;
  const int step = from <= to ? 1 : -1;
  for (int k = from; k != to + step; k += step) out.push_back(std::ldexp(1.0, k));
  return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string contact_text(const ContactEstimate& e) {
  if (!e.rounded) return "unrounded " + fixed4(e.slope);
  if (std::holds_alternative<NegInfinity>(*e.rounded)) return "NEG_INFINITY";
  return std::get<Rational>(*e.rounded).str();
}

const std::vector<Rational>& contact_betas() {
  static const std::vector<Rational> b{Rational(1), Rational(1, 2), Rational(0), Rational(-1, 2), Rational(-1)};
  return b;
}

std::vector<ContactEstimate> contact_suite() {
  const auto axis = parse_curve("t;0");
  std::vector<ContactEstimate> out;
  for (const auto& b : contact_betas()) out.push_back(estimate_contact(axis, parse_curve("t;t^(" + b.str() + ")")));
  return out;
}

CheckResult c01_contact(const SuiteOptions&) {
  const auto t0 = Clock::now();
  const auto est = contact_suite();
  const double secs = since(t0);
  bool ok = secs < 10.0;
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const auto& e = est[i];
    const bool hit = e.rounded && std::holds_alternative<Rational>(*e.rounded) &&
                     std::get<Rational>(*e.rounded) == contact_betas()[i] && e.residual <= 0.05;
    ok = ok && hit;
    parts.push_back(contact_text(e) + " (res " + fixed4(e.residual) + ")");
  }
  return {"contact recovery", join(parts), "1, 1/2, 0, -1/2, -1 with residual <= 0.05 in < 10 s", 0.05, ok};
}

CheckResult c02_k_independence(const SuiteOptions&) {
  const auto est = contact_suite();
  double worst = 0.0;
  for (const auto& e : est) worst = std::max(worst, std::abs(e.per_K.at(2.0) - e.per_K.at(4.0)));
  return {"K-independence", "max |slope(K=2) - slope(K=4)| = " + fixed4(worst), "<= 0.05", 0.05, worst <= 0.05};
}

CheckResult c03_coincidence(const SuiteOptions&) {
  std::vector<std::string> parts;
  bool ok = true;
  for (const char* text : {"t;0", "t;t^(1/2)", "t;t^(-1)", "t^(3/2);t;2"}) {
    const auto c = parse_curve(text);
    const auto e = estimate_contact(c, c);
    const bool neg = e.rounded && std::holds_alternative<NegInfinity>(*e.rounded);
    ok = ok && neg;
    parts.push_back(std::string(text) + " -> " + contact_text(e));
  }
  return {"coincidence convention", join(parts), "NEG_INFINITY for identical curves", 0.0, ok};
}

CheckResult c04_gluing(const SuiteOptions& opts) {
  Rng rng(opts.seed);
  std::uniform_int_distribution<int> len(1, 8), num(-12, 12), den(1, 6);
  auto random_list = [&] {
    std::vector<Rational> v(static_cast<std::size_t>(len(rng)));
    for (auto& x : v) x = std::min(Rational(num(rng), den(rng)), Rational(1));
    return v;
  };
  int failures = 0;
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    const auto a = random_list(), b = random_list(), c = random_list();
    auto shuffled = a;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    auto bc = b;
    bc.insert(bc.end(), c.begin(), c.end());
    const std::vector<Rational> left{glue_strips(ab), glue_strips(c)};
    const std::vector<Rational> right{glue_strips(a), glue_strips(bc)};
    auto doubled = a;
    doubled.insert(doubled.end(), a.begin(), a.end());
    const bool ok = glue_strips(shuffled) == glue_strips(a) && glue_strips(left) == glue_strips(right) &&
                    glue_strips(doubled) == glue_strips(a);
    failures += !ok;
  }
  return {"gluing algebra", std::to_string(trials - failures) + "/" + std::to_string(trials) + " lists exact",
          "order-independent, associative, idempotent", 0.0, failures == 0};
}

CheckResult c05_corpus(const SuiteOptions& opts) {
  const auto entries = corpus_entry_checks(opts.data_dir);
  int good = 0;
  for (const auto& e : entries) good += e.pass;
  bool cayley_ok = false;
  std::string cayley = "missing";
  try {
    const auto code = code_from_strata(strata_from_json(load_json(opts.data_dir / "strata" / "i_cayley_surface.json")));
    std::size_t shared = 0;
    for (const auto& label : code.singular_labels) shared += sheet_count(code, label) == 2;
    cayley_ok = code.components.size() == 5 && code.singular_labels.size() == 4 && shared == 4;
    cayley = std::to_string(code.components.size()) + " components, " + std::to_string(shared) + " shared labels";
  } catch (const Error& e) {
    cayley = e.what();
  }
  const bool ok = good == 9 && entries.size() == 9 && cayley_ok;
  return {"example corpus", std::to_string(good) + "/" + std::to_string(entries.size()) + " codes exact; Cayley " + cayley,
          "9/9; Cayley 5 components, 4 shared labels", 0.0, ok};
}

CheckResult c06_equivalence(const SuiteOptions& opts) {
  Rng rng(opts.seed);
  std::vector<InnerLipschitzCode> codes;
  for (int i = 0; i < 100; ++i) {
    if (i % 2 == 1 && !codes.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, codes.size() - 1);
      codes.push_back(shuffle_code(codes[pick(rng)], rng));
    } else {
      codes.push_back(random_code(rng, 3, 2));
    }
  }
  const std::size_t n = codes.size();
  std::vector<std::string> canon(n);
  for (std::size_t i = 0; i < n; ++i) canon[i] = serialize(canonicalize(codes[i]));
  std::vector<std::vector<char>> eq(n, std::vector<char>(n));
  int broken = 0;
  std::size_t pairs = 0, equivalent = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      eq[i][j] = code_equiv(codes[i], codes[j]).has_value();
      ++pairs;
      equivalent += eq[i][j] && i != j;
      broken += (eq[i][j] != 0) != (canon[i] == canon[j]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    broken += !eq[i][i];
    for (std::size_t j = 0; j < n; ++j) {
      broken += eq[i][j] != eq[j][i];
      for (std::size_t k = 0; k < n; ++k) broken += eq[i][j] && eq[j][k] && !eq[i][k];
    }
    const auto moved = shuffle_code(codes[i], rng);
    broken += !code_equiv(codes[i], moved).has_value() || serialize(canonicalize(moved)) != canon[i];
  }
  const auto torus = code_from_json(load_json(opts.data_dir / "codes" / "f_torus.json"));
  const auto klein = code_from_json(load_json(opts.data_dir / "codes" / "g_klein_bottle.json"));
  const bool torus_klein = !code_equiv(torus, klein).has_value();
  auto edge = code_from_json(load_json(opts.data_dir / "codes" / "h_edge_of_two_spheres.json"));
  auto swapped = edge;
  std::swap(swapped.components[0], swapped.components[1]);
  const auto witness = code_equiv(edge, swapped);
  const bool edge_ok = witness.has_value();
  const bool ok = broken == 0 && torus_klein && edge_ok && equivalent > 0;
  return {"equivalence laws",
          std::to_string(broken) + " violations over " + std::to_string(pairs) + " pairs (" +
              std::to_string(equivalent) + " equivalent); torus vs Klein " +
              (torus_klein ? "distinct" : "EQUIVALENT") + "; sphere swap " + (edge_ok ? "equivalent" : "distinct"),
          "0 violations; torus != Klein; swap equivalent", 0.0, ok};
}

CheckResult c07_horns(const SuiteOptions&) {
  const std::vector<double> apex{0.0, 0.0, 0.0};
  bool ok = true;
  std::vector<std::string> parts;
  for (const auto& beta : {Rational(1), Rational(3, 2), Rational(2)}) {
    const auto t0 = Clock::now();
    const auto g = growth_exponent(generate_surface(SurfaceFamily::Horn, {beta}), apex, dyadic(-1, -10));
    const bool hit = std::abs(g.slope - beta.to_double()) <= 0.1 && since(t0) < 30.0;
    ok = ok && hit;
    parts.push_back(beta.str() + " -> " + fixed4(g.slope));
  }
  return {"horn exponents", join(parts), "within 0.1 at 200x200, < 30 s each", 0.1, ok};
}

CheckResult c08_tubes(const SuiteOptions& opts) {
  const std::vector<double> origin{0.0, 0.0, 0.0};
  bool ok = true;
  std::vector<std::string> parts;
  for (const auto& beta : {Rational(1), Rational(1, 2), Rational(0)}) {
    const auto g = growth_exponent(make_tube(beta, 1.0, 512.0, 200, 128), origin, dyadic(2, 8));
    ok = ok && std::abs(g.slope - beta.to_double()) <= 0.1;
    parts.push_back(beta.str() + " -> " + fixed4(g.slope));
  }
  const auto cyl = growth_exponent(make_cylinder(512.0, 256, 256), origin, dyadic(2, 8));
  ok = ok && std::abs(cyl.slope) <= 0.1;
  parts.push_back("cylinder -> " + fixed4(cyl.slope));
  const auto par = growth_exponent(make_paraboloid(1e4, 200, 128), origin, dyadic(3, 12));
  const auto paraboloid = code_from_json(load_json(opts.data_dir / "codes" / "e_paraboloid.json"));
  const bool matches = par.rounded && paraboloid.components.size() == 1 &&
                       paraboloid.components[0].ends == BetaVector{*par.rounded};
  ok = ok && std::abs(par.slope - 0.5) <= 0.1 && matches;
  parts.push_back("paraboloid -> " + fixed4(par.slope) + (matches ? " (matches code)" : " (code mismatch)"));
  return {"tube exponents", join(parts), "1, 1/2, 0; cylinder 0; paraboloid 1/2", 0.1, ok};
}

CheckResult c09_lne(const SuiteOptions& opts) {
  const auto half = lne_constant(make_strip(Rational(1, 2), 1.0, 100.0, 16, 2000), 10000, opts.seed);
  const auto cusp = lne_constant(make_strip(Rational(-1), 1.0, 1000.0, 8, 300), 10000, opts.seed);
  const bool ok = half.constant <= 1.05 && cusp.constant <= 2.05 && half.pairs >= 10000 && cusp.pairs >= 10000;
  return {"LNE bounds",
          "T_1/2 " + fixed4(half.constant) + " over " + std::to_string(half.pairs) + " pairs; T_-1 " +
              fixed4(cusp.constant) + " over " + std::to_string(cusp.pairs) + " pairs",
          "T_1/2 <= 1.05, T_-1 <= 2.05, >= 10000 pairs", 0.0, ok};
}

CheckResult c10_inner_distance(const SuiteOptions& opts) {
  const Mesh cyl = make_cylinder(2.0, 256, 256);
  const std::uint32_t p = 128 * 256, q = p + 128;
  const double d = inner_distance(cyl, p, q);
  const double rel = std::abs(d / std::numbers::pi - 1.0);

  const Mesh torus = make_torus(2.0, 1.0, 48, 24);
  InnerMetric metric(torus);
  Rng rng(opts.seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(torus.vertex_count() - 1));
  std::vector<std::uint32_t> pool(40);
  for (auto& v : pool) v = pick(rng);
  std::vector<std::vector<double>> rows;
  for (auto v : pool) rows.push_back(metric.from(v));
  std::uniform_int_distribution<std::size_t> idx(0, pool.size() - 1);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = idx(rng), b = idx(rng), c = idx(rng);
    const double ab = rows[a][pool[b]], ba = rows[b][pool[a]], bc = rows[b][pool[c]], ac = rows[a][pool[c]];
    violations += ab != ba;
    violations += ac > ab + bc;
    violations += (ab == 0.0) != (pool[a] == pool[b]);
  }
  const bool ok = rel <= 0.05 && violations == 0;
  return {"inner-distance sanity",
          "antipodal " + fixed4(d) + " (" + fixed4(100.0 * rel) + "% from pi); " + std::to_string(violations) +
              " axiom violations on 1000 triples",
          "within 5% of pi; 0 violations", 0.05, ok};
}

std::string topo_text(const MeshTopology& t) {
  return "(" + std::to_string(t.theta) + "," + std::to_string(t.genus) + "," + std::to_string(t.boundary_components) +
         ")";
}

CheckResult c11_topology(const SuiteOptions&) {
  const auto torus = mesh_topology(generate_surface(SurfaceFamily::Torus));
  const auto sphere = mesh_topology(generate_surface(SurfaceFamily::Sphere));
  const auto mob = mesh_topology(generate_surface(SurfaceFamily::MoebiusBand));
  const bool ok = torus.theta == 1 && torus.genus == 1 && torus.boundary_components == 0 && sphere.theta == 1 &&
                  sphere.genus == 0 && sphere.boundary_components == 0 && mob.theta == -1 &&
                  mob.boundary_components == 1;
  return {"topology extraction",
          "torus " + topo_text(torus) + ", sphere " + topo_text(sphere) + ", Moebius " + topo_text(mob),
          "torus (1,1,0), sphere (1,0,0), Moebius theta -1 with 1 boundary", 0.0, ok};
}

CheckResult c12_normal_forms(const SuiteOptions&) {
  const auto t0 = Clock::now();
  bool ok = true;
  std::vector<std::string> parts;
  const std::vector<NormalFormSpec> specs{make_normal_form_spec(1, 0, {Rational(1)}),
                                          make_normal_form_spec(1, 1, {Rational(1)}),
                                          make_normal_form_spec(1, 0, {Rational(1, 2), Rational(1)})};
  for (const auto& spec : specs) {
    const auto r = verify_normal_form(spec);
    ok = ok && r.passed;
    std::vector<std::string> ends;
    for (const auto& e : r.ends) ends.push_back(fixed4(e.slope));
    parts.push_back("(" + std::to_string(spec.theta) + "," + std::to_string(spec.genus) + ") ends [" +
                    join(ends, " ") + "] " + (r.passed ? "pass" : "fail"));
  }
  ok = ok && since(t0) < 120.0;
  return {"normal forms", join(parts, "; "), "(1,0,[1]), (1,1,[1]), (1,0,[1/2,1]) verify in < 2 min", 0.1, ok};
}

CheckResult c13_curves(const SuiteOptions&) {
  const auto cubic = curve_code({{1, 3}}, {});
  const auto expected = make_code({make_component_code(1, 1, {Rational(1), Rational(1), Rational(1)})});
  const auto node = curve_code({{0, 1}, {0, 1}}, {{"p", {{0, 1}, {1, 1}}}});
  const std::size_t ell = sheet_count(node, "p");
  const bool ok = cubic == expected && ell == 2;
  return {"complex-curve codes", "cubic " + serialize(cubic) + "; node sheets at p = " + std::to_string(ell),
          serialize(expected) + "; 2 sheets", 0.0, ok};
}

CheckResult c14_cone(const SuiteOptions&) {
  const auto cone = cone_directions(make_tube(Rational(1), 1.0, 1000.0, 200, 128), 10.0);
  const auto half = cone_directions(make_tube(Rational(1, 2), 1.0, 1e6, 200, 128), 1e4);
  const bool ok = cone.verdict == "dim 2" && half.verdict == "dim < 2";
  return {"cone dimension",
          "beta 1: " + cone.verdict + " (ratio " + fixed4(cone.ratio) + "); beta 1/2: " + half.verdict + " (ratio " +
              fixed4(half.ratio) + ")",
          "dim 2; dim < 2", 0.0, ok};
}

}  // namespace

const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> all{
      {1, "contact recovery", c01_contact},        {2, "K-independence", c02_k_independence},
      {3, "coincidence convention", c03_coincidence}, {4, "gluing algebra", c04_gluing},
      {5, "example corpus", c05_corpus},             {6, "equivalence laws", c06_equivalence},
      {7, "horn exponents", c07_horns},            {8, "tube exponents", c08_tubes},
      {9, "LNE bounds", c09_lne},                  {10, "inner-distance sanity", c10_inner_distance},
      {11, "topology extraction", c11_topology},   {12, "normal forms", c12_normal_forms},
      {13, "complex-curve codes", c13_curves},     {14, "cone dimension", c14_cone},
  };
  return all;
}

CriterionOutcome run_criterion(const Criterion& c, const SuiteOptions& opts) {
  CriterionOutcome out;
  out.id = c.id;
  const auto t0 = Clock::now();
  try {
    out.check = c.run(opts);
  } catch (const std::exception& e) {
    out.check = {c.name, e.what(), "", 0.0, false};
  }
  out.seconds = since(t0);
  char id[8];
  std::snprintf(id, sizeof id, "%02d", c.id);
  out.check.name = std::string(id) + " " + out.check.name;
  return out;
}

std::vector<CriterionOutcome> run_acceptance(const SuiteOptions& opts) {
  std::vector<CriterionOutcome> out;
  for (const auto& c : acceptance_criteria()) out.push_back(run_criterion(c, opts));
  return out;
}

std::vector<CheckResult> corpus_entry_checks(const std::filesystem::path& data_dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(data_dir / "strata")) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<CheckResult> out;
  for (const auto& path : files) {
    const auto name = path.stem().string();
    try {
      const auto got = code_from_strata(strata_from_json(load_json(path)));
      const auto expected = code_from_json(load_json(data_dir / "codes" / path.filename()));
      out.push_back({"example " + name, serialize(got), serialize(expected), 0.0, got == expected});
    } catch (const std::exception& e) {
      out.push_back({"example " + name, e.what(), "reference code", 0.0, false});
    }
  }
  return out;
}

}  // namespace horncode
