#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "horncode/cli.hpp"
#include "horncode/code_model.hpp"

using namespace horncode;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  RunReport report;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  auto r = run_command(args, out, err);
  return {r.exit_code, out.str(), err.str(), r.report};
}

const std::string kData = HORNCODE_DATA_DIR;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "horncode_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("equiv separates torus and Klein bottle") {
  const auto r = run({"equiv", kData + "/strata/f_torus.json", kData + "/strata/g_klein_bottle.json"});
  CHECK(r.code == 1);
  CHECK(r.out == "NOT EQUIVALENT\n");
  CHECK(r.report.inputs.size() == 2);
}

TEST_CASE("equiv of a file with itself gives the identity witness") {
  const auto path = kData + "/codes/i_cayley_surface.json";
  const auto r = run({"equiv", path, path});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto bij = j.at("component_bijection").get<std::vector<std::size_t>>();
  for (std::size_t i = 0; i < bij.size(); ++i) CHECK(bij[i] == i);
  for (const auto& [from, to] : j.at("point_bijection").items()) CHECK(from == to.get<std::string>());
}

TEST_CASE("code prints the canonical code of a strata file") {
  const auto r = run({"code", kData + "/strata/h_edge_of_two_spheres.json"});
  REQUIRE(r.code == 0);
  std::ifstream in(kData + "/codes/h_edge_of_two_spheres.json");
  const auto expected = canonicalize(code_from_json(nlohmann::json::parse(in)));
  CHECK(code_from_json(nlohmann::json::parse(r.out)) == expected);
}

TEST_CASE("contact rounds the square-root arc to 1/2") {
  const auto r = run({"contact", "t;0", "t;t^(1/2)"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("rounded") == "1/2");
  CHECK(j.at("per_K").size() == 3);

  const auto custom = run({"contact", "t;0", "t;t^(1/2)", "--K", "2,4", "--grid", "10:2:12"});
  REQUIRE(custom.code == 0);
  const auto k = nlohmann::json::parse(custom.out).at("per_K");
  CHECK(k.size() == 2);
  CHECK(k.contains("2"));
  CHECK(k.contains("4"));

  const auto same = run({"contact", "t;t", "t;t"});
  CHECK(nlohmann::json::parse(same.out).at("rounded") == "NEG_INFINITY");
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"equiv", "only-one.json"}).code == 2);
  CHECK(run({"estimate", "--mesh", "m.off", "--mode", "sideways", "--radii", "1:2:6"}).code == 2);
  CHECK(run({"--seed", "banana", "contact", "t;0", "t;1"}).code == 2);
  CHECK(run({"normal-form", "--theta", "0"}).code == 2);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("normal-form") != std::string::npos);
}

TEST_CASE("input errors exit 3 with their location") {
  const auto missing = run({"code", "no/such/file.json"});
  CHECK(missing.code == 3);
  CHECK(missing.err.find("no/such/file.json") != std::string::npos);

  const auto bad = scratch("bad.json");
  std::ofstream(bad) << "{\"theta\": 1,\n  \"genus\": }\n";
  const auto parse = run({"code", bad.string()});
  CHECK(parse.code == 3);
  CHECK(parse.err.find("bad.json:2") != std::string::npos);
  CHECK(parse.err.find("column 12") != std::string::npos);

  const auto curve = run({"contact", "t;0", "t;t^(1/"});
  CHECK(curve.code == 3);
  CHECK(curve.err.find("curveB") != std::string::npos);
  CHECK(curve.err.find("column 8") != std::string::npos);

  const auto invalid = scratch("invalid_code.json");
  std::ofstream(invalid) << R"({"components":[{"theta":2,"genus":0,"ends":[],"attachments":{}}],"singular_labels":[]})";
  CHECK(run({"code", invalid.string()}).code == 3);
  CHECK(run({"normal-form", "--theta", "1", "--beta", "3/2"}).code == 3);
}

TEST_CASE("generate then estimate recovers the horn exponent") {
  const auto mesh = scratch("horn.off").string();
  const auto g = run({"generate", "horn", "--beta", "2", "--out", mesh});
  REQUIRE(g.code == 0);
  CHECK(nlohmann::json::parse(g.out).at("triangles") == 79800);
  const auto e = run({"estimate", "--mesh", mesh, "--at", "0", "--mode", "horn", "--radii", "0.5:0.5:10"});
  REQUIRE(e.code == 0);
  const auto j = nlohmann::json::parse(e.out);
  CHECK(j.at("rounded") == "2");
  CHECK(j.at("radii").size() == 10);
  CHECK(e.report.inputs.count(mesh) == 1);

  const auto at_coords = run({"estimate", "--mesh", mesh, "--at", "0,0,0", "--mode", "horn", "--radii", "0.5:0.5:10"});
  CHECK(at_coords.out == e.out);
  CHECK(run({"estimate", "--mesh", mesh, "--mode", "horn", "--radii", "0.5:0.5:10"}).code == 3);
}

TEST_CASE("normal-form writes mesh, marks and code") {
  const auto mesh = scratch("nf.off").string(), code = scratch("nf.json").string();
  const auto r = run({"normal-form", "--theta", "1", "--genus", "1", "--beta", "1", "--out", mesh, "--code", code});
  CHECK(r.code == 0);
  CHECK(fs::exists(mesh));
  CHECK(fs::exists(mesh + ".marks.json"));
  std::ifstream in(code);
  CHECK(code_from_json(nlohmann::json::parse(in)) == make_code({make_component_code(1, 1, {Rational(1)})}));
  const auto ls = lines(r.out);
  CHECK(ls.back() == R"({"checks":6,"failed":0,"passed":6})");
}

TEST_CASE("HORNCODE_THREADS must be a positive integer") {
  setenv("HORNCODE_THREADS", "zero", 1);
  CHECK(run({"contact", "t;0", "t;1"}).code == 2);
  setenv("HORNCODE_THREADS", "1", 1);
  CHECK(run({"contact", "t;0", "t;1"}).code == 0);
  unsetenv("HORNCODE_THREADS");
}

TEST_CASE("corpus passes, lists every check once and is byte-stable") {
  const auto report = scratch("corpus.jsonl").string();
  const auto a = run({"--report", report, "corpus"});
  CHECK(a.code == 0);
  const auto ls = lines(a.out);
  REQUIRE(ls.size() == 1 + 9 + 14 + 1);
  std::set<std::string> names;
  for (std::size_t i = 1; i + 1 < ls.size(); ++i) {
    const auto j = nlohmann::json::parse(ls[i]);
    CHECK(j.at("pass") == true);
    names.insert(j.at("name").get<std::string>());
  }
  CHECK(names.size() == 23);
  CHECK(ls.back() == R"({"checks":23,"failed":0,"passed":23})");
  std::ifstream in(report);
  const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(written == a.out);

  const auto b = run({"--report", report, "corpus"});
  CHECK(b.out == a.out);
}

TEST_CASE("corpus fails when a reference code is wrong") {
  const auto dir = scratch("broken_data");
  fs::remove_all(dir);
  fs::copy(kData, dir, fs::copy_options::recursive);
  std::ofstream(dir / "codes" / "f_torus.json") << R"({"components":[{"theta":1,"genus":2,"ends":[],"attachments":{}}],"singular_labels":[]})";
  const auto r = run({"corpus", "--data", dir.string(), "--format", "human"});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL example f_torus") != std::string::npos);
  CHECK(r.out.find("FAIL 05 example corpus") != std::string::npos);
  CHECK(r.out.find("22/23 checks passed") == std::string::npos);
  CHECK(r.out.find("21/23 checks passed") != std::string::npos);
}
