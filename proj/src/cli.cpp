#include "horncode/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <boost/crc.hpp>

#include "horncode/checks.hpp"
#include "horncode/code_model.hpp"
#include "horncode/contact.hpp"
#include "horncode/error.hpp"
#include "horncode/geometry.hpp"
#include "horncode/kernels.hpp"
#include "horncode/mesh.hpp"
#include "horncode/normal_forms.hpp"
#include "horncode/strata.hpp"
#include "horncode/surfaces.hpp"

namespace horncode {

namespace {

std::string digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(crc.checksum()));
  return std::string("crc32:") + buf;
}

// Input failure annotated with the file or argument it came from.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
auto with_context(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw InputError(where + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(where + ": " + e.what());
  }
}

bool looks_like_code(const nlohmann::json& j) {
  if (j.contains("singular_labels")) return true;
  if (j.contains("components") && j["components"].is_array() && !j["components"].empty()) {
    return j["components"][0].contains("attachments");
  }
  return false;
}

// Accepts either a code file or a strata file.
InnerLipschitzCode load_code_any(const std::string& path, RunReport& report) {
  report.inputs[path] = digest(path);
  const auto j = load_json(path);  // errors already name the file
  return with_context(path, [&] { return looks_like_code(j) ? code_from_json(j) : code_from_strata(strata_from_json(j)); });
}

nlohmann::json number_or_text(double x) {
  if (std::isfinite(x)) return x;
  return x < 0 ? "-inf" : (x > 0 ? "inf" : "nan");
}

nlohmann::json contact_json(const ContactEstimate& e) {
  nlohmann::json j;
  j["slope"] = number_or_text(e.slope);
  if (!e.rounded) {
    j["rounded"] = nullptr;
  } else if (std::holds_alternative<NegInfinity>(*e.rounded)) {
    j["rounded"] = "NEG_INFINITY";
  } else {
    j["rounded"] = std::get<Rational>(*e.rounded).str();
  }
  j["residual"] = number_or_text(e.residual);
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [K, s] : e.per_K) per[format_double(K)] = number_or_text(s);
  j["per_K"] = per;
  return j;
}

nlohmann::json growth_json(const GrowthEstimate& g) {
  return {{"slope", number_or_text(g.slope)},
          {"rounded", g.rounded ? nlohmann::json(g.rounded->str()) : nlohmann::json(nullptr)},
          {"residual", number_or_text(g.residual)},
          {"radii", g.radii_used},
          {"lengths", g.lengths}};
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& s : split(text, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size()) throw Error(ErrorKind::BadParams, what + ": not a number: " + s);
    out.push_back(v);
  }
  return out;
}

BetaVector parse_betas(const std::string& text) {
  BetaVector out;
  for (const auto& s : split(text, ',')) out.push_back(with_context("--beta", [&] { return Rational::parse(s); }));
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot write " + path);
  os << text;
}

void save_mesh(const std::string& path, const Mesh& m) {
  save_off(path, m);
  if (!m.marks.empty()) write_text(path + ".marks.json", marks_to_json(m) + "\n");
}

int configure_threads(std::ostream& err) {
  try {
    apply_thread_cap_from_env();
  } catch (const Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace

std::string RunReport::json_lines() const {
  std::string out;
  nlohmann::json head{{"command", command}, {"inputs", inputs}};
  out += head.dump() + "\n";
  std::size_t passed = 0;
  for (const auto& c : checks) {
    out += to_json(c).dump() + "\n";
    passed += c.pass;
  }
  nlohmann::json tail{{"checks", checks.size()}, {"passed", passed}, {"failed", checks.size() - passed}};
  out += tail.dump() + "\n";
  return out;
}

std::string RunReport::human() const {
  std::string out = "command: " + command + "\n";
  for (const auto& [path, d] : inputs) out += "input: " + path + " " + d + "\n";
  std::size_t passed = 0;
  for (const auto& c : checks) {
    out += render_line(c) + "\n";
    passed += c.pass;
  }
  out += std::to_string(passed) + "/" + std::to_string(checks.size()) + " checks passed\n";
  return out;
}

RunResult run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  RunResult result;
  RunReport& report = result.report;
  for (std::size_t i = 0; i < argv.size(); ++i) report.command += (i ? " " : "") + argv[i];

  CLI::App app{"Inner-Lipschitz codes of semialgebraic surfaces"};
  app.name("horncode");
  app.require_subcommand(1);
  std::string seed_text = std::to_string(kDefaultSeed);
  std::string report_path;
  app.add_option("--seed", seed_text, "sampling seed (decimal or 0x-hex)");
  app.add_option("--report", report_path, "also write the JSON-lines run report here");

  auto* code_cmd = app.add_subcommand("code", "print the canonical code of a strata file");
  std::string strata_path;
  code_cmd->add_option("strata", strata_path, "strata JSON")->required();

  auto* equiv_cmd = app.add_subcommand("equiv", "decide equivalence of two codes or strata files");
  std::string a_path, b_path;
  equiv_cmd->add_option("a", a_path)->required();
  equiv_cmd->add_option("b", b_path)->required();

  auto* contact_cmd = app.add_subcommand("contact", "estimate the contact exponent of two arcs");
  std::string curve_a, curve_b, k_text, grid_text;
  contact_cmd->add_option("curveA", curve_a)->required();
  contact_cmd->add_option("curveB", curve_b)->required();
  contact_cmd->add_option("--K", k_text, "annulus factors, e.g. 2,3,4");
  contact_cmd->add_option("--grid", grid_text, "radii r0:factor:count");

  auto* estimate_cmd = app.add_subcommand("estimate", "growth exponent of link lengths on a mesh");
  std::string mesh_path, at_text, mode, radii_text;
  estimate_cmd->add_option("--mesh", mesh_path, "OFF mesh")->required();
  estimate_cmd->add_option("--at", at_text, "centre: vertex index or x,y,z");
  estimate_cmd->add_option("--mode", mode, "horn or tube")->required()->check(CLI::IsMember({"horn", "tube"}));
  estimate_cmd->add_option("--radii", radii_text, "r0:factor:count")->required();

  auto* nf_cmd = app.add_subcommand("normal-form", "build and verify a normal-form surface");
  int theta = 1, genus = 0;
  std::string beta_text, out_path, code_path;
  nf_cmd->add_option("--theta", theta)->required()->check(CLI::IsMember({1, -1}));
  nf_cmd->add_option("--genus", genus)->check(CLI::NonNegativeNumber);
  nf_cmd->add_option("--beta", beta_text, "comma-separated exponents <= 1");
  nf_cmd->add_option("--out", out_path, "write the mesh (OFF / nOFF)");
  nf_cmd->add_option("--code", code_path, "write the code JSON");

  auto* corpus_cmd = app.add_subcommand("corpus", "run the example corpus and the acceptance suite");
  std::string data_dir = HORNCODE_DATA_DIR, format = "json";
  corpus_cmd->add_option("--data", data_dir, "directory holding strata/ and codes/");
  corpus_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "human"}));

  auto* gen_cmd = app.add_subcommand("generate", "write a model surface mesh");
  std::string family_text, gen_beta = "1";
  SurfaceParams params;
  std::string gen_out;
  gen_cmd->add_option("family", family_text, "horn, tube, strip, cylinder, paraboloid, torus, genus_g, ...")
      ->required();
  gen_cmd->add_option("--beta", gen_beta);
  gen_cmd->add_option("--lo", params.lo);
  gen_cmd->add_option("--hi", params.hi);
  gen_cmd->add_option("--n-along", params.n_along);
  gen_cmd->add_option("--n-around", params.n_around);
  gen_cmd->add_option("--genus", params.genus);
  gen_cmd->add_option("--out", gen_out)->required();

  try {
    std::vector<std::string> rev(argv.rbegin(), argv.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    result.exit_code = kExitOk;
    return result;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    result.exit_code = kExitUsage;
    return result;
  }

  if (const int rc = configure_threads(err); rc != kExitOk) {
    result.exit_code = rc;
    return result;
  }
  std::uint64_t seed = kDefaultSeed;
  try {
    std::size_t used = 0;
    seed = std::stoull(seed_text, &used, 0);
    if (used != seed_text.size()) throw std::invalid_argument(seed_text);
  } catch (const std::exception&) {
    err << "usage error: --seed expects an unsigned integer, got '" << seed_text << "'\n";
    result.exit_code = kExitUsage;
    return result;
  }

  try {
    if (*code_cmd) {
      const auto code = load_code_any(strata_path, report);
      out << to_json(canonicalize(code)).dump() << "\n";
    } else if (*equiv_cmd) {
      const auto a = load_code_any(a_path, report);
      const auto b = load_code_any(b_path, report);
      const auto w = code_equiv(a, b);
      if (w) {
        nlohmann::json j{{"component_bijection", w->component_bijection}, {"point_bijection", w->point_bijection}};
        out << j.dump() << "\n";
      } else {
        out << "NOT EQUIVALENT\n";
      }
      report.checks.push_back({"equivalent", w ? "yes" : "no", "", 0.0, w.has_value()});
      result.exit_code = w ? kExitOk : kExitCheckFailed;
    } else if (*contact_cmd) {
      const auto c1 = with_context("curveA", [&] { return parse_curve(curve_a); });
      const auto c2 = with_context("curveB", [&] { return parse_curve(curve_b); });
      ContactOptions opts;
      if (!k_text.empty()) opts.Ks = parse_doubles(k_text, "--K");
      if (!grid_text.empty()) opts.radii = with_context("--grid", [&] { return parse_geometric_grid(grid_text); });
      out << contact_json(estimate_contact(c1, c2, opts)).dump() << "\n";
    } else if (*estimate_cmd) {
      report.inputs[mesh_path] = digest(mesh_path);
      const Mesh mesh = with_context(mesh_path, [&] { return load_off(mesh_path); });
      std::vector<double> centre(mesh.dim, 0.0);
      if (!at_text.empty()) {
        const auto coords = parse_doubles(at_text, "--at");
        if (coords.size() == 1 && at_text.find_first_of(".,eE") == std::string::npos) {
          const auto v = static_cast<std::size_t>(coords[0]);
          if (coords[0] < 0 || v >= mesh.vertex_count()) throw Error(ErrorKind::BadParams, "--at vertex out of range");
          const auto p = mesh.vertex(v);
          centre.assign(p.begin(), p.end());
        } else if (coords.size() == mesh.dim) {
          centre = coords;
        } else {
          throw Error(ErrorKind::BadParams, "--at needs a vertex index or " + std::to_string(mesh.dim) + " coordinates");
        }
      } else if (mode == "horn") {
        throw Error(ErrorKind::BadParams, "--mode horn needs --at");
      }
      const auto radii = with_context("--radii", [&] { return parse_geometric_grid(radii_text); });
      out << growth_json(growth_exponent(mesh, centre, radii)).dump() << "\n";
    } else if (*nf_cmd) {
      const auto spec = make_normal_form_spec(theta, genus, parse_betas(beta_text));
      const auto r = verify_normal_form(spec);
      report.checks = r.checks;
      if (!out_path.empty()) save_mesh(out_path, r.mesh);
      if (!code_path.empty()) write_text(code_path, to_json(normal_form_code(spec)).dump() + "\n");
      out << report.json_lines();
      result.exit_code = r.passed ? kExitOk : kExitCheckFailed;
    } else if (*corpus_cmd) {
      const std::filesystem::path data(data_dir);
      std::vector<std::string> files;
      for (const char* sub : {"strata", "codes"}) {
        if (!std::filesystem::is_directory(data / sub)) throw Error(ErrorKind::Io, "missing " + (data / sub).string());
        for (const auto& e : std::filesystem::directory_iterator(data / sub)) files.push_back(e.path().string());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) report.inputs[f] = digest(f);
      report.checks = corpus_entry_checks(data);
      SuiteOptions opts;
      opts.seed = seed;
      opts.data_dir = data;
      for (const auto& c : run_acceptance(opts)) report.checks.push_back(c.check);
      out << (format == "human" ? report.human() : report.json_lines());
      result.exit_code = all_pass(report.checks) ? kExitOk : kExitCheckFailed;
    } else if (*gen_cmd) {
      const auto family = parse_surface_family(family_text);
      params.beta = with_context("--beta", [&] { return Rational::parse(gen_beta); });
      const Mesh m = generate_surface(family, params);
      save_mesh(gen_out, m);
      nlohmann::json j{{"family", family_text},
                       {"vertices", m.vertex_count()},
                       {"triangles", m.triangles.size()},
                       {"dim", m.dim},
                       {"out", gen_out}};
      out << j.dump() << "\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    result.exit_code = kExitInput;
    return result;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    result.exit_code = kExitInput;
    return result;
  }

  if (!report_path.empty()) {
    try {
      write_text(report_path, report.json_lines());
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      result.exit_code = kExitInput;
    }
  }
  return result;
}

}  // namespace horncode
