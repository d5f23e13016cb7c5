#include "horncode/mesh.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "horncode/error.hpp"

namespace horncode {

std::uint32_t Mesh::add_vertex(std::span<const double> p) {
  if (p.size() != dim) throw Error(ErrorKind::BadParams, "vertex dimension mismatch");
  coords.insert(coords.end(), p.begin(), p.end());
  return static_cast<std::uint32_t>(vertex_count() - 1);
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

double norm(std::span<const double> a) {
  double s = 0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

void check_indices(const Mesh& mesh) {
  const std::size_t n = mesh.vertex_count();
  for (const auto& t : mesh.triangles) {
    for (auto v : t) {
      if (v >= n) throw Error(ErrorKind::BadParams, "triangle index out of range");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw Error(ErrorKind::BadParams, "degenerate triangle with repeated vertex");
    }
  }
}

Mesh permuted(const Mesh& mesh, const std::vector<std::size_t>& vertex_perm,
              const std::vector<std::size_t>& triangle_perm) {
  Mesh out;
  out.dim = mesh.dim;
  out.coords.resize(mesh.coords.size());
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    auto src = mesh.vertex(v);
    std::copy(src.begin(), src.end(), out.coords.begin() + static_cast<std::ptrdiff_t>(vertex_perm[v] * mesh.dim));
  }
  out.triangles.resize(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    out.triangles[triangle_perm[t]] = {static_cast<std::uint32_t>(vertex_perm[tri[0]]),
                                       static_cast<std::uint32_t>(vertex_perm[tri[1]]),
                                       static_cast<std::uint32_t>(vertex_perm[tri[2]])};
  }
  for (const auto& [v, tag] : mesh.marks) out.marks[vertex_perm[v]] = tag;
  return out;
}

Mesh subdivide(const Mesh& mesh) {
  Mesh out;
  out.dim = mesh.dim;
  out.coords = mesh.coords;
  out.marks = mesh.marks;
  std::unordered_map<std::uint64_t, std::uint32_t> mid;
  std::vector<double> p(mesh.dim);
  auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
    std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
    if (auto it = mid.find(key); it != mid.end()) return it->second;
    auto pa = mesh.vertex(a), pb = mesh.vertex(b);
    for (std::size_t k = 0; k < mesh.dim; ++k) p[k] = 0.5 * (pa[k] + pb[k]);
    std::uint32_t id = out.add_vertex(p);
    mid.emplace(key, id);
    return id;
  };
  for (const auto& t : mesh.triangles) {
    std::uint32_t ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
    out.add_triangle(t[0], ab, ca);
    out.add_triangle(ab, t[1], bc);
    out.add_triangle(ca, bc, t[2]);
    out.add_triangle(ab, bc, ca);
  }
  return out;
}

Mesh compact(const Mesh& mesh) {
  std::vector<std::int64_t> remap(mesh.vertex_count(), -1);
  Mesh out;
  out.dim = mesh.dim;
  for (const auto& t : mesh.triangles) {
    Triangle nt{};
    for (int k = 0; k < 3; ++k) {
      if (remap[t[k]] < 0) remap[t[k]] = out.add_vertex(mesh.vertex(t[k]));
      nt[k] = static_cast<std::uint32_t>(remap[t[k]]);
    }
    out.triangles.push_back(nt);
  }
  for (const auto& [v, tag] : mesh.marks) {
    if (remap[v] >= 0) out.marks[static_cast<std::size_t>(remap[v])] = tag;
  }
  return out;
}

void write_off(std::ostream& os, const Mesh& mesh) {
  os.precision(17);
  if (mesh.dim == 3) {
    os << "OFF\n";
  } else {
    os << "nOFF\n" << mesh.dim << "\n";
  }
  os << mesh.vertex_count() << ' ' << mesh.triangles.size() << " 0\n";
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    auto p = mesh.vertex(v);
    for (std::size_t k = 0; k < p.size(); ++k) os << (k ? " " : "") << p[k];
    os << '\n';
  }
  for (const auto& t : mesh.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

namespace {

// Next non-empty, non-comment line.
bool next_line(std::istream& is, std::string& line, std::size_t& line_no) {
  while (std::getline(is, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

[[noreturn]] void off_error(std::size_t line_no, const std::string& what) {
  throw Error(ErrorKind::Io, "OFF line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Mesh read_off(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(is, line, line_no)) off_error(line_no, "empty file");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  Mesh mesh;
  if (magic == "OFF") {
    mesh.dim = 3;
  } else if (magic == "nOFF") {
    if (!next_line(is, line, line_no)) off_error(line_no, "missing dimension");
    mesh.dim = std::stoul(line);
    if (mesh.dim < 2) off_error(line_no, "dimension must be >= 2");
  } else {
    off_error(line_no, "expected OFF or nOFF header");
  }
  if (!next_line(is, line, line_no)) off_error(line_no, "missing counts");
  std::size_t nv = 0, nf = 0;
  {
    std::istringstream counts(line);
    if (!(counts >> nv >> nf)) off_error(line_no, "bad counts line");
  }
  mesh.coords.resize(nv * mesh.dim);
  for (std::size_t v = 0; v < nv; ++v) {
    if (!next_line(is, line, line_no)) off_error(line_no, "truncated vertex list");
    std::istringstream ls(line);
    for (std::size_t k = 0; k < mesh.dim; ++k) {
      if (!(ls >> mesh.coords[v * mesh.dim + k])) off_error(line_no, "bad vertex");
    }
  }
  for (std::size_t f = 0; f < nf; ++f) {
    if (!next_line(is, line, line_no)) off_error(line_no, "truncated face list");
    std::istringstream ls(line);
    std::size_t count = 0;
    std::int64_t a, b, c;
    if (!(ls >> count) || count != 3) off_error(line_no, "only triangles are supported");
    if (!(ls >> a >> b >> c)) off_error(line_no, "bad face");
    if (a < 0 || b < 0 || c < 0 || static_cast<std::size_t>(std::max({a, b, c})) >= nv) {
      off_error(line_no, "face index out of range");
    }
    mesh.add_triangle(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(c));
  }
  return mesh;
}

Mesh load_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  try {
    return read_off(in);
  } catch (const Error& e) {
    throw Error(ErrorKind::Io, path + ": " + e.what());
  }
}

void save_off(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  write_off(out, mesh);
}

std::string marks_to_json(const Mesh& mesh) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [v, tag] : mesh.marks) j[std::to_string(v)] = tag;
  return j.dump();
}

void apply_marks_json(Mesh& mesh, const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    for (const auto& [k, v] : j.items()) {
      std::size_t idx = std::stoul(k);
      if (idx >= mesh.vertex_count()) throw Error(ErrorKind::Io, "mark index out of range: " + k);
      mesh.marks[idx] = v.get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("marks: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::Io, "marks: keys must be vertex indices");
  }
}

}  // namespace horncode
