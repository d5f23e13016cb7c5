#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <random>
#include <unordered_map>

#include "horncode/error.hpp"
#include "horncode/geometry.hpp"

namespace horncode {

namespace {

constexpr std::uint64_t kUnreached = std::numeric_limits<std::uint64_t>::max();
constexpr std::uint32_t kNoTriangle = std::numeric_limits<std::uint32_t>::max();

double bbox_diagonal(const Mesh& mesh) {
  std::vector<double> lo(mesh.dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(mesh.dim, -std::numeric_limits<double>::infinity());
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    auto p = mesh.vertex(v);
    for (std::size_t k = 0; k < mesh.dim; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  double s = 0;
  for (std::size_t k = 0; k < mesh.dim; ++k) s += (hi[k] - lo[k]) * (hi[k] - lo[k]);
  return std::sqrt(s);
}

struct Arc {
  std::uint32_t from;
  std::uint32_t to;
  std::uint64_t weight;
  auto operator<=>(const Arc&) const = default;
};

}  // namespace

InnerMetric::InnerMetric(const Mesh& mesh, int steiner_per_edge) : vertex_count_(mesh.vertex_count()) {
  if (steiner_per_edge < 0) throw Error(ErrorKind::BadParams, "negative Steiner count");
  check_indices(mesh);
  const double diag = bbox_diagonal(mesh);
  unit_ = (diag > 0 ? diag : 1.0) * std::ldexp(1.0, -40);

  std::vector<double> pos = mesh.coords;
  const std::size_t dim = mesh.dim;
  dim_ = dim;
  coords_ = mesh.coords;
  triangles_ = mesh.triangles;
  vertex_triangles_.resize(vertex_count_);
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (auto v : triangles_[t]) vertex_triangles_[v].push_back(static_cast<std::uint32_t>(t));
  }
  {
    std::vector<double> angle(vertex_count_, 0.0);
    std::unordered_map<std::uint64_t, int> edge_use;
    for (const auto& t : triangles_) {
      for (int e = 0; e < 3; ++e) {
        const auto a = t[e], b = t[(e + 1) % 3], c = t[(e + 2) % 3];
        ++edge_use[(static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b)];
        const double ab = horncode::distance(mesh.vertex(a), mesh.vertex(b));
        const double ac = horncode::distance(mesh.vertex(a), mesh.vertex(c));
        const double bc = horncode::distance(mesh.vertex(b), mesh.vertex(c));
        angle[a] += std::acos(std::clamp((ab * ab + ac * ac - bc * bc) / (2 * ab * ac), -1.0, 1.0));
      }
    }
    neighbours_.assign(triangles_.size(), {kNoTriangle, kNoTriangle, kNoTriangle});
    std::unordered_map<std::uint64_t, std::pair<std::uint32_t, int>> first_side;
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
      for (int e = 0; e < 3; ++e) {
        const auto a = triangles_[t][e], b = triangles_[t][(e + 1) % 3];
        const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
        auto [it, fresh] = first_side.try_emplace(key, static_cast<std::uint32_t>(t), e);
        if (!fresh) {
          neighbours_[t][e] = it->second.first;
          neighbours_[it->second.first][it->second.second] = static_cast<std::uint32_t>(t);
        }
      }
    }
    transit_.assign(vertex_count_, 0);
    for (std::size_t v = 0; v < vertex_count_; ++v) transit_[v] = angle[v] > 2 * std::numbers::pi + 1e-9;
    for (const auto& [key, n] : edge_use) {
      if (n == 1) transit_[key >> 32] = transit_[key & 0xffffffffu] = 1;
    }
  }
  std::unordered_map<std::uint64_t, std::uint32_t> first_steiner;
  const auto k = static_cast<std::uint32_t>(steiner_per_edge);
  // Steiner nodes of edge (a, b) listed from a toward b.
  auto edge_nodes = [&](std::uint32_t a, std::uint32_t b, std::vector<std::uint32_t>& out) {
    if (k == 0) return;
    const std::uint32_t lo = std::min(a, b), hi = std::max(a, b);
    const std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) | hi;
    auto it = first_steiner.find(key);
    std::uint32_t base;
    if (it == first_steiner.end()) {
      base = static_cast<std::uint32_t>(pos.size() / dim);
      for (std::uint32_t s = 1; s <= k; ++s) {
        steiner_edge_.emplace_back(lo, hi);
        const double t = static_cast<double>(s) / (k + 1);
        for (std::size_t c = 0; c < dim; ++c) {
          pos.push_back((1 - t) * mesh.coords[lo * dim + c] + t * mesh.coords[hi * dim + c]);
        }
      }
      first_steiner.emplace(key, base);
    } else {
      base = it->second;
    }
    for (std::uint32_t s = 0; s < k; ++s) out.push_back(a == lo ? base + s : base + (k - 1 - s));
  };

  std::vector<Arc> arcs;
  std::vector<std::uint32_t> ring;
  for (const auto& t : mesh.triangles) {
    ring.clear();
    for (int e = 0; e < 3; ++e) {
      ring.push_back(t[e]);
      edge_nodes(t[e], t[(e + 1) % 3], ring);
    }
    for (std::size_t i = 0; i < ring.size(); ++i) {
      for (std::size_t j = i + 1; j < ring.size(); ++j) {
        const double len = horncode::distance(std::span<const double>(pos.data() + ring[i] * dim, dim),
                                             std::span<const double>(pos.data() + ring[j] * dim, dim));
        const auto w = static_cast<std::uint64_t>(std::floor(len / unit_)) + 1;
        arcs.push_back({ring[i], ring[j], w});
        arcs.push_back({ring[j], ring[i], w});
      }
    }
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end(),
                         [](const Arc& x, const Arc& y) { return x.from == y.from && x.to == y.to; }),
             arcs.end());
  const std::size_t nodes = pos.size() / dim;
  offsets_.assign(nodes + 1, 0);
  for (const auto& a : arcs) ++offsets_[a.from + 1];
  for (std::size_t n = 0; n < nodes; ++n) offsets_[n + 1] += offsets_[n];
  targets_.reserve(arcs.size());
  weights_.reserve(arcs.size());
  for (const auto& a : arcs) {
    targets_.push_back(a.to);
    weights_.push_back(a.weight);
  }
}

std::vector<std::uint64_t> InnerMetric::ticks_from(std::uint32_t p, std::optional<std::uint32_t> stop,
                                                   std::vector<std::uint32_t>* pred) const {
  if (p >= vertex_count_) throw Error(ErrorKind::BadParams, "vertex index out of range");
  std::vector<std::uint64_t> dist(node_count(), kUnreached);
  if (pred) pred->assign(node_count(), p);
  using Item = std::pair<std::uint64_t, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[p] = 0;
  heap.emplace(0, p);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != dist[u]) continue;
    if (stop && u == *stop) break;
    for (std::size_t e = offsets_[u]; e < offsets_[u + 1]; ++e) {
      const std::uint64_t nd = d + weights_[e];
      if (nd < dist[targets_[e]]) {
        dist[targets_[e]] = nd;
        if (pred) (*pred)[targets_[e]] = u;
        heap.emplace(nd, targets_[e]);
      }
    }
  }
  return dist;
}

std::vector<double> InnerMetric::from(std::uint32_t p) const {
  auto ticks = ticks_from(p, std::nullopt);
  std::vector<double> out(vertex_count_);
  for (std::size_t v = 0; v < vertex_count_; ++v) {
    out[v] = ticks[v] == kUnreached ? std::numeric_limits<double>::infinity() : static_cast<double>(ticks[v]) * unit_;
  }
  return out;
}

double InnerMetric::distance(std::uint32_t p, std::uint32_t q) const {
  if (q >= vertex_count_) throw Error(ErrorKind::BadParams, "vertex index out of range");
  auto ticks = ticks_from(p, q);
  if (ticks[q] == kUnreached) throw Error(ErrorKind::Disconnected, "vertices are not joined by a path");
  return static_cast<double>(ticks[q]) * unit_;
}

namespace {

using P2 = std::array<double, 2>;
constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

double cross2(const P2& a, const P2& b, const P2& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

double len2(const P2& a, const P2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

struct Portal {
  P2 left, right;
  std::uint32_t left_id = kNone, right_id = kNone;
};

struct Bend {
  std::uint32_t vertex;
  std::size_t portal;
};

// Shortest path through a sequence of portals (left and right as seen when moving
// through them); the first and last portals are the degenerate end points. Records
// the portal corners the path wraps around.
double funnel_length(const std::vector<Portal>& portals, std::vector<Bend>& bends) {
  // Negative when c lies clockwise of b as seen from a.
  auto area = [](const P2& a, const P2& b, const P2& c) { return -cross2(a, b, c); };
  bends.clear();
  double total = 0.0;
  P2 apex = portals[0].left, left = apex, right = apex;
  std::size_t apex_i = 0, left_i = 0, right_i = 0;
  auto move_apex = [&](const P2& to, std::size_t i, std::uint32_t id) {
    total += len2(apex, to);
    bends.push_back({id, i});
    apex = left = right = to;
    apex_i = left_i = right_i = i;
  };
  for (std::size_t i = 1; i < portals.size(); ++i) {
    const P2& l = portals[i].left;
    const P2& r = portals[i].right;
    if (area(apex, right, r) <= 0.0) {
      if (apex == right || area(apex, left, r) > 0.0) {
        right = r;
        right_i = i;
      } else {
        move_apex(left, left_i, portals[left_i].left_id);
        i = apex_i;
        continue;
      }
    }
    if (area(apex, left, l) >= 0.0) {
      if (apex == left || area(apex, right, l) < 0.0) {
        left = l;
        left_i = i;
      } else {
        move_apex(right, right_i, portals[right_i].right_id);
        i = apex_i;
        continue;
      }
    }
  }
  return total + len2(apex, portals.back().left);
}

int shared_count(const Triangle& a, const Triangle& b) {
  int n = 0;
  for (auto x : a) n += static_cast<int>(std::find(b.begin(), b.end(), x) != b.end());
  return n;
}

bool contains(const Triangle& t, std::uint32_t v) { return std::find(t.begin(), t.end(), v) != t.end(); }

}  // namespace

std::vector<std::uint32_t> InnerMetric::node_triangles(std::uint32_t node) const {
  if (node < vertex_count_) return vertex_triangles_[node];
  const auto [a, b] = steiner_edge_[node - vertex_count_];
  std::vector<std::uint32_t> out;
  for (auto t : vertex_triangles_[a]) {
    if (contains(triangles_[t], b)) out.push_back(t);
  }
  return out;
}

double InnerMetric::straighten(const std::vector<std::uint32_t>& nodes) const {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Triangle strip followed by the node path. Immediate back-and-forth steps are
  // dropped: the shared edge itself is a shorter detour.
  std::vector<std::uint32_t> strip;
  auto push = [&](std::uint32_t t) {
    if (!strip.empty() && strip.back() == t) return true;
    if (strip.size() >= 2 && strip[strip.size() - 2] == t) {
      strip.pop_back();
      return true;
    }
    if (!strip.empty() && shared_count(triangles_[strip.back()], triangles_[t]) != 2) return false;
    strip.push_back(t);
    return true;
  };
  // Neighbour of t across its edge (v, other vertex) that is not `skip`.
  auto around = [&](std::uint32_t t, std::uint32_t v, std::uint32_t skip) {
    for (auto u : vertex_triangles_[v]) {
      if (u != t && u != skip && shared_count(triangles_[t], triangles_[u]) == 2) return u;
    }
    return kNone;
  };
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const auto ta = node_triangles(nodes[i]);
    const auto tb = node_triangles(nodes[i + 1]);
    std::uint32_t hop = kNone;
    for (auto t : ta) {
      if (std::find(tb.begin(), tb.end(), t) == tb.end()) continue;
      if (hop == kNone || (!strip.empty() && t == strip.back())) hop = t;
    }
    if (hop == kNone) return kInf;
    if (!strip.empty() && strip.back() != hop && shared_count(triangles_[strip.back()], triangles_[hop]) < 2) {
      // Only a vertex is shared: walk the fan around it (both ways, keep the shorter).
      const auto v = nodes[i];
      if (v >= vertex_count_) return kInf;
      std::vector<std::uint32_t> best;
      for (int way = 0; way < 2; ++way) {
        std::vector<std::uint32_t> walk;
        std::uint32_t prev = kNone, cur = strip.back();
        std::uint32_t first = way == 0 ? around(cur, v, kNone) : kNone;
        if (way == 1) {
          const auto one = around(cur, v, kNone);
          first = one == kNone ? kNone : around(cur, v, one);
        }
        for (std::uint32_t next = first; next != kNone && walk.size() <= vertex_triangles_[v].size();) {
          walk.push_back(next);
          if (next == hop) break;
          prev = cur;
          cur = next;
          next = around(cur, v, prev);
        }
        if (!walk.empty() && walk.back() == hop && (best.empty() || walk.size() < best.size())) best = walk;
      }
      if (best.empty()) return kInf;
      best.pop_back();
      for (auto t : best) {
        if (!push(t)) return kInf;
      }
    }
    if (!push(hop)) return kInf;
  }

  auto vpos = [&](std::uint32_t v) { return std::span<const double>(coords_.data() + v * dim_, dim_); };
  auto elen = [&](std::uint32_t a, std::uint32_t b) { return horncode::distance(vpos(a), vpos(b)); };
  std::vector<Portal> portals;
  std::vector<Bend> bends;

  // Unfolds the strip into the plane one triangle at a time and runs the funnel.
  auto sleeve_length = [&]() {
    portals.clear();
    std::array<std::uint32_t, 3> ids = triangles_[strip[0]];
    std::array<P2, 3> at{};
    auto place_apex = [&](const P2& pa, const P2& pb, double la, double lb, double side) {
      const double base = len2(pa, pb);
      const double x = (la * la - lb * lb + base * base) / (2 * base);
      const double y = std::sqrt(std::max(0.0, la * la - x * x));
      const P2 e{(pb[0] - pa[0]) / base, (pb[1] - pa[1]) / base};
      return P2{pa[0] + x * e[0] - side * y * e[1], pa[1] + x * e[1] + side * y * e[0]};
    };
    at[0] = {0.0, 0.0};
    at[1] = {elen(ids[0], ids[1]), 0.0};
    at[2] = place_apex(at[0], at[1], elen(ids[0], ids[2]), elen(ids[1], ids[2]), 1.0);
    auto where = [&](std::uint32_t v) {
      for (int k = 0; k < 3; ++k) {
        if (ids[k] == v) return at[k];
      }
      return at[0];
    };
    const P2 start = where(nodes.front());
    portals.push_back({start, start, nodes.front(), nodes.front()});
    for (std::size_t i = 0; i + 1 < strip.size(); ++i) {
      const auto& nxt = triangles_[strip[i + 1]];
      std::uint32_t u = kNone, w = kNone, apex_cur = kNone, apex_nxt = kNone;
      for (auto v : ids) {
        if (contains(nxt, v)) {
          (u == kNone ? u : w) = v;
        } else {
          apex_cur = v;
        }
      }
      for (auto v : nxt) {
        if (v != u && v != w) apex_nxt = v;
      }
      const P2 pu = where(u), pw = where(w), pc = where(apex_cur);
      const double side = cross2(pu, pw, pc) > 0 ? -1.0 : 1.0;
      const P2 pn = place_apex(pu, pw, elen(u, apex_nxt), elen(w, apex_nxt), side);
      // Moving away from apex_cur, the endpoint counter-clockwise of the travel
      // direction is on the left.
      const P2 mid{(pu[0] + pw[0]) / 2, (pu[1] + pw[1]) / 2};
      const P2 ahead{2 * mid[0] - pc[0], 2 * mid[1] - pc[1]};
      if (cross2(pc, ahead, pu) > 0) {
        portals.push_back({pu, pw, u, w});
      } else {
        portals.push_back({pw, pu, w, u});
      }
      ids = {u, w, apex_nxt};
      at = {pu, pw, pn};
    }
    const P2 end = where(nodes.back());
    portals.push_back({end, end, nodes.back(), nodes.back()});
    return funnel_length(portals, bends);
  };

  double best = sleeve_length();
  // A shortest path never wraps around a flat interior vertex: reroute the strip
  // around the other side of every such vertex and keep the result while it shrinks.
  for (int round = 0; round < 256; ++round) {
    std::vector<std::uint32_t> rerouted;
    std::size_t copied = 0;  // strip[0, copied) already emitted
    for (const auto& b : bends) {
      const auto v = b.vertex;
      if (v >= vertex_count_ || transit_[v] || v == nodes.front() || v == nodes.back()) continue;
      if (b.portal == 0 || b.portal >= strip.size()) continue;
      std::size_t lo = b.portal - 1, hi = b.portal;
      while (lo > 0 && contains(triangles_[strip[lo - 1]], v)) --lo;
      while (hi + 1 < strip.size() && contains(triangles_[strip[hi + 1]], v)) ++hi;
      if (lo == hi || lo < copied) continue;
      std::vector<std::uint32_t> other;
      std::uint32_t prev = strip[lo], cur = around(strip[lo], v, strip[lo + 1]);
      while (cur != kNone && cur != strip[hi] && other.size() <= vertex_triangles_[v].size()) {
        other.push_back(cur);
        const auto next = around(cur, v, prev);
        prev = cur;
        cur = next;
      }
      if (cur != strip[hi]) continue;
      rerouted.insert(rerouted.end(), strip.begin() + static_cast<std::ptrdiff_t>(copied),
                      strip.begin() + static_cast<std::ptrdiff_t>(lo) + 1);
      rerouted.insert(rerouted.end(), other.begin(), other.end());
      copied = hi;
    }
    if (copied == 0) break;
    rerouted.insert(rerouted.end(), strip.begin() + static_cast<std::ptrdiff_t>(copied), strip.end());
    auto saved = std::move(strip);
    strip.clear();
    for (auto t : rerouted) push(t);
    const double length = sleeve_length();
    if (!(length < best)) {
      strip = std::move(saved);
      break;
    }
    best = length;
  }
  return best;
}

bool InnerMetric::segment_inside(std::uint32_t p, std::uint32_t q) const {
  auto at = [&](std::uint32_t v) { return P2{coords_[v * 2], coords_[v * 2 + 1]}; };
  const P2 a = at(p), b = at(q);
  const double scale = len2(a, b);
  const double tol = 1e-12 * scale * scale;
  auto side = [&](std::uint32_t v) {
    const double o = cross2(a, b, at(v));
    return o > tol ? 1 : (o < -tol ? -1 : 0);
  };
  // Parameter of v's projection along a -> b, in [0, 1] on the segment.
  auto along = [&](std::uint32_t v) {
    const P2 x = at(v);
    return ((x[0] - a[0]) * (b[0] - a[0]) + (x[1] - a[1]) * (b[1] - a[1])) / (scale * scale);
  };
  std::uint32_t cur = p;
  double progress = 0.0;
  for (std::size_t guard = 0; guard <= triangles_.size() + vertex_count_; ++guard) {
    if (cur == q) return true;
    // Leave vertex cur: either along an edge to a vertex on the segment, or into
    // the fan triangle whose opposite edge the segment crosses.
    std::uint32_t next_vertex = kNoTriangle, tri = kNoTriangle;
    int entry = -1;
    for (auto t : vertex_triangles_[cur]) {
      const auto& tr = triangles_[t];
      int k = 0;
      while (tr[k] != cur) ++k;
      const auto u = tr[(k + 1) % 3], w = tr[(k + 2) % 3];
      const int su = side(u), sw = side(w);
      for (auto x : {u, w}) {
        const double s = along(x);
        if (side(x) == 0 && s > progress && s <= 1.0 + 1e-12) next_vertex = x;
      }
      if (su != 0 && sw != 0 && su != sw) {
        // Where the segment line meets edge u-w; it must lie ahead of cur.
        const double ou = std::abs(cross2(a, b, at(u))), ow = std::abs(cross2(a, b, at(w)));
        const double hit = along(u) + (along(w) - along(u)) * ou / (ou + ow);
        if (hit > progress) {
          tri = t;
          entry = (k + 1) % 3;  // edge (u, w)
        }
      }
    }
    if (next_vertex != kNoTriangle) {
      progress = along(next_vertex);
      cur = next_vertex;
      continue;
    }
    if (tri == kNoTriangle) return false;
    // From the fan triangle, cross edge `entry` and keep walking edge to edge.
    std::uint32_t t = neighbours_[tri][entry];
    std::uint32_t from = tri;
    bool moved_to_vertex = false;
    for (std::size_t steps = 0; !moved_to_vertex; ++steps) {
      if (t == kNoTriangle || steps > triangles_.size()) return false;
      const auto& tr = triangles_[t];
      int back = 0;
      while (neighbours_[t][back] != from) ++back;
      const auto c = tr[(back + 2) % 3];  // vertex opposite the entry edge
      if (c == q) return true;
      const int sc = side(c);
      if (sc == 0) {
        if (along(c) > 1.0) return false;  // passed q without meeting it: degenerate
        progress = along(c);
        cur = c;
        moved_to_vertex = true;
        break;
      }
      // Exit through the edge whose endpoints straddle the segment line.
      const int exit = side(tr[back]) != sc ? (back + 2) % 3 : (back + 1) % 3;
      from = t;
      t = neighbours_[t][exit];
    }
  }
  return false;
}

std::vector<double> InnerMetric::shortened_from(std::uint32_t p, std::span<const std::uint32_t> targets) const {
  std::vector<std::uint32_t> pred;
  const auto ticks = ticks_from(p, std::nullopt, &pred);
  std::vector<double> out;
  out.reserve(targets.size());
  for (auto q : targets) {
    if (q >= vertex_count_) throw Error(ErrorKind::BadParams, "vertex index out of range");
    if (ticks[q] == kUnreached) {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    const double graph = static_cast<double>(ticks[q]) * unit_;
    if (q == p) {
      out.push_back(0.0);
      continue;
    }
    if (dim_ == 2 && segment_inside(p, q)) {
      out.push_back(std::min(graph, horncode::distance(std::span<const double>(coords_.data() + p * 2, 2),
                                                       std::span<const double>(coords_.data() + q * 2, 2))));
      continue;
    }
    std::vector<std::uint32_t> nodes{q};
    while (nodes.back() != p) nodes.push_back(pred[nodes.back()]);
    std::reverse(nodes.begin(), nodes.end());
    out.push_back(std::min(graph, straighten(nodes)));
  }
  return out;
}

double inner_distance(const Mesh& mesh, std::uint32_t p, std::uint32_t q) {
  return InnerMetric(mesh).distance(p, q);
}

namespace {

struct LnePlan {
  std::vector<std::uint32_t> sources;
  std::vector<std::vector<std::uint32_t>> targets;
};

LnePlan plan_pairs(const Mesh& mesh, std::size_t budget, std::uint64_t seed) {
  if (budget < 1000) throw Error(ErrorKind::BadParams, "pair budget must be at least 1000");
  const std::size_t n = mesh.vertex_count();
  if (n < 2) throw Error(ErrorKind::BadParams, "mesh has fewer than two vertices");
  Rng rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
  const auto n_src = std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(std::sqrt(budget))));
  const std::size_t n_far = (n_src + 1) / 2;

  LnePlan plan;
  std::vector<char> chosen(n, 0);
  std::vector<double> gap(n, std::numeric_limits<double>::infinity());
  std::uint32_t next = pick(rng);
  for (std::size_t s = 0; s < n_far; ++s) {
    plan.sources.push_back(next);
    chosen[next] = 1;
    double best = -1;
    for (std::uint32_t v = 0; v < n; ++v) {
      gap[v] = std::min(gap[v], distance(mesh.vertex(v), mesh.vertex(next)));
      if (gap[v] > best) {
        best = gap[v];
        next = v;
      }
    }
  }
  while (plan.sources.size() < n_src) {
    const auto v = pick(rng);
    if (chosen[v]) continue;
    chosen[v] = 1;
    plan.sources.push_back(v);
  }
  const std::size_t per = (budget + n_src - 1) / n_src;
  for (auto s : plan.sources) {
    std::vector<std::uint32_t> t;
    for (std::size_t f = 0; f < n_far; ++f) {
      if (plan.sources[f] != s) t.push_back(plan.sources[f]);
    }
    while (t.size() < per) {
      const auto v = pick(rng);
      if (v != s) t.push_back(v);
    }
    plan.targets.push_back(std::move(t));
  }
  return plan;
}

LneEstimate source_ratio(const Mesh& mesh, const InnerMetric& metric, std::uint32_t s,
                         const std::vector<std::uint32_t>& targets) {
  LneEstimate out;
  out.worst_p = out.worst_q = s;
  const auto d = metric.shortened_from(s, targets);
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const auto t = targets[k];
    const double e = distance(mesh.vertex(s), mesh.vertex(t));
    if (e <= 0) continue;
    if (std::isinf(d[k])) throw Error(ErrorKind::Disconnected, "sampled pair is not joined by a path");
    ++out.pairs;
    const double ratio = d[k] / e;
    if (ratio > out.constant) {
      out.constant = ratio;
      out.worst_q = t;
    }
  }
  return out;
}

LneEstimate merge(const std::vector<LneEstimate>& parts) {
  LneEstimate out;
  for (const auto& p : parts) {
    out.pairs += p.pairs;
    if (p.constant > out.constant) {
      out.constant = p.constant;
      out.worst_p = p.worst_p;
      out.worst_q = p.worst_q;
    }
  }
  return out;
}

}  // namespace

LneEstimate lne_constant(const Mesh& mesh, std::size_t pair_budget, std::uint64_t seed, int steiner_per_edge) {
  const auto plan = plan_pairs(mesh, pair_budget, seed);
  const InnerMetric metric(mesh, steiner_per_edge);
  std::vector<LneEstimate> parts(plan.sources.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < plan.sources.size(); ++i) {
    try {
      parts[i] = source_ratio(mesh, metric, plan.sources[i], plan.targets[i]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return merge(parts);
}

namespace serial {

LneEstimate lne_constant(const Mesh& mesh, std::size_t pair_budget, std::uint64_t seed, int steiner_per_edge) {
  const auto plan = plan_pairs(mesh, pair_budget, seed);
  const InnerMetric metric(mesh, steiner_per_edge);
  std::vector<LneEstimate> parts;
  for (std::size_t i = 0; i < plan.sources.size(); ++i) {
    parts.push_back(source_ratio(mesh, metric, plan.sources[i], plan.targets[i]));
  }
  return merge(parts);
}

}  // namespace serial

}  // namespace horncode
