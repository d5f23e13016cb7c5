#include "horncode/contact.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "horncode/error.hpp"
#include "horncode/kernels.hpp"
#include "horncode/regression.hpp"

namespace horncode {

// ---------------------------------------------------------------------------
// CurveSampler

CurveSampler::CurveSampler(std::vector<Puiseux> coords, double t0, std::string source)
    : coords_(std::move(coords)), t0_(t0), source_(std::move(source)) {
  if (coords_.size() < 2) throw Error(ErrorKind::BadParams, "a curve needs at least two coordinates");
  if (!(t0_ > 0)) throw Error(ErrorKind::BadParams, "t0 must be positive");
  bool unbounded = false;
  for (const auto& c : coords_) {
    if (!c.is_zero() && c.leading().exponent > Rational(0)) unbounded = true;
  }
  if (!unbounded) {
    throw Error(ErrorKind::UnboundedCheckFailed, "|gamma(t)| does not diverge as t -> infinity");
  }
}

void CurveSampler::eval(double t, double* out) const {
  const std::size_t n = coords_.size();
  if (transform_.empty()) {
    for (std::size_t k = 0; k < n; ++k) out[k] = coords_[k](t);
    return;
  }
  double raw[16];
  std::vector<double> heap;
  double* v = raw;
  if (n > 16) {
    heap.resize(n);
    v = heap.data();
  }
  for (std::size_t k = 0; k < n; ++k) v[k] = coords_[k](t);
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0;
    for (std::size_t c = 0; c < n; ++c) s += transform_[r * n + c] * v[c];
    out[r] = s;
  }
}

std::vector<double> CurveSampler::operator()(double t) const {
  std::vector<double> p(dim());
  eval(t, p.data());
  return p;
}

double CurveSampler::norm(double t) const {
  auto p = (*this)(t);
  double s = 0;
  for (double x : p) s += x * x;
  return std::sqrt(s);
}

std::vector<double> CurveSampler::limit_direction() const {
  Rational top(std::numeric_limits<std::int64_t>::min());
  for (const auto& c : coords_) {
    if (!c.is_zero()) top = std::max(top, c.leading().exponent);
  }
  const std::size_t n = dim();
  std::vector<double> v(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (!coords_[k].is_zero() && coords_[k].leading().exponent == top) v[k] = coords_[k].leading().coeff;
  }
  if (!transform_.empty()) {
    std::vector<double> w(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) w[r] += transform_[r * n + c] * v[c];
    }
    v = std::move(w);
  }
  double s = 0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  for (double& x : v) x /= s;
  return v;
}

CurveSampler CurveSampler::transformed(const std::vector<double>& matrix) const {
  const std::size_t n = dim();
  if (matrix.size() != n * n) throw Error(ErrorKind::BadParams, "transform must be dim x dim");
  CurveSampler out = *this;
  if (transform_.empty()) {
    out.transform_ = matrix;
  } else {
    out.transform_.assign(n * n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t k = 0; k < n; ++k) out.transform_[r * n + c] += matrix[r * n + k] * transform_[k * n + c];
      }
    }
  }
  std::ostringstream os;
  os.precision(17);
  os << source_ << " |M";
  for (double x : out.transform_) os << ' ' << x;
  out.source_ = os.str();
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class CurveParser {
 public:
  explicit CurveParser(std::string_view text) : s_(text) {}

  CurveSampler parse() {
    std::vector<Puiseux> coords;
    coords.push_back(coord());
    skip_ws();
    while (peek() == ';') {
      ++pos_;
      coords.push_back(coord());
      skip_ws();
    }
    if (coords.size() < 2) fail("expected ';' and a second coordinate");
    double t0 = 1.0;
    if (peek() == '@') {
      ++pos_;
      skip_ws();
      std::size_t at = pos_;
      t0 = number();
      if (!(t0 > 0)) throw ParseError(at + 1, "t0 must be positive");
      skip_ws();
    }
    if (!eof()) fail(std::string("unexpected '") + peek() + "'");
    return CurveSampler(std::move(coords), t0, std::string(s_));
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_ + 1, msg); }

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  Puiseux coord() {
    std::vector<PuiseuxTerm> terms;
    skip_ws();
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    while (true) {
      PuiseuxTerm t = term();
      t.coeff *= sign;
      terms.push_back(std::move(t));
      skip_ws();
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
        continue;
      }
      break;
    }
    return Puiseux(std::move(terms));
  }

  PuiseuxTerm term() {
    skip_ws();
    PuiseuxTerm out{1.0, Rational(0)};
    bool have_number = false;
    if (is_digit(peek()) || peek() == '.') {
      out.coeff = number();
      have_number = true;
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        skip_ws();
        if (peek() != 't') fail("expected 't' after '*'");
      }
    }
    if (peek() == 't') {
      ++pos_;
      out.exponent = Rational(1);
      skip_ws();
      if (peek() == '^') {
        ++pos_;
        skip_ws();
        if (peek() != '(') fail("expected '(' after '^'");
        ++pos_;
        out.exponent = rational();
        skip_ws();
        if (peek() != ')') fail("expected ')'");
        ++pos_;
      }
      return out;
    }
    if (!have_number) fail(eof() ? "unexpected end of input" : std::string("unexpected '") + peek() + "'");
    return out;
  }

  double number() {
    std::size_t start = pos_;
    while (is_digit(peek())) ++pos_;
    if (peek() == '.') {
      ++pos_;
      while (is_digit(peek())) ++pos_;
    }
    if (pos_ == start || (pos_ == start + 1 && s_[start] == '.')) {
      pos_ = start;
      fail("expected a number");
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save = pos_;
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (!is_digit(peek())) {
        pos_ = save;
      } else {
        while (is_digit(peek())) ++pos_;
      }
    }
    return std::stod(std::string(s_.substr(start, pos_ - start)));
  }

  Rational rational() {
    skip_ws();
    std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') ++pos_;
    skip_ws();
    if (!is_digit(peek())) fail("expected an integer exponent");
    while (is_digit(peek())) ++pos_;
    skip_ws();
    if (peek() == '/') {
      ++pos_;
      skip_ws();
      if (!is_digit(peek())) fail("expected a denominator");
      while (is_digit(peek())) ++pos_;
    }
    std::string text;
    for (char c : s_.substr(start, pos_ - start)) {
      if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
    }
    try {
      return Rational::parse(text);
    } catch (const ParseError&) {
      throw ParseError(start + 1, "invalid rational exponent");
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

CurveSampler parse_curve(std::string_view text) { return CurveParser(text).parse(); }

// ---------------------------------------------------------------------------
// Annulus distance

namespace {

struct Interval {
  double lo;
  double hi;
};

std::vector<Interval> annulus_intervals(const CurveSampler& c, double inner, double outer) {
  auto inside = [&](double t) {
    double n = c.norm(t);
    return n >= inner && n <= outer;
  };
  double t_hi = c.t0();
  for (int i = 0; i < 4000 && c.norm(t_hi) <= 2.0 * outer; ++i) t_hi *= 2.0;
  t_hi *= 2.0;

  constexpr int kScan = 2048;
  const double log_lo = std::log(c.t0());
  const double step = (std::log(t_hi) - log_lo) / (kScan - 1);
  auto at = [&](int i) { return i == 0 ? c.t0() : std::exp(log_lo + step * i); };

  auto bisect = [&](double out_t, double in_t) {
    for (int k = 0; k < 80; ++k) {
      double mid = 0.5 * (out_t + in_t);
      if (inside(mid)) in_t = mid;
      else out_t = mid;
    }
    return in_t;
  };

  std::vector<Interval> runs;
  bool prev_in = false;
  double prev_t = 0.0;
  for (int i = 0; i < kScan; ++i) {
    double t = at(i);
    bool in = inside(t);
    if (in && !prev_in) runs.push_back({i == 0 ? t : bisect(prev_t, t), t});
    if (in) runs.back().hi = t;
    if (!in && prev_in) runs.back().hi = bisect(t, prev_t);
    prev_in = in;
    prev_t = t;
  }
  return runs;
}

struct Sample {
  std::vector<double> points;
  std::vector<double> ts;
  std::vector<std::size_t> run;  // index of the interval each sample belongs to
};

void append_window(const CurveSampler& c, double lo, double hi, std::size_t n, bool geometric,
                   std::size_t run, Sample& s) {
  const std::size_t dim = c.dim();
  for (std::size_t k = 0; k < n; ++k) {
    double f = n == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
    double t = geometric ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    s.ts.push_back(t);
    s.run.push_back(run);
    std::size_t off = s.points.size();
    s.points.resize(off + dim);
    c.eval(t, s.points.data() + off);
  }
}

Sample initial_sample(const CurveSampler& c, const std::vector<Interval>& runs, std::size_t total) {
  Sample s;
  double log_len = 0;
  for (const auto& r : runs) log_len += std::log(r.hi / r.lo) + 1e-12;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    double share = (std::log(runs[k].hi / runs[k].lo) + 1e-12) / log_len;
    std::size_t n = std::max<std::size_t>(16, static_cast<std::size_t>(share * static_cast<double>(total)));
    append_window(c, runs[k].lo, runs[k].hi, n, true, k, s);
  }
  return s;
}

Interval neighbourhood(const Sample& s, const std::vector<Interval>& runs, std::size_t i) {
  const std::size_t r = s.run[i];
  double lo = (i > 0 && s.run[i - 1] == r) ? s.ts[i - 1] : runs[r].lo;
  double hi = (i + 1 < s.ts.size() && s.run[i + 1] == r) ? s.ts[i + 1] : runs[r].hi;
  return {std::max(lo, runs[r].lo), std::min(hi, runs[r].hi)};
}

std::string ordering_key(const CurveSampler& c) {
  std::ostringstream os;
  os.precision(17);
  os << c.source() << " @" << c.t0();
  return os.str();
}

}  // namespace

double annulus_distance(const CurveSampler& c1, const CurveSampler& c2, double K, double r,
                        const AnnulusOptions& opts) {
  if (!(K > 1) || !(r > 0)) throw Error(ErrorKind::BadParams, "K > 1 and r > 0 required");
  if (c1.dim() != c2.dim()) throw Error(ErrorKind::BadParams, "curves live in different dimensions");
  // Symmetric by construction: process the pair in a canonical order.
  const bool swap = ordering_key(c2) < ordering_key(c1);
  const CurveSampler& a = swap ? c2 : c1;
  const CurveSampler& b = swap ? c1 : c2;

  const double inner = r / K, outer = r * K;
  auto runs_a = annulus_intervals(a, inner, outer);
  auto runs_b = annulus_intervals(b, inner, outer);
  if (runs_a.empty() || runs_b.empty()) {
    throw Error(ErrorKind::EmptyAnnulus, "curve has no points with norm in [" + std::to_string(inner) +
                                             ", " + std::to_string(outer) + "]");
  }
  const std::size_t dim = a.dim();
  Sample sa = initial_sample(a, runs_a, opts.samples);
  Sample sb = initial_sample(b, runs_b, opts.samples);
  PairMin pm = min_pair_distance(sa.points, sb.points, dim);
  double best = pm.distance;

  constexpr std::size_t kWindow = 33;
  for (int round = 0; round < opts.refine_rounds && best > 0; ++round) {
    Interval wa = neighbourhood(sa, runs_a, pm.i);
    Interval wb = neighbourhood(sb, runs_b, pm.j);
    std::size_t ra = sa.run[pm.i], rb = sb.run[pm.j];
    if (wa.hi - wa.lo <= 1e-14 * wa.hi && wb.hi - wb.lo <= 1e-14 * wb.hi) break;
    Sample na, nb;
    append_window(a, wa.lo, wa.hi, kWindow, false, ra, na);
    append_window(b, wb.lo, wb.hi, kWindow, false, rb, nb);
    sa = std::move(na);
    sb = std::move(nb);
    pm = serial::min_pair_distance(sa.points, sb.points, dim);
    best = std::min(best, pm.distance);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Contact estimate

std::vector<double> default_contact_radii() {
  std::vector<double> r;
  for (int j = 0; j <= 11; ++j) r.push_back(10.0 * std::ldexp(1.0, j));
  return r;
}

std::vector<double> parse_geometric_grid(std::string_view spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : spec) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3) throw ParseError(1, "grid must be r0:factor:count");
  double r0, factor;
  int count;
  try {
    r0 = std::stod(parts[0]);
    factor = std::stod(parts[1]);
    count = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw ParseError(1, "grid must be r0:factor:count");
  }
  if (!(r0 > 0) || !(factor > 0) || factor == 1.0 || count < 1) {
    throw Error(ErrorKind::BadParams, "grid needs r0 > 0, factor > 0 and != 1, count >= 1");
  }
  std::vector<double> out;
  for (int j = 0; j < count; ++j) out.push_back(r0 * std::pow(factor, j));
  return out;
}

ContactEstimate estimate_contact(const CurveSampler& c1, const CurveSampler& c2,
                                 const ContactOptions& opts) {
  std::vector<double> radii = opts.radii.empty() ? default_contact_radii() : opts.radii;
  std::sort(radii.begin(), radii.end());
  if (radii.size() < 6 || radii.back() / radii.front() < 1000.0) {
    throw Error(ErrorKind::GridTooSmall, "need >= 6 radii spanning >= 3 decades");
  }
  if (opts.Ks.empty()) throw Error(ErrorKind::BadParams, "no K values");
  for (double K : opts.Ks) {
    if (!(K > 1)) throw Error(ErrorKind::BadParams, "K must exceed 1");
  }

  const std::size_t nk = opts.Ks.size(), nr = radii.size();
  std::vector<double> f(nk * nr, 0.0);
  std::vector<std::exception_ptr> errors(nk * nr);
  const auto total = static_cast<std::ptrdiff_t>(nk * nr);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const auto u = static_cast<std::size_t>(idx);
    try {
      f[u] = annulus_distance(c1, c2, opts.Ks[u / nr], radii[u % nr], opts.annulus);
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ContactEstimate est;
  bool coincident = true;
  for (std::size_t k = 0; k < nk; ++k) {
    if (!(f[k * nr + nr - 1] < opts.abs_tol && f[k * nr + nr - 2] < opts.abs_tol)) coincident = false;
  }
  if (coincident) {
    est.slope = -std::numeric_limits<double>::infinity();
    est.rounded = NegInfinity{};
    for (double K : opts.Ks) est.per_K[K] = est.slope;
    return est;
  }

  double slope_sum = 0.0, ss = 0.0;
  std::size_t n_points = 0;
  for (std::size_t k = 0; k < nk; ++k) {
    std::vector<double> xs, ys;
    for (std::size_t j = 0; j < nr; ++j) {
      if (f[k * nr + j] > 0) {
        xs.push_back(radii[j]);
        ys.push_back(f[k * nr + j]);
      }
    }
    LineFit fit = fit_power_law(xs, ys);
    est.per_K[opts.Ks[k]] = fit.slope;
    slope_sum += fit.slope;
    ss += fit.residual * fit.residual * static_cast<double>(xs.size());
    n_points += xs.size();
  }
  est.slope = slope_sum / static_cast<double>(nk);
  est.residual = std::sqrt(ss / static_cast<double>(n_points));
  if (est.residual <= opts.round_tol) {
    try {
      est.rounded = rational_round(est.slope, opts.max_den, opts.round_tol);
    } catch (const Error&) {
    }
  }
  return est;
}

bool cones_differ(const CurveSampler& c1, const CurveSampler& c2, double angle_tol) {
  auto u = c1.limit_direction();
  auto v = c2.limit_direction();
  if (u.size() != v.size()) return true;
  double dot = 0;
  for (std::size_t k = 0; k < u.size(); ++k) dot += u[k] * v[k];
  double angle = std::acos(std::clamp(dot, -1.0, 1.0));
  return angle > angle_tol;
}

std::string to_string(const ContactValue& v) {
  if (std::holds_alternative<NegInfinity>(v)) return "-inf";
  return std::get<Rational>(v).str();
}

}  // namespace horncode
