#include "horncode/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "horncode/error.hpp"

namespace horncode {

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ == 0) throw Error(ErrorKind::BadParams, "zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  BigInt g = boost::multiprecision::gcd(boost::multiprecision::abs(num_), den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

namespace {

BigInt parse_integer(std::string_view text, std::size_t offset) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) throw ParseError(offset + i + 1, "expected digits");
  BigInt value = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw ParseError(offset + i + 1, std::string("unexpected '") + c + "'");
    value = value * 10 + (c - '0');
  }
  return negative ? BigInt(-value) : value;
}

std::string_view trim(std::string_view s, std::size_t& lead) {
  lead = 0;
  while (lead < s.size() && std::isspace(static_cast<unsigned char>(s[lead]))) ++lead;
  std::size_t end = s.size();
  while (end > lead && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(lead, end - lead);
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  std::size_t lead = 0;
  std::string_view body = trim(text, lead);
  auto slash = body.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(body, lead), 1);
  BigInt den = parse_integer(body.substr(slash + 1), lead + slash + 1);
  if (den <= 0) throw ParseError(lead + slash + 2, "denominator must be positive");
  return Rational(parse_integer(body.substr(0, slash), lead), den);
}

double Rational::to_double() const {
  return num_.convert_to<double>() / den_.convert_to<double>();
}

std::string Rational::str() const {
  if (den_ == 1) return num_.str();
  return num_.str() + "/" + den_.str();
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}
Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}
Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}
Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(ErrorKind::BadParams, "division by zero");
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  BigInt lhs = a.num_ * b.den_;
  BigInt rhs = b.num_ * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational rational_round(double x, std::int64_t max_den, double tol) {
  if (max_den < 1 || !(tol > 0)) throw Error(ErrorKind::BadParams, "max_den >= 1 and tol > 0 required");
  if (!std::isfinite(x)) throw Error(ErrorKind::NoRationalNearby, "non-finite value");

  // Convergents h_k / k_k via the standard recurrence.
  BigInt h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
  BigInt k_prev = 0, k = 1;
  Rational best(h, k);
  double best_err = std::abs(x - best.to_double());
  double frac = x - std::floor(x);
  for (int iter = 0; iter < 64 && frac > 1e-15; ++iter) {
    double inv = 1.0 / frac;
    double a = std::floor(inv);
    frac = inv - a;
    BigInt ai = static_cast<std::int64_t>(a);
    BigInt h_next = ai * h + h_prev;
    BigInt k_next = ai * k + k_prev;
    if (k_next > max_den) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    Rational cand(h, k);
    double err = std::abs(x - cand.to_double());
    if (err < best_err) {
      best = cand;
      best_err = err;
    }
  }
  if (best_err > tol) {
    throw Error(ErrorKind::NoRationalNearby,
                "no rational with denominator <= " + std::to_string(max_den) + " within " +
                    std::to_string(tol) + " of " + std::to_string(x));
  }
  return best;
}

std::strong_ordering compare(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace horncode
