#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace horncode {

using BigInt = boost::multiprecision::cpp_int;

// Exact reduced fraction num/den with den > 0.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(BigInt num, BigInt den);

  // Accepts "p/q", "p" and a leading sign; throws ParseError otherwise.
  static Rational parse(std::string_view text);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  double to_double() const;
  // "p/q", or "p" when the denominator is 1.
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  BigInt num_{0};
  BigInt den_{1};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Continued-fraction convergent of x with denominator <= max_den closest to x.
// Throws NoRationalNearby when the best convergent is farther than tol.
Rational rational_round(double x, std::int64_t max_den, double tol);

// Lexicographic order on exponent vectors.
std::strong_ordering compare(const std::vector<Rational>& a, const std::vector<Rational>& b);

}  // namespace horncode
