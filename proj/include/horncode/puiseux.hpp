#pragma once

#include <string>
#include <vector>

#include "horncode/rational.hpp"

namespace horncode {

struct PuiseuxTerm {
  double coeff = 0.0;
  Rational exponent;
};

// Finite sum of real multiples of rational powers of a positive variable.
// Terms are kept with strictly decreasing exponents and nonzero coefficients.
class Puiseux {
 public:
  Puiseux() = default;
  explicit Puiseux(std::vector<PuiseuxTerm> terms);

  const std::vector<PuiseuxTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  const PuiseuxTerm& leading() const { return terms_.front(); }

  double operator()(double t) const;
  std::string str() const;

 private:
  std::vector<PuiseuxTerm> terms_;
};

}  // namespace horncode
