#include "horncode/puiseux.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace horncode {

Puiseux::Puiseux(std::vector<PuiseuxTerm> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.exponent > b.exponent; });
  for (auto& t : terms) {
    if (!terms_.empty() && terms_.back().exponent == t.exponent) {
      terms_.back().coeff += t.coeff;
    } else {
      terms_.push_back(std::move(t));
    }
  }
  std::erase_if(terms_, [](const PuiseuxTerm& t) { return t.coeff == 0.0; });
}

double Puiseux::operator()(double t) const {
  double sum = 0.0;
  const double log_t = std::log(t);
  for (const auto& term : terms_) {
    if (term.exponent == Rational(0)) {
      sum += term.coeff;
    } else if (term.exponent.den() == 1) {
      sum += term.coeff * std::pow(t, term.exponent.to_double());
    } else {
      sum += term.coeff * std::exp(term.exponent.to_double() * log_t);
    }
  }
  return sum;
}

std::string Puiseux::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& term : terms_) {
    double c = term.coeff;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    os << std::abs(c);
    if (term.exponent != Rational(0)) os << "*t^(" << term.exponent.str() << ")";
  }
  return os.str();
}

}  // namespace horncode
