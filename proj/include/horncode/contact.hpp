#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "horncode/puiseux.hpp"
#include "horncode/rational.hpp"

namespace horncode {

// Arc t -> (x_1(t), ..., x_n(t)), t >= t0, each coordinate a Puiseux sum,
// optionally followed by a fixed linear map of R^n.
class CurveSampler {
 public:
  CurveSampler(std::vector<Puiseux> coords, double t0, std::string source = {});

  std::size_t dim() const { return coords_.size(); }
  double t0() const { return t0_; }
  const std::vector<Puiseux>& coords() const { return coords_; }
  const std::string& source() const { return source_; }

  void eval(double t, double* out) const;
  std::vector<double> operator()(double t) const;
  double norm(double t) const;

  // Unit limit direction of gamma(t)/|gamma(t)| as t -> infinity, read off the leading terms.
  std::vector<double> limit_direction() const;

  // Same arc composed with a row-major dim x dim matrix.
  CurveSampler transformed(const std::vector<double>& matrix) const;

 private:
  std::vector<Puiseux> coords_;
  double t0_;
  std::string source_;
  std::vector<double> transform_;  // empty = identity
};

// Grammar:
//   curve ::= coord (';' coord)+ ['@' number]
//   coord ::= ['+'|'-'] term (('+'|'-') term)*
//   term  ::= number ['*'] 't' ['^' '(' rational ')'] | number | 't' ['^' '(' rational ')']
// '@' sets t0 (default 1). Errors carry a 1-based column.
CurveSampler parse_curve(std::string_view text);

struct AnnulusOptions {
  std::size_t samples = 256;     // per curve per annulus, before refinement
  int refine_rounds = 40;
};

// dist(A_r^K(c1), A_r^K(c2)) with A_r^K = {y : r/K <= |y| <= K r}.
double annulus_distance(const CurveSampler& c1, const CurveSampler& c2, double K, double r,
                        const AnnulusOptions& opts = {});

struct NegInfinity {
  friend bool operator==(NegInfinity, NegInfinity) { return true; }
};
using ContactValue = std::variant<Rational, NegInfinity>;

struct ContactEstimate {
  double slope = 0.0;
  std::optional<ContactValue> rounded;
  double residual = 0.0;
  std::map<double, double> per_K;  // K -> slope
};

struct ContactOptions {
  std::vector<double> Ks{2.0, 3.0, 4.0};
  std::vector<double> radii;  // empty = 10 * 2^j, j = 0..11
  double abs_tol = 1e-9;      // coincidence threshold at the two largest radii
  double round_tol = 0.05;
  std::int64_t max_den = 12;
  AnnulusOptions annulus;
};

std::vector<double> default_contact_radii();
// "r0:factor:count" -> r0 * factor^j, j < count.
std::vector<double> parse_geometric_grid(std::string_view spec);

ContactEstimate estimate_contact(const CurveSampler& c1, const CurveSampler& c2,
                                 const ContactOptions& opts = {});

// True iff the limit directions at infinity differ by more than angle_tol radians.
bool cones_differ(const CurveSampler& c1, const CurveSampler& c2, double angle_tol = 1e-3);

std::string to_string(const ContactValue& v);

}  // namespace horncode
