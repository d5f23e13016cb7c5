#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "horncode/rational.hpp"

namespace horncode {

// Sorted ascending; ties allowed.
using BetaVector = std::vector<Rational>;

// One closure of a connected component of the inner-Lipschitz-regular part.
// genus is the handle count when theta = +1 and the cross-cap count when theta = -1.
struct ComponentCode {
  int theta = 1;
  int genus = 0;
  BetaVector ends;                                // tube exponents, all <= 1
  std::map<std::string, BetaVector> attachments;  // horn exponents per singular label, all >= 1

  friend bool operator==(const ComponentCode&, const ComponentCode&) = default;
};

struct InnerLipschitzCode {
  std::vector<ComponentCode> components;
  std::set<std::string> singular_labels;

  friend bool operator==(const InnerLipschitzCode&, const InnerLipschitzCode&) = default;
};

// component_bijection[i] is the index in b matched to component i of a;
// point_bijection maps labels of a to labels of b. Both refer to normalized codes.
struct EquivWitness {
  std::vector<std::size_t> component_bijection;
  std::map<std::string, std::string> point_bijection;
};

ComponentCode make_component_code(int theta, int genus, std::vector<Rational> ends,
                                  std::map<std::string, std::vector<Rational>> attachments = {});

// Builds a code with singular_labels taken from the attachments; validates it.
InnerLipschitzCode make_code(std::vector<ComponentCode> components);

// Throws InvalidCode / OutOfRangeExponent when an invariant is broken.
void validate(const InnerLipschitzCode& code);

// ℓ(X,p): total number of sheets at a label across components.
std::size_t sheet_count(const InnerLipschitzCode& code, const std::string& label);

// Drops labels with a single sheet of horn exponent 1 (inner Lipschitz regular points).
InnerLipschitzCode normalize(const InnerLipschitzCode& code);

// Decides equivalence by direct search for a component/label bijection on normalized codes.
std::optional<EquivWitness> code_equiv(const InnerLipschitzCode& a, const InnerLipschitzCode& b);

// Applies a witness to a (normalized) code: reorders components to b's order and renames labels.
InnerLipschitzCode apply_witness(const InnerLipschitzCode& a, const EquivWitness& w);

// Normalized canonical representative; labels renamed s1, s2, ...
InnerLipschitzCode canonicalize(const InnerLipschitzCode& code);

// Code of a complex algebraic curve: components are (genus, end count); incidences map a
// singular label to {component index -> number of branches through it}.
struct CurveComponent {
  int genus = 0;
  int end_count = 0;
};
InnerLipschitzCode curve_code(const std::vector<CurveComponent>& components,
                              const std::map<std::string, std::map<std::size_t, int>>& incidences);

nlohmann::json to_json(const InnerLipschitzCode& code);
InnerLipschitzCode code_from_json(const nlohmann::json& j);
// Compact JSON with sorted keys, components in stored order.
std::string serialize(const InnerLipschitzCode& code);

nlohmann::json rationals_to_json(const std::vector<Rational>& values);
std::vector<Rational> rationals_from_json(const nlohmann::json& j);

}  // namespace horncode
