#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "horncode/code_model.hpp"
#include "horncode/puiseux.hpp"

namespace horncode {

// A beta-strip at infinity, given by its exponent or by the profile f whose
// region {x >= a, 0 <= y <= f(x)} it is.
struct StripSpec {
  Rational beta;
  std::optional<Puiseux> profile;
};

// One component: compact part (theta, genus), ends as cyclic sequences of
// strips glued along shared boundary arcs, and singular-point sheets.
struct StrataSpec {
  int theta = 1;
  int genus = 0;
  std::vector<std::vector<StripSpec>> ends;
  std::map<std::string, BetaVector> singular_points;
};

Rational strip_exponent_from_profile(const Puiseux& profile);
StripSpec strip_from_profile(const Puiseux& profile);

// Exponent of a chain of strips glued consecutively along arcs.
Rational glue_strips(std::span<const Rational> chain);
// Exponent of the tube obtained by closing a cycle of strips.
Rational tube_from_strips(std::span<const Rational> cycle);

InnerLipschitzCode code_from_strata(const StrataSpec& spec);
// Multi-component surfaces; labels shared between components denote the same point.
InnerLipschitzCode code_from_strata(const std::vector<StrataSpec>& components);

// Accepts either a single component object or {"components": [...]}.
std::vector<StrataSpec> strata_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StrataSpec& spec);

}  // namespace horncode
