#include "horncode/strata.hpp"

#include <algorithm>

#include "horncode/error.hpp"

namespace horncode {

namespace {

const Rational kOne{1};

Rational max_fold(std::span<const Rational> values, ErrorKind empty_kind, const char* what) {
  if (values.empty()) throw Error(empty_kind, what);
  for (const auto& b : values) {
    if (b > kOne) throw Error(ErrorKind::OutOfRangeExponent, "strip exponent " + b.str() + " > 1");
  }
  return *std::max_element(values.begin(), values.end());
}

}  // namespace

Rational strip_exponent_from_profile(const Puiseux& profile) {
  if (profile.is_zero()) throw Error(ErrorKind::InvalidProfile, "zero profile");
  const auto& lead = profile.leading();
  if (!(lead.coeff > 0)) throw Error(ErrorKind::InvalidProfile, "leading coefficient must be positive");
  if (lead.exponent > kOne) {
    throw Error(ErrorKind::InvalidProfile, "leading exponent " + lead.exponent.str() + " > 1");
  }
  return lead.exponent;
}

StripSpec strip_from_profile(const Puiseux& profile) {
  return StripSpec{strip_exponent_from_profile(profile), profile};
}

Rational glue_strips(std::span<const Rational> chain) {
  return max_fold(chain, ErrorKind::EmptyChain, "empty strip chain");
}

Rational tube_from_strips(std::span<const Rational> cycle) {
  return max_fold(cycle, ErrorKind::EmptyCycle, "empty strip cycle");
}

InnerLipschitzCode code_from_strata(const StrataSpec& spec) {
  return code_from_strata(std::vector<StrataSpec>{spec});
}

InnerLipschitzCode code_from_strata(const std::vector<StrataSpec>& components) {
  std::vector<ComponentCode> out;
  for (const auto& spec : components) {
    std::vector<Rational> ends;
    for (const auto& cycle : spec.ends) {
      std::vector<Rational> betas;
      for (const auto& strip : cycle) betas.push_back(strip.beta);
      ends.push_back(tube_from_strips(betas));
    }
    std::map<std::string, std::vector<Rational>> att(spec.singular_points.begin(),
                                                     spec.singular_points.end());
    out.push_back(make_component_code(spec.theta, spec.genus, std::move(ends), std::move(att)));
  }
  return normalize(make_code(std::move(out)));
}

namespace {

StripSpec strip_from_json(const nlohmann::json& j) {
  if (j.is_string()) return StripSpec{Rational::parse(j.get<std::string>()), std::nullopt};
  if (j.is_number_integer()) return StripSpec{Rational(j.get<std::int64_t>()), std::nullopt};
  if (j.is_object() && j.contains("profile")) {
    std::vector<PuiseuxTerm> terms;
    for (const auto& jt : j.at("profile")) {
      if (!jt.is_array() || jt.size() != 2) throw Error(ErrorKind::InvalidProfile, "profile term must be [c, \"p/q\"]");
      double c = jt[0].is_string() ? std::stod(jt[0].get<std::string>()) : jt[0].get<double>();
      Rational e = jt[1].is_string() ? Rational::parse(jt[1].get<std::string>())
                                     : Rational(jt[1].get<std::int64_t>());
      terms.push_back({c, e});
    }
    return strip_from_profile(Puiseux(std::move(terms)));
  }
  throw Error(ErrorKind::InvalidCode, "strip must be \"p/q\" or {\"profile\": [...]}");
}

StrataSpec component_from_json(const nlohmann::json& j) {
  StrataSpec spec;
  spec.theta = j.at("theta").get<int>();
  spec.genus = j.at("genus").get<int>();
  for (const auto& cycle : j.value("ends", nlohmann::json::array())) {
    std::vector<StripSpec> strips;
    for (const auto& s : cycle) strips.push_back(strip_from_json(s));
    if (strips.empty()) throw Error(ErrorKind::EmptyCycle, "end with no strips");
    spec.ends.push_back(std::move(strips));
  }
  if (j.contains("singular_points")) {
    for (const auto& [label, v] : j.at("singular_points").items()) {
      spec.singular_points[label] = rationals_from_json(v);
    }
  }
  return spec;
}

}  // namespace

std::vector<StrataSpec> strata_from_json(const nlohmann::json& j) {
  try {
    std::vector<StrataSpec> out;
    if (j.contains("components")) {
      for (const auto& jc : j.at("components")) out.push_back(component_from_json(jc));
    } else {
      out.push_back(component_from_json(j));
    }
    if (out.empty()) throw Error(ErrorKind::InvalidCode, "no components");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidCode, e.what());
  }
}

nlohmann::json to_json(const StrataSpec& spec) {
  nlohmann::json ends = nlohmann::json::array();
  for (const auto& cycle : spec.ends) {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& s : cycle) c.push_back(s.beta.str());
    ends.push_back(c);
  }
  nlohmann::json sp = nlohmann::json::object();
  for (const auto& [l, v] : spec.singular_points) sp[l] = rationals_to_json(v);
  return {{"theta", spec.theta}, {"genus", spec.genus}, {"ends", ends}, {"singular_points", sp}};
}

}  // namespace horncode
