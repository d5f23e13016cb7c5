#include "horncode/random_codes.hpp"

#include <algorithm>
#include <numeric>

namespace horncode {

namespace {

Rational pick(Rng& rng, const std::vector<Rational>& from) {
  std::uniform_int_distribution<std::size_t> d(0, from.size() - 1);
  return from[d(rng)];
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

InnerLipschitzCode random_code(Rng& rng, int max_components, int max_labels) {
  static const std::vector<Rational> tube{Rational(-1), Rational(0), Rational(1, 3), Rational(1, 2),
                                          Rational(1)};
  static const std::vector<Rational> horn{Rational(1), Rational(3, 2), Rational(2)};

  const int n = uniform(rng, 1, max_components);
  const int m = uniform(rng, 0, max_labels);
  std::vector<ComponentCode> comps(static_cast<std::size_t>(n));
  for (auto& c : comps) {
    c.theta = uniform(rng, 0, 3) == 0 ? -1 : 1;
    c.genus = uniform(rng, 0, 1);
    const int e = uniform(rng, 0, 2);
    for (int i = 0; i < e; ++i) c.ends.push_back(pick(rng, tube));
    std::sort(c.ends.begin(), c.ends.end());
  }
  for (int l = 0; l < m; ++l) {
    const std::string label = "p" + std::to_string(l);
    const int incident = uniform(rng, 1, std::min(n, 2));
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int k = 0; k < incident; ++k) {
      BetaVector v;
      const int sheets = uniform(rng, 1, 2);
      for (int s = 0; s < sheets; ++s) v.push_back(pick(rng, horn));
      std::sort(v.begin(), v.end());
      comps[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])].attachments[label] = v;
    }
  }
  return make_code(std::move(comps));
}

InnerLipschitzCode shuffle_code(const InnerLipschitzCode& code, Rng& rng) {
  std::vector<std::string> fresh;
  for (std::size_t i = 0; i < code.singular_labels.size(); ++i) {
    fresh.push_back("q" + std::to_string(rng() % 100000) + "_" + std::to_string(i));
  }
  std::shuffle(fresh.begin(), fresh.end(), rng);
  std::map<std::string, std::string> rename;
  std::size_t k = 0;
  for (const auto& l : code.singular_labels) rename[l] = fresh[k++];

  std::vector<std::size_t> perm(code.components.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  InnerLipschitzCode out;
  out.components.resize(code.components.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    ComponentCode c = code.components[i];
    c.attachments.clear();
    for (const auto& [l, v] : code.components[i].attachments) c.attachments[rename.at(l)] = v;
    out.components[perm[i]] = std::move(c);
  }
  for (const auto& [from, to] : rename) out.singular_labels.insert(to);
  return out;
}

}  // namespace horncode
