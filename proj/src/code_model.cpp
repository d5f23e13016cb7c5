#include "horncode/code_model.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "horncode/error.hpp"

namespace horncode {

namespace {

const Rational kOne{1};

void sort_vector(BetaVector& v) { std::sort(v.begin(), v.end()); }

void check_component(const ComponentCode& c) {
  if (c.theta != 1 && c.theta != -1) throw Error(ErrorKind::InvalidCode, "theta must be +1 or -1");
  if (c.genus < 0) throw Error(ErrorKind::InvalidCode, "genus must be non-negative");
  for (const auto& b : c.ends) {
    if (b > kOne) throw Error(ErrorKind::OutOfRangeExponent, "end exponent " + b.str() + " > 1");
  }
  if (!std::is_sorted(c.ends.begin(), c.ends.end())) {
    throw Error(ErrorKind::InvalidCode, "end exponents not sorted");
  }
  for (const auto& [label, v] : c.attachments) {
    if (v.empty()) throw Error(ErrorKind::InvalidCode, "empty attachment at " + label);
    if (!std::is_sorted(v.begin(), v.end())) {
      throw Error(ErrorKind::InvalidCode, "horn exponents not sorted at " + label);
    }
    for (const auto& b : v) {
      if (b < kOne) {
        throw Error(ErrorKind::OutOfRangeExponent, "horn exponent " + b.str() + " < 1 at " + label);
      }
    }
  }
}

}  // namespace

ComponentCode make_component_code(int theta, int genus, std::vector<Rational> ends,
                                  std::map<std::string, std::vector<Rational>> attachments) {
  ComponentCode c;
  c.theta = theta;
  c.genus = genus;
  c.ends = std::move(ends);
  sort_vector(c.ends);
  for (auto& [label, v] : attachments) {
    sort_vector(v);
    c.attachments.emplace(label, std::move(v));
  }
  check_component(c);
  return c;
}

InnerLipschitzCode make_code(std::vector<ComponentCode> components) {
  InnerLipschitzCode code;
  code.components = std::move(components);
  for (const auto& c : code.components) {
    for (const auto& [label, v] : c.attachments) code.singular_labels.insert(label);
  }
  validate(code);
  return code;
}

void validate(const InnerLipschitzCode& code) {
  if (code.components.empty()) throw Error(ErrorKind::InvalidCode, "code has no components");
  std::set<std::string> used;
  for (const auto& c : code.components) {
    check_component(c);
    for (const auto& [label, v] : c.attachments) {
      if (!code.singular_labels.count(label)) {
        throw Error(ErrorKind::InvalidCode, "label " + label + " missing from singular_labels");
      }
      used.insert(label);
    }
  }
  for (const auto& label : code.singular_labels) {
    if (!used.count(label)) {
      throw Error(ErrorKind::InvalidCode, "label " + label + " not attached to any component");
    }
  }
}

std::size_t sheet_count(const InnerLipschitzCode& code, const std::string& label) {
  std::size_t n = 0;
  for (const auto& c : code.components) {
    if (auto it = c.attachments.find(label); it != c.attachments.end()) n += it->second.size();
  }
  return n;
}

InnerLipschitzCode normalize(const InnerLipschitzCode& code) {
  InnerLipschitzCode out = code;
  for (const auto& label : code.singular_labels) {
    if (sheet_count(code, label) != 1) continue;
    bool regular = false;
    for (const auto& c : code.components) {
      if (auto it = c.attachments.find(label); it != c.attachments.end()) {
        regular = it->second.front() == kOne;
      }
    }
    if (!regular) continue;
    out.singular_labels.erase(label);
    for (auto& c : out.components) c.attachments.erase(label);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Equivalence by direct backtracking over component and label bijections.

namespace {

bool same_shape(const ComponentCode& a, const ComponentCode& b) {
  if (a.theta != b.theta || a.genus != b.genus || a.ends != b.ends) return false;
  if (a.attachments.size() != b.attachments.size()) return false;
  std::vector<BetaVector> va, vb;
  for (const auto& [l, v] : a.attachments) va.push_back(v);
  for (const auto& [l, v] : b.attachments) vb.push_back(v);
  std::sort(va.begin(), va.end(), [](const auto& x, const auto& y) { return compare(x, y) < 0; });
  std::sort(vb.begin(), vb.end(), [](const auto& x, const auto& y) { return compare(x, y) < 0; });
  return va == vb;
}

std::vector<BetaVector> label_signature(const InnerLipschitzCode& code, const std::string& label) {
  std::vector<BetaVector> sig;
  for (const auto& c : code.components) {
    if (auto it = c.attachments.find(label); it != c.attachments.end()) sig.push_back(it->second);
  }
  std::sort(sig.begin(), sig.end(), [](const auto& x, const auto& y) { return compare(x, y) < 0; });
  return sig;
}

class EquivSearch {
 public:
  EquivSearch(const InnerLipschitzCode& a, const InnerLipschitzCode& b) : a_(a), b_(b) {
    used_b_.assign(b.components.size(), false);
    perm_.assign(a.components.size(), 0);
    for (const auto& l : a.singular_labels) sig_a_[l] = label_signature(a, l);
    for (const auto& l : b.singular_labels) sig_b_[l] = label_signature(b, l);
  }

  std::optional<EquivWitness> run() {
    if (!match_component(0)) return std::nullopt;
    EquivWitness w;
    w.component_bijection = perm_;
    w.point_bijection = sigma_;
    return w;
  }

 private:
  bool match_component(std::size_t i) {
    if (i == a_.components.size()) return sigma_.size() == a_.singular_labels.size();
    const auto& ca = a_.components[i];
    for (std::size_t j = 0; j < b_.components.size(); ++j) {
      if (used_b_[j] || !same_shape(ca, b_.components[j])) continue;
      used_b_[j] = true;
      perm_[i] = j;
      std::vector<std::string> labels;
      for (const auto& [l, v] : ca.attachments) labels.push_back(l);
      if (match_labels(i, j, labels, 0)) return true;
      used_b_[j] = false;
    }
    return false;
  }

  bool match_labels(std::size_t i, std::size_t j, const std::vector<std::string>& labels,
                    std::size_t k) {
    if (k == labels.size()) return match_component(i + 1);
    const auto& la = labels[k];
    const auto& va = a_.components[i].attachments.at(la);
    const auto& cb = b_.components[j];
    if (auto it = sigma_.find(la); it != sigma_.end()) {
      auto jt = cb.attachments.find(it->second);
      if (jt == cb.attachments.end() || jt->second != va) return false;
      return match_labels(i, j, labels, k + 1);
    }
    for (const auto& [lb, vb] : cb.attachments) {
      if (vb != va || sigma_inv_.count(lb) || sig_a_.at(la) != sig_b_.at(lb)) continue;
      sigma_[la] = lb;
      sigma_inv_[lb] = la;
      if (match_labels(i, j, labels, k + 1)) return true;
      sigma_.erase(la);
      sigma_inv_.erase(lb);
    }
    return false;
  }

  const InnerLipschitzCode& a_;
  const InnerLipschitzCode& b_;
  std::vector<bool> used_b_;
  std::vector<std::size_t> perm_;
  std::map<std::string, std::string> sigma_, sigma_inv_;
  std::map<std::string, std::vector<BetaVector>> sig_a_, sig_b_;
};

}  // namespace

std::optional<EquivWitness> code_equiv(const InnerLipschitzCode& a, const InnerLipschitzCode& b) {
  InnerLipschitzCode na = normalize(a);
  InnerLipschitzCode nb = normalize(b);
  if (na.components.size() != nb.components.size()) return std::nullopt;
  if (na.singular_labels.size() != nb.singular_labels.size()) return std::nullopt;
  return EquivSearch(na, nb).run();
}

InnerLipschitzCode apply_witness(const InnerLipschitzCode& a, const EquivWitness& w) {
  InnerLipschitzCode out;
  out.components.resize(a.components.size());
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    ComponentCode c = a.components[i];
    c.attachments.clear();
    for (const auto& [l, v] : a.components[i].attachments) c.attachments[w.point_bijection.at(l)] = v;
    out.components.at(w.component_bijection.at(i)) = std::move(c);
  }
  for (const auto& l : a.singular_labels) out.singular_labels.insert(w.point_bijection.at(l));
  return out;
}

// ---------------------------------------------------------------------------
// Canonical form: color refinement on the component/label incidence structure,
// individualizing one element of the first non-singleton cell at each branch and
// keeping the lexicographically smallest serialization over all leaves.

namespace {

struct Incidence {
  std::size_t other;   // label index (for components) or component index (for labels)
  std::size_t vector;  // rank of the attachment vector
};

struct Structure {
  std::vector<std::vector<Incidence>> comp_inc;
  std::vector<std::vector<Incidence>> label_inc;
  std::vector<std::size_t> comp_base;  // rank of (theta, genus, ends, attachment multiset)
};

using Key = std::vector<std::size_t>;

std::vector<std::size_t> rank_keys(const std::vector<Key>& keys) {
  std::vector<Key> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> ranks(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    ranks[i] = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), keys[i]) -
                                        sorted.begin());
  }
  return ranks;
}

std::size_t distinct(const std::vector<std::size_t>& colors) {
  std::set<std::size_t> s(colors.begin(), colors.end());
  return s.size();
}

void refine(const Structure& st, std::vector<std::size_t>& comp, std::vector<std::size_t>& lab) {
  while (true) {
    std::size_t before = distinct(comp) + distinct(lab);
    std::vector<Key> ck(comp.size()), lk(lab.size());
    for (std::size_t c = 0; c < comp.size(); ++c) {
      std::vector<std::pair<std::size_t, std::size_t>> nb;
      for (const auto& inc : st.comp_inc[c]) nb.emplace_back(lab[inc.other], inc.vector);
      std::sort(nb.begin(), nb.end());
      Key k{comp[c]};
      for (auto [x, y] : nb) {
        k.push_back(x);
        k.push_back(y);
      }
      ck[c] = std::move(k);
    }
    for (std::size_t l = 0; l < lab.size(); ++l) {
      std::vector<std::pair<std::size_t, std::size_t>> nb;
      for (const auto& inc : st.label_inc[l]) nb.emplace_back(comp[inc.other], inc.vector);
      std::sort(nb.begin(), nb.end());
      Key k{lab[l]};
      for (auto [x, y] : nb) {
        k.push_back(x);
        k.push_back(y);
      }
      lk[l] = std::move(k);
    }
    comp = rank_keys(ck);
    lab = rank_keys(lk);
    if (distinct(comp) + distinct(lab) == before) return;
  }
}

class Canonicalizer {
 public:
  Canonicalizer(const InnerLipschitzCode& code) : code_(code) {
    for (const auto& l : code.singular_labels) labels_.push_back(l);
    std::vector<BetaVector> vectors;
    for (const auto& c : code.components) {
      for (const auto& [l, v] : c.attachments) vectors.push_back(v);
    }
    auto less = [](const BetaVector& x, const BetaVector& y) { return compare(x, y) < 0; };
    std::sort(vectors.begin(), vectors.end(), less);
    vectors.erase(std::unique(vectors.begin(), vectors.end()), vectors.end());
    auto vector_rank = [&](const BetaVector& v) {
      return static_cast<std::size_t>(std::lower_bound(vectors.begin(), vectors.end(), v, less) -
                                      vectors.begin());
    };

    const std::size_t n = code.components.size();
    st_.comp_inc.resize(n);
    st_.label_inc.resize(labels_.size());
    for (std::size_t c = 0; c < n; ++c) {
      for (const auto& [l, v] : code.components[c].attachments) {
        std::size_t li = static_cast<std::size_t>(
            std::lower_bound(labels_.begin(), labels_.end(), l) - labels_.begin());
        std::size_t vi = vector_rank(v);
        st_.comp_inc[c].push_back({li, vi});
        st_.label_inc[li].push_back({c, vi});
      }
    }

    // Base order: (theta, genus, ends, sorted attachment multiset).
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto multiset = [&](std::size_t c) {
      std::vector<std::size_t> m;
      for (const auto& inc : st_.comp_inc[c]) m.push_back(inc.vector);
      std::sort(m.begin(), m.end());
      return m;
    };
    auto base_less = [&](std::size_t x, std::size_t y) {
      const auto& a = code.components[x];
      const auto& b = code.components[y];
      if (a.theta != b.theta) return a.theta < b.theta;
      if (a.genus != b.genus) return a.genus < b.genus;
      if (auto o = compare(a.ends, b.ends); o != 0) return o < 0;
      return multiset(x) < multiset(y);
    };
    std::stable_sort(order.begin(), order.end(), base_less);
    st_.comp_base.assign(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
      st_.comp_base[order[i]] =
          st_.comp_base[order[i - 1]] + (base_less(order[i - 1], order[i]) ? 1 : 0);
    }
  }

  InnerLipschitzCode run() {
    std::vector<std::size_t> comp = st_.comp_base;
    std::vector<std::size_t> lab(labels_.size(), 0);
    refine(st_, comp, lab);
    search(comp, lab);
    return best_code_;
  }

 private:
  void search(const std::vector<std::size_t>& comp, const std::vector<std::size_t>& lab) {
    // First non-singleton cell, labels before components.
    auto pick = [](const std::vector<std::size_t>& colors) -> std::optional<std::size_t> {
      std::map<std::size_t, std::size_t> count;
      for (auto c : colors) ++count[c];
      for (auto [color, n] : count) {
        if (n > 1) return color;
      }
      return std::nullopt;
    };
    if (auto cell = pick(lab)) {
      for (std::size_t x = 0; x < lab.size(); ++x) {
        if (lab[x] != *cell) continue;
        auto c2 = comp;
        auto l2 = individualize(lab, x);
        refine(st_, c2, l2);
        search(c2, l2);
      }
      return;
    }
    if (auto cell = pick(comp)) {
      for (std::size_t x = 0; x < comp.size(); ++x) {
        if (comp[x] != *cell) continue;
        auto c2 = individualize(comp, x);
        auto l2 = lab;
        refine(st_, c2, l2);
        search(c2, l2);
      }
      return;
    }
    leaf(comp, lab);
  }

  static std::vector<std::size_t> individualize(const std::vector<std::size_t>& colors,
                                                std::size_t x) {
    std::vector<Key> keys(colors.size());
    for (std::size_t i = 0; i < colors.size(); ++i) keys[i] = {colors[i], i == x ? 0u : 1u};
    return rank_keys(keys);
  }

  void leaf(const std::vector<std::size_t>& comp, const std::vector<std::size_t>& lab) {
    std::map<std::string, std::string> rename;
    for (std::size_t l = 0; l < labels_.size(); ++l) {
      rename[labels_[l]] = "s" + std::to_string(lab[l] + 1);
    }
    InnerLipschitzCode out;
    out.components.resize(code_.components.size());
    for (std::size_t c = 0; c < comp.size(); ++c) {
      ComponentCode cc = code_.components[c];
      cc.attachments.clear();
      for (const auto& [l, v] : code_.components[c].attachments) cc.attachments[rename.at(l)] = v;
      out.components[comp[c]] = std::move(cc);
    }
    for (const auto& [from, to] : rename) out.singular_labels.insert(to);
    std::string s = serialize(out);
    if (!have_best_ || s < best_) {
      best_ = std::move(s);
      best_code_ = std::move(out);
      have_best_ = true;
    }
  }

  const InnerLipschitzCode& code_;
  std::vector<std::string> labels_;
  Structure st_;
  bool have_best_ = false;
  std::string best_;
  InnerLipschitzCode best_code_;
};

}  // namespace

InnerLipschitzCode canonicalize(const InnerLipschitzCode& code) {
  validate(code);
  return Canonicalizer(normalize(code)).run();
}

InnerLipschitzCode curve_code(const std::vector<CurveComponent>& components,
                              const std::map<std::string, std::map<std::size_t, int>>& incidences) {
  std::vector<ComponentCode> out;
  for (const auto& c : components) {
    if (c.genus < 0 || c.end_count < 0) throw Error(ErrorKind::BadParams, "negative genus or end count");
    ComponentCode cc;
    cc.theta = 1;
    cc.genus = c.genus;
    cc.ends.assign(static_cast<std::size_t>(c.end_count), kOne);
    out.push_back(std::move(cc));
  }
  for (const auto& [label, inc] : incidences) {
    if (inc.empty()) throw Error(ErrorKind::EmptyIncidence, "label " + label + " has no component");
    for (const auto& [index, sheets] : inc) {
      if (index >= out.size()) throw Error(ErrorKind::BadParams, "component index out of range");
      if (sheets < 1) throw Error(ErrorKind::BadParams, "sheet count must be >= 1");
      out[index].attachments[label].assign(static_cast<std::size_t>(sheets), kOne);
    }
  }
  return normalize(make_code(std::move(out)));
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json rationals_to_json(const std::vector<Rational>& values) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : values) arr.push_back(r.str());
  return arr;
}

std::vector<Rational> rationals_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidCode, "expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& v : j) {
    if (v.is_string()) {
      out.push_back(Rational::parse(v.get<std::string>()));
    } else if (v.is_number_integer()) {
      out.emplace_back(v.get<std::int64_t>());
    } else {
      throw Error(ErrorKind::InvalidCode, "rational must be a \"p/q\" string");
    }
  }
  return out;
}

nlohmann::json to_json(const InnerLipschitzCode& code) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : code.components) {
    nlohmann::json att = nlohmann::json::object();
    for (const auto& [l, v] : c.attachments) att[l] = rationals_to_json(v);
    comps.push_back({{"theta", c.theta},
                     {"genus", c.genus},
                     {"ends", rationals_to_json(c.ends)},
                     {"attachments", att}});
  }
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& l : code.singular_labels) labels.push_back(l);
  return {{"components", comps}, {"singular_labels", labels}};
}

InnerLipschitzCode code_from_json(const nlohmann::json& j) {
  try {
    InnerLipschitzCode code;
    for (const auto& jc : j.at("components")) {
      std::map<std::string, std::vector<Rational>> att;
      if (jc.contains("attachments")) {
        for (const auto& [l, v] : jc.at("attachments").items()) att[l] = rationals_from_json(v);
      }
      code.components.push_back(make_component_code(
          jc.at("theta").get<int>(), jc.at("genus").get<int>(),
          rationals_from_json(jc.value("ends", nlohmann::json::array())), std::move(att)));
    }
    if (j.contains("singular_labels")) {
      for (const auto& l : j.at("singular_labels")) code.singular_labels.insert(l.get<std::string>());
    } else {
      for (const auto& c : code.components) {
        for (const auto& [l, v] : c.attachments) code.singular_labels.insert(l);
      }
    }
    validate(code);
    return code;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidCode, e.what());
  }
}

std::string serialize(const InnerLipschitzCode& code) { return to_json(code).dump(); }

}  // namespace horncode
