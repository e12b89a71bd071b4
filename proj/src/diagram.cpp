#include "nonadm/diagram.hpp"

#include <algorithm>

#include "nonadm/error.hpp"
#include "nonadm/rng.hpp"

namespace nonadm::diagram {

using weights::make_set;

CharacterRegistry CharacterRegistry::build(const weights::GenericParams& params,
                                           const weights::WeightTable& table) {
  if (params.f != 3) throw Error(Errc::InvalidConfig, "the diagram is defined for f = 3");
  CharacterRegistry reg;
  reg.params_ = params;
  reg.special_ = weights::special_characters(params, table);

  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    const OrbitIndexSet J{3, mask};
    auto w = weights::weight_tuple(J, params, table);
    reg.socle_.push_back(weights::encode_character(w.tuple, params, w.twist));
    reg.weights_.push_back(std::move(w));
  }

  std::vector<std::pair<Character, CharInfo>> all;
  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    const OrbitIndexSet J{3, mask};
    all.push_back({reg.socle_[mask], {Role::Socle, J, "chi_" + J.to_string()}});
  }
  all.push_back({reg.special_.chi1, {Role::Chi1, {}, "chi_1"}});
  all.push_back({weights::char_swap(reg.special_.chi1), {Role::Chi1Swap, {}, "chi_1^s"}});
  all.push_back({reg.special_.chi2, {Role::Chi2, {}, "chi_2"}});
  all.push_back({weights::char_swap(reg.special_.chi2), {Role::Chi2Swap, {}, "chi_2^s"}});
  for (const auto& [chi, info] : all) reg.registered_.push_back(chi);
  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    const OrbitIndexSet J{3, mask};
    all.push_back({weights::char_swap(reg.socle_[mask]), {Role::SocleSwap, J, "chi_" + J.to_string() + "^s"}});
  }

  // Multiplicity freeness, which also separates the six Pi~ cases.
  for (const auto& [chi, info] : all) {
    auto [it, inserted] = reg.info_.emplace(chi, info);
    if (!inserted) {
      throw Error(Errc::CharacterClash, info.name + " and " + it->second.name + " coincide at " +
                                            chi.to_string());
    }
  }

  reg.notes_.push_back("cyc(chi_J) = chi_delta(J) for every J");
  reg.notes_.push_back("cyc(chi_2) = chi_{0}");
  reg.notes_.push_back(
      "cyc(chi_1) = chi_{}: cyc(cyc(chi_1)) = cyc(chi_2) = chi_{0} and delta is injective with "
      "delta({}) = {0}");
  reg.notes_.push_back("cyc undefined on chi_1^s, chi_2^s and socle swaps");
  return reg;
}

Character CharacterRegistry::socle(OrbitIndexSet J) const { return socle_.at(J.mask); }

const CharInfo& CharacterRegistry::info(const Character& chi) const {
  auto it = info_.find(chi);
  if (it == info_.end()) throw Error(Errc::UnknownCharacter, chi.to_string() + " is not registered");
  return it->second;
}

std::optional<Character> CharacterRegistry::cyc(const Character& chi) const {
  const auto& i = info(chi);
  switch (i.role) {
    case Role::Socle: return socle(weights::delta(i.set));
    case Role::Chi1: return socle(make_set(3, {}));
    case Role::Chi2: return socle(make_set(3, {0}));
    default: return std::nullopt;
  }
}

std::vector<OrbitIndexSet> CharacterRegistry::blocks() const {
  std::vector<OrbitIndexSet> out;
  for (std::uint32_t mask = 0; mask < 8; ++mask) out.push_back({3, mask});
  return out;
}

std::vector<Character> CharacterRegistry::incident(OrbitIndexSet sigma) const {
  std::vector<Character> out{socle(sigma)};
  if (sigma == make_set(3, {2})) out.push_back(chi1());
  if (sigma == make_set(3, {})) out.push_back(weights::char_swap(chi1()));
  if (sigma == make_set(3, {0, 1})) out.push_back(chi2());
  if (sigma == make_set(3, {0})) out.push_back(weights::char_swap(chi2()));
  return out;
}

std::optional<OrbitIndexSet> CharacterRegistry::block_of(const Character& chi) const {
  const auto& i = info(chi);
  switch (i.role) {
    case Role::Socle: return i.set;
    case Role::Chi1: return make_set(3, {2});
    case Role::Chi1Swap: return make_set(3, {});
    case Role::Chi2: return make_set(3, {0, 1});
    case Role::Chi2Swap: return make_set(3, {0});
    case Role::SocleSwap: return std::nullopt;
  }
  return std::nullopt;
}

void CharacterRegistry::attach_s_values(const std::map<Character, int>& table) {
  for (const auto& chi : registered_) {
    if (auto it = table.find(chi); it != table.end()) s_values_[chi] = it->second;
  }
}

std::optional<int> CharacterRegistry::s_value(const Character& chi) const {
  if (auto it = s_values_.find(chi); it != s_values_.end()) return it->second;
  return std::nullopt;
}

std::string scale_name(ScaleKind s) {
  switch (s) {
    case ScaleKind::One: return "one";
    case ScaleKind::Lambda: return "lambda";
    case ScaleKind::LambdaInverse: return "lambda-inverse";
  }
  return "?";
}

TransportSpec transport_of(const Character& chi, const CharacterRegistry& registry) {
  const auto& i = registry.info(chi);
  const Character plus = registry.chi_plus(), minus = registry.chi_minus();
  if (chi == plus) return {+1, ScaleKind::One};
  if (chi == weights::char_swap(plus)) return {-1, ScaleKind::One};
  if (chi == minus) return {-1, ScaleKind::One};
  if (chi == weights::char_swap(minus)) return {+1, ScaleKind::One};
  if (i.role == Role::Chi1) return {0, ScaleKind::Lambda};
  if (i.role == Role::Chi1Swap) return {0, ScaleKind::LambdaInverse};
  return {0, ScaleKind::One};
}

std::string mode_name(LambdaMode m) {
  switch (m) {
    case LambdaMode::Rational: return "rational";
    case LambdaMode::Twisted: return "twisted";
    case LambdaMode::Spanning: return "spanning";
    case LambdaMode::Degenerate: return "degenerate";
  }
  return "?";
}

LambdaMode parse_mode(const std::string& s) {
  if (s == "rational") return LambdaMode::Rational;
  if (s == "twisted") return LambdaMode::Twisted;
  if (s == "spanning") return LambdaMode::Spanning;
  if (s == "degenerate") return LambdaMode::Degenerate;
  throw Error(Errc::InvalidConfig, "unknown lambda mode '" + s + "'");
}

LambdaSeq::LambdaSeq(LambdaMode mode, int window, FieldPtr base, std::vector<FieldElem> values)
    : mode_(mode), window_(window), base_(std::move(base)), values_(std::move(values)) {
  if (window_ < 0) throw Error(Errc::InvalidConfig, "negative window");
  if (values_.size() != static_cast<std::size_t>(2 * window_ + 1)) {
    throw Error(Errc::InvalidLambda, "expected " + std::to_string(2 * window_ + 1) + " values");
  }
  ext_ = values_.front().field();
}

const FieldElem& LambdaSeq::at(int i) const {
  if (!in_window(i)) {
    throw Error(Errc::WindowOverflow, "index " + std::to_string(i) + " outside [-" +
                                          std::to_string(window_) + ", " + std::to_string(window_) + "]");
  }
  return values_[static_cast<std::size_t>(i + window_)];
}

void LambdaSeq::validate() const {
  for (const auto& v : values_) {
    if (v.field() != ext_) throw Error(Errc::MixedFields, "lambda values from different fields");
    if (v.is_zero()) throw Error(Errc::InvalidLambda, "lambda values must be nonzero");
  }
  if (ext_->parent() != base_) throw Error(Errc::InvalidLambda, "lambda field does not extend the base");
  auto fail = [&](const std::string& why) {
    throw Error(Errc::InvalidLambda, "mode " + mode_name(mode_) + ": " + why);
  };
  switch (mode_) {
    case LambdaMode::Rational:
      for (int i = -window_; i <= window_; ++i)
        if (!ext_->in_parent(at(i).code())) fail("lambda_" + std::to_string(i) + " not in the base field");
      break;
    case LambdaMode::Twisted:
    case LambdaMode::Spanning: {
      if (!ext_->in_parent(at(0).code())) fail("lambda_0 not in the base field");
      for (int i = -window_; i <= window_; ++i)
        if (i != 0 && at(i) == at(0)) fail("lambda_" + std::to_string(i) + " equals lambda_0");
      if (mode_ == LambdaMode::Spanning) {
        const auto span = gf::subfield_span(values_, base_);
        if (span.dimension * base_->degree() != ext_->degree()) {
          fail("values span only dimension " + std::to_string(span.dimension));
        }
      }
      break;
    }
    case LambdaMode::Degenerate:
      break;
  }
}

LambdaSeq LambdaSeq::from_values(LambdaMode mode, int window, const FieldPtr& base,
                                 std::vector<FieldElem> values) {
  LambdaSeq seq(mode, window, base, std::move(values));
  seq.validate();
  return seq;
}

LambdaSeq LambdaSeq::generate(LambdaMode mode, int window, const FieldPtr& base, const FieldPtr& ext,
                              std::uint64_t seed, const std::map<int, FieldElem>& overrides) {
  Rng rng(seed);
  const std::size_t n = static_cast<std::size_t>(2 * window + 1);
  auto idx = [window](int i) { return static_cast<std::size_t>(i + window); };
  auto random_base = [&] {
    return FieldElem(ext, ext->embed_code(static_cast<gf::Code>(1 + rng.below(base->size() - 1))));
  };
  auto random_unit = [&] { return FieldElem(ext, static_cast<gf::Code>(1 + rng.below(ext->size() - 1))); };

  std::vector<FieldElem> values(n, FieldElem::one(ext));
  for (int attempt = 0;; ++attempt) {
    switch (mode) {
      case LambdaMode::Degenerate:
        break;
      case LambdaMode::Rational: {
        // Distinct base-field values as far as the window allows, lambda_0 first.
        std::vector<gf::Code> pool;
        for (gf::Code a = 1; a < base->size(); ++a) pool.push_back(ext->embed_code(a));
        for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.below(i)]);
        std::size_t k = 0;
        values[idx(0)] = FieldElem(ext, pool[k++ % pool.size()]);
        for (int d = 1; d <= window; ++d) {
          values[idx(d)] = FieldElem(ext, pool[k++ % pool.size()]);
          values[idx(-d)] = FieldElem(ext, pool[k++ % pool.size()]);
        }
        break;
      }
      case LambdaMode::Twisted:
      case LambdaMode::Spanning: {
        values[idx(0)] = random_base();
        for (int i = -window; i <= window; ++i) {
          if (i == 0) continue;
          FieldElem v = random_unit();
          while (v == values[idx(0)]) v = random_unit();
          values[idx(i)] = v;
        }
        break;
      }
    }
    for (const auto& [i, v] : overrides) {
      if (i < -window || i > window) throw Error(Errc::WindowOverflow, "lambda override outside window");
      values[idx(i)] = v;
    }
    if (mode != LambdaMode::Spanning || !overrides.empty() || attempt > 64) break;
    if (gf::subfield_span(values, base).dimension * base->degree() == ext->degree()) break;
  }
  LambdaSeq seq(mode, window, base, std::move(values));
  seq.validate();
  return seq;
}

CoeffVector CoeffVector::unit(int i, const FieldElem& value) {
  CoeffVector c;
  c.set(i, value);
  return c;
}

void CoeffVector::set(int i, const FieldElem& value) {
  if (value.is_zero()) {
    entries_.erase(i);
  } else {
    entries_.insert_or_assign(i, value);
  }
}

std::optional<FieldElem> CoeffVector::get(int i) const {
  if (auto it = entries_.find(i); it != entries_.end()) return it->second;
  return std::nullopt;
}

std::vector<int> CoeffVector::support() const {
  std::vector<int> out;
  for (const auto& [i, v] : entries_) out.push_back(i);
  return out;
}

CoeffVector CoeffVector::shifted(int k) const {
  CoeffVector out;
  for (const auto& [i, v] : entries_) out.entries_.emplace(i + k, v);
  return out;
}

CoeffVector CoeffVector::scaled(const FieldElem& u) const {
  CoeffVector out;
  for (const auto& [i, v] : entries_) out.set(i, v * u);
  return out;
}

CoeffVector CoeffVector::normalized() const {
  if (entries_.empty()) return *this;
  return scaled(entries_.begin()->second.inv());
}

std::string CoeffVector::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [i, v] : entries_) {
    if (!first) out += ',';
    out += std::to_string(i) + ":" + gf::format_elem(v);
    first = false;
  }
  return out + "}";
}

bool CoeffVector::operator<(const CoeffVector& o) const {
  return std::lexicographical_compare(
      entries_.begin(), entries_.end(), o.entries_.begin(), o.entries_.end(),
      [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first : a.second.code() < b.second.code();
      });
}

CoeffVector apply_transport(const TransportSpec& t, const CoeffVector& c, const LambdaSeq& lambda) {
  CoeffVector out;
  for (const auto& [i, v] : c.entries()) {
    const int j = i + t.shift;
    if (!lambda.in_window(i) || !lambda.in_window(j)) {
      throw Error(Errc::WindowOverflow, "transport of index " + std::to_string(i) + " to " +
                                            std::to_string(j) + " leaves the working window");
    }
    switch (t.scale) {
      case ScaleKind::One: out.set(j, v); break;
      case ScaleKind::Lambda: out.set(j, v * lambda.at(i)); break;
      case ScaleKind::LambdaInverse: out.set(j, v / lambda.at(i)); break;
    }
  }
  return out;
}

Transported pi_tilde(const Character& chi, const CoeffVector& c, const LambdaSeq& lambda,
                     const CharacterRegistry& registry) {
  return {weights::char_swap(chi), apply_transport(transport_of(chi, registry), c, lambda)};
}

Transported s_pi_tilde(const Character& chi, const CoeffVector& c, const LambdaSeq& lambda,
                       const CharacterRegistry& registry) {
  const auto next = registry.cyc(chi);
  if (!next) throw Error(Errc::CycleUndefined, "cyc is not defined on " + registry.name(chi));
  return {*next, apply_transport(transport_of(chi, registry), c, lambda)};
}

TwistReport twist_identity_check(const CharacterRegistry& registry, const LambdaSeq& lambda,
                                 const std::vector<CoeffVector>& samples) {
  TwistReport report;
  const Character target = registry.socle(make_set(3, {0}));
  for (const auto& c : samples) {
    TwistSample s;
    s.input = c;
    const auto step1 = s_pi_tilde(registry.chi1(), c, lambda, registry);
    const auto path1 = s_pi_tilde(step1.chi, step1.coeffs, lambda, registry);
    const auto path2 = s_pi_tilde(registry.chi2(), c, lambda, registry);
    s.chi1_path_end = path1.chi;
    s.chi2_path_end = path2.chi;
    s.ratios_match = path1.coeffs.support() == path2.coeffs.support();
    for (const auto& [i, v] : path2.coeffs.entries()) {
      const auto w = path1.coeffs.get(i);
      if (!w || *w != v * lambda.at(i)) s.ratios_match = false;
    }
    if (path1.chi != target || path2.chi != target || !s.ratios_match) report.ok = false;
    report.samples.push_back(std::move(s));
  }
  return report;
}

}  // namespace nonadm::diagram
