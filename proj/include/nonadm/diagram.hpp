#pragma once

// The infinite diagram D(lambda) at the level its irreducibility argument
// works with: characters of D_1(rho), their block incidences, the cycle map
// realised by S o Pi, the index-shifting involution Pi~, and finitely
// supported coefficient vectors (c_i) indexing copies of D_0(rho).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nonadm/gf.hpp"
#include "nonadm/weights.hpp"

namespace nonadm::diagram {

using gf::FieldElem;
using gf::FieldPtr;
using weights::Character;
using weights::OrbitIndexSet;

enum class Role { Socle, SocleSwap, Chi1, Chi1Swap, Chi2, Chi2Swap };

struct CharInfo {
  Role role = Role::Socle;
  OrbitIndexSet set;  // the J of chi_J for Socle / SocleSwap
  std::string name;
};

class CharacterRegistry {
 public:
  static CharacterRegistry build(const weights::GenericParams& params,
                                 const weights::WeightTable& table);

  const weights::GenericParams& params() const { return params_; }

  Character socle(OrbitIndexSet J) const;
  Character chi_plus() const { return socle(weights::make_set(3, {1})); }
  Character chi_minus() const { return socle(weights::make_set(3, {0, 1})); }
  Character chi1() const { return special_.chi1; }
  Character chi2() const { return special_.chi2; }
  const weights::SpecialCharacters& special() const { return special_; }

  /// The registered characters: 8 socle characters by mask, then chi_1,
  /// chi_1^s, chi_2, chi_2^s.
  const std::vector<Character>& registered() const { return registered_; }

  /// Registered characters and the swaps of socle characters.
  bool knows(const Character& chi) const { return info_.count(chi) != 0; }
  const CharInfo& info(const Character& chi) const;
  std::string name(const Character& chi) const { return info(chi).name; }

  /// S o Pi on characters: chi_J -> chi_delta(J), chi_1 -> chi_{}, chi_2 -> chi_{0}.
  std::optional<Character> cyc(const Character& chi) const;

  std::vector<OrbitIndexSet> blocks() const;
  /// Characters of D_{0,sigma}(rho) pinned by the construction, socle first.
  std::vector<Character> incident(OrbitIndexSet sigma) const;
  /// Block containing a registered character, if pinned.
  std::optional<OrbitIndexSet> block_of(const Character& chi) const;

  const std::vector<weights::WeightTuple>& weights() const { return weights_; }
  const std::vector<std::string>& notes() const { return notes_; }

  /// Optional s(chi) values from the finite oracle, keyed by character.
  void attach_s_values(const std::map<Character, int>& table);
  std::optional<int> s_value(const Character& chi) const;

 private:
  weights::GenericParams params_;
  weights::SpecialCharacters special_;
  std::vector<weights::WeightTuple> weights_;
  std::vector<Character> socle_;  // by mask
  std::vector<Character> registered_;
  std::map<Character, CharInfo> info_;
  std::map<Character, int> s_values_;
  std::vector<std::string> notes_;
};

enum class ScaleKind { One, Lambda, LambdaInverse };

struct TransportSpec {
  int shift = 0;
  ScaleKind scale = ScaleKind::One;

  bool operator==(const TransportSpec&) const = default;
};

std::string scale_name(ScaleKind s);

/// chi_+ -> (+1, one), chi_+^s -> (-1, one), chi_- -> (-1, one),
/// chi_-^s -> (+1, one), chi_1 -> (0, lambda), chi_1^s -> (0, lambda^-1),
/// anything else known -> (0, one).
TransportSpec transport_of(const Character& chi, const CharacterRegistry& registry);

enum class LambdaMode { Rational, Twisted, Spanning, Degenerate };
std::string mode_name(LambdaMode m);
LambdaMode parse_mode(const std::string& s);

/// lambda_i for i in the working window [-W, W], values in GF(q^m)^x.
class LambdaSeq {
 public:
  /// Seeded values satisfying the predicate of `mode`; overrides are applied
  /// after generation and the result is validated.
  static LambdaSeq generate(LambdaMode mode, int window, const FieldPtr& base, const FieldPtr& ext,
                            std::uint64_t seed, const std::map<int, FieldElem>& overrides = {});
  /// Throws InvalidLambda unless every value is nonzero and the mode holds.
  static LambdaSeq from_values(LambdaMode mode, int window, const FieldPtr& base,
                               std::vector<FieldElem> values);

  LambdaMode mode() const { return mode_; }
  int window() const { return window_; }
  bool in_window(int i) const { return i >= -window_ && i <= window_; }
  /// Throws WindowOverflow outside the window.
  const FieldElem& at(int i) const;
  const std::vector<FieldElem>& values() const { return values_; }
  const FieldPtr& base() const { return base_; }
  const FieldPtr& ext() const { return ext_; }

 private:
  LambdaSeq(LambdaMode mode, int window, FieldPtr base, std::vector<FieldElem> values);
  void validate() const;

  LambdaMode mode_;
  int window_;
  FieldPtr base_;
  FieldPtr ext_;
  std::vector<FieldElem> values_;
};

/// Finitely supported i -> c_i with no stored zeros.
class CoeffVector {
 public:
  CoeffVector() = default;
  static CoeffVector unit(int i, const FieldElem& value);

  void set(int i, const FieldElem& value);
  std::optional<FieldElem> get(int i) const;
  bool empty() const { return entries_.empty(); }
  /// The support count #(c_i).
  std::size_t size() const { return entries_.size(); }
  int min_index() const { return entries_.begin()->first; }
  int max_index() const { return entries_.rbegin()->first; }
  std::vector<int> support() const;
  const std::map<int, FieldElem>& entries() const { return entries_; }

  CoeffVector shifted(int k) const;
  CoeffVector scaled(const FieldElem& u) const;
  /// Divides by the lowest-index entry.
  CoeffVector normalized() const;

  std::string to_string() const;  // "{-1:[1,0],2:[0,3]}"
  bool operator==(const CoeffVector& o) const { return entries_ == o.entries_; }
  /// Ordering by (index, code) sequences.
  bool operator<(const CoeffVector& o) const;

 private:
  std::map<int, FieldElem> entries_;
};

/// c'_{i+shift} = scale(i) c_i; throws WindowOverflow if i or i+shift leaves
/// the lambda window.
CoeffVector apply_transport(const TransportSpec& t, const CoeffVector& c, const LambdaSeq& lambda);

struct Transported {
  Character chi;
  CoeffVector coeffs;
};

/// Pi~ on sum_i c_i iota_i(v^chi): character swapped, coefficients transported.
Transported pi_tilde(const Character& chi, const CoeffVector& c, const LambdaSeq& lambda,
                     const CharacterRegistry& registry);

/// S~ Pi~: advances along cyc; S~ commutes with every iota_i, so only Pi~
/// moves indices. Throws CycleUndefined off the domain of cyc.
Transported s_pi_tilde(const Character& chi, const CoeffVector& c, const LambdaSeq& lambda,
                       const CharacterRegistry& registry);

struct TwistSample {
  CoeffVector input;
  Character chi1_path_end;
  Character chi2_path_end;
  bool ratios_match = false;  // path1_i == lambda_i * path2_i for every index
};

struct TwistReport {
  bool ok = true;
  std::vector<TwistSample> samples;
};

/// Runs chi_1 through two S~Pi~ steps and chi_2 through one and compares the
/// coefficients index by index; the constant mu is left symbolic.
TwistReport twist_identity_check(const CharacterRegistry& registry, const LambdaSeq& lambda,
                                 const std::vector<CoeffVector>& samples);

}  // namespace nonadm::diagram
