#pragma once

// Serre-weight labels (subsets of Z/f), the shift-then-flip map on them, the
// two explicitly known weight tuples and the two special characters.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nonadm::weights {

/// Subset of Z/f as a bitmask; bit j set means j is a member.
struct OrbitIndexSet {
  std::uint32_t f = 3;
  std::uint32_t mask = 0;

  bool contains(std::uint32_t j) const { return (mask >> (j % f)) & 1u; }
  std::vector<std::uint32_t> members() const;
  std::string to_string() const;  // "{0,2}", "{}" for the empty set

  auto operator<=>(const OrbitIndexSet&) const = default;
};

OrbitIndexSet make_set(std::uint32_t f, std::initializer_list<std::uint32_t> members);

/// j is in delta(J) iff j+1 is in J for j != 0, and iff 1 is not in J for j = 0.
OrbitIndexSet delta(OrbitIndexSet J);

/// Orbits of delta on all subsets of Z/f, each listed in cyclic order from its
/// member with the fewest elements (ties by mask); orbits ordered by that start.
std::vector<std::vector<OrbitIndexSet>> delta_orbits(std::uint32_t f);

struct GenericParams {
  std::uint32_t p = 5;
  std::uint32_t f = 3;
  std::vector<int> r{1, 1, 1};

  std::uint64_t q() const;
};

struct GenericityBounds {
  int r_min = 1;
  int r_max_offset = 3;  // r_i <= p - r_max_offset
};

enum class Provenance { PaperGiven, Configured };
std::string provenance_name(Provenance p);

struct WeightTuple {
  OrbitIndexSet label;
  std::vector<int> tuple;
  int twist = 0;
  Provenance provenance = Provenance::Configured;
};

struct TableEntry {
  std::vector<int> tuple;
  int twist = 0;
};

/// User-supplied weight/character data, one record per line:
///   J=<bitmask> tuple=<a0,a1,a2> [twist=<e>]
///   chi=<1|2> twist=<e>
/// '#' starts a comment.
struct WeightTable {
  std::map<std::uint32_t, TableEntry> weights;
  int chi1_twist = 0;
  int chi2_twist = 0;
  /// Twists for the formula-given weights may be supplied without a tuple.
  std::map<std::uint32_t, int> paper_twists;
};

WeightTable parse_table(std::istream& in);
WeightTable parse_table(const std::string& text);
std::string format_table(const WeightTable& table);

/// The two tuples printed explicitly (f = 3 only): sigma_{2} and sigma_{0,1}.
std::optional<std::vector<int>> paper_weight_tuple(OrbitIndexSet J, const GenericParams& params);

/// Formula-given tuples take precedence; a conflicting configured entry is a
/// TableConflict. Components must lie in [0, p-1].
WeightTuple weight_tuple(OrbitIndexSet J, const GenericParams& params, const WeightTable& table);

/// IZ-character recorded by exponents of the two diagonal entries mod q-1.
struct Character {
  std::uint64_t ea = 0;
  std::uint64_t ed = 0;
  std::uint64_t modulus = 1;

  auto operator<=>(const Character&) const = default;
  std::string to_string() const;  // "(ea,ed)"
};

Character make_character(std::int64_t ea, std::int64_t ed, std::uint64_t modulus);

/// Precomposition with conjugation by the element swapping the diagonal.
Character char_swap(const Character& chi);

/// Tuple (m_0, ..., m_{f-1}) -> (sum m_i p^i + twist, twist) mod q-1. The only
/// convention-dependent step; reports record it by name.
Character encode_character(const std::vector<int>& tuple, const GenericParams& params, int twist);
inline constexpr const char* kExponentConvention = "ea = sum(m_i p^i) + twist, ed = twist (mod q-1)";

struct SpecialCharacters {
  std::vector<int> chi1_tuple;
  std::vector<int> chi2_tuple;
  Character chi1;
  Character chi2;
};

/// chi_1 = (p-2-r0, p-1-r1, r2+1), chi_2 = (p-r0, r1+1, r2).
SpecialCharacters special_characters(const GenericParams& params, const WeightTable& table);

/// prod (a_i + 1).
std::uint64_t weight_dim(const WeightTuple& w);

struct Diagnostics {
  bool pass = true;
  std::vector<std::string> messages;
};

Diagnostics validate_genericity(const GenericParams& params, const GenericityBounds& bounds,
                                const WeightTable& table);

}  // namespace nonadm::weights
