#pragma once

// Exact arithmetic in GF(p^k), polynomial basis.
//
// Elements are encoded as integers: the coefficient vector (c_0, ..., c_{k-1})
// of c_0 + c_1 x + ... + c_{k-1} x^{k-1} maps to sum c_i p^i. Zero is code 0
// and one is code 1 in every field. Descriptors are immutable and shared.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nonadm::gf {

using Code = std::uint32_t;
/// Little-endian coefficient list over GF(p).
using Poly = std::vector<std::uint32_t>;

bool is_prime(std::uint64_t n);

/// Ben-Or irreducibility test over GF(p). `f` need not be monic.
bool is_irreducible(const Poly& f, std::uint32_t p);

class FieldDescriptor;
using FieldPtr = std::shared_ptr<const FieldDescriptor>;

/// GF(p^k). Without a modulus the smallest monic irreducible polynomial is
/// chosen, ordering candidates by the code of their lower coefficients.
FieldPtr make_field(std::uint32_t p, std::uint32_t k, std::optional<Poly> modulus = std::nullopt);

/// GF(q^m) built over GF(p) with `base` = GF(q) declared as its parent. The
/// embedding root (a root of the parent modulus) is found by exhaustive search.
FieldPtr make_extension(const FieldPtr& base, std::uint32_t m,
                        std::optional<Poly> modulus = std::nullopt);

class FieldDescriptor {
 public:
  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return k_; }
  /// Number of elements p^k.
  std::uint32_t size() const { return size_; }
  const Poly& modulus() const { return modulus_; }
  const FieldPtr& parent() const { return parent_; }

  Code add(Code a, Code b) const;
  Code sub(Code a, Code b) const;
  Code neg(Code a) const;
  Code mul(Code a, Code b) const;
  Code inv(Code a) const;
  /// Square-and-multiply.
  Code pow(Code a, std::uint64_t e) const;
  Code frobenius(Code a) const { return pow(a, p_); }

  Code from_int(std::int64_t n) const;
  Code from_coeffs(std::span<const std::uint32_t> coeffs) const;
  Poly coeffs(Code a) const;

  /// Fixed generator of the multiplicative group.
  Code primitive() const { return primitive_; }

  /// Image of a parent-field code; throws NoDeclaredParent without a parent.
  Code embed_code(Code parent_code) const;
  /// Preimage in the parent field, if `a` lies in the embedded subfield.
  std::optional<Code> restrict_code(Code a) const;
  bool in_parent(Code a) const { return restrict_code(a).has_value(); }
  Code embedding_root() const;

  std::string describe() const;

  // Construction goes through make_field / make_extension.
  FieldDescriptor(std::uint32_t p, std::uint32_t k, Poly modulus, FieldPtr parent);

 private:
  Code mul_poly(Code a, Code b) const;
  Code add_digits(Code a, Code b) const;

  std::uint32_t p_;
  std::uint32_t k_;
  std::uint32_t size_;
  Poly modulus_;
  FieldPtr parent_;
  std::vector<Code> add_table_;  // only for small fields
  std::vector<Code> exp_;
  std::vector<std::uint32_t> log_;
  Code primitive_ = 0;
  Code root_ = 0;
  std::vector<Code> embed_;                  // parent code -> code
  std::vector<std::int32_t> restrict_;       // code -> parent code or -1
};

class FieldElem {
 public:
  FieldElem() = default;
  FieldElem(FieldPtr field, Code code);
  static FieldElem zero(const FieldPtr& field) { return {field, 0}; }
  static FieldElem one(const FieldPtr& field) { return {field, 1}; }
  static FieldElem from_int(const FieldPtr& field, std::int64_t n);
  static FieldElem from_coeffs(const FieldPtr& field, std::span<const std::uint32_t> coeffs);

  const FieldPtr& field() const { return field_; }
  Code code() const { return code_; }
  bool is_zero() const { return code_ == 0; }
  Poly coeffs() const;

  FieldElem operator+(const FieldElem& o) const;
  FieldElem operator-(const FieldElem& o) const;
  FieldElem operator-() const;
  FieldElem operator*(const FieldElem& o) const;
  FieldElem operator/(const FieldElem& o) const;
  FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
  FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }
  FieldElem inv() const;
  FieldElem pow(std::uint64_t e) const;

  bool operator==(const FieldElem& o) const;
  bool operator!=(const FieldElem& o) const { return !(*this == o); }

 private:
  void check_same(const FieldElem& o) const;

  FieldPtr field_;
  Code code_ = 0;
};

FieldElem frobenius(const FieldElem& a);

/// Ring embedding GF(q) -> GF(q^m); `target` must declare `a.field()` as parent.
FieldElem embed_subfield(const FieldElem& a, const FieldPtr& target);

struct SpanResult {
  std::size_t dimension = 0;
  std::vector<FieldElem> basis;  // subset of the input, in input order
};

/// Dimension over `base` of the base-linear span of `elements`.
SpanResult subfield_span(std::span<const FieldElem> elements, const FieldPtr& base);

/// "[c0,c1,...]" over GF(p), or a bare integer n meaning n*1.
FieldElem parse_elem(const FieldPtr& field, const std::string& text);
std::string format_elem(const FieldElem& a);

}  // namespace nonadm::gf
