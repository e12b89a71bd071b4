#include "nonadm/gf.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "nonadm/error.hpp"

namespace nonadm::gf {

namespace {

constexpr std::uint32_t kMaxFieldSize = 1u << 20;
constexpr std::uint32_t kMaxAddTable = 1024;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  // p is prime, so a^(p-2).
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<std::uint32_t>(r);
}

Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint32_t lead_inv = inv_mod(m.back(), p);
  while (a.size() > dm) {
    const std::size_t shift = a.size() - 1 - dm;
    const std::uint64_t factor = std::uint64_t(a.back()) * lead_inv % p;
    for (std::size_t i = 0; i <= dm; ++i) {
      const std::uint64_t t = factor * m[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - t) % p);
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
    }
  }
  return poly_mod(std::move(r), m, p);
}

Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(p^i) mod f, computed by repeated p-th powering.
Poly frobenius_power_of_x(const Poly& f, std::uint32_t p, std::uint32_t i) {
  Poly x = poly_mod(Poly{0, 1}, f, p);
  for (std::uint32_t step = 0; step < i; ++step) {
    Poly result{1};
    Poly base = x;
    for (std::uint32_t e = p; e; e >>= 1) {
      if (e & 1) result = poly_mulmod(result, base, f, p);
      base = poly_mulmod(base, base, f, p);
    }
    x = std::move(result);
  }
  return x;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool is_irreducible(const Poly& f_in, std::uint32_t p) {
  Poly f = f_in;
  for (auto& c : f) c %= p;
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t deg = f.size() - 1;
  if (deg == 1) return true;
  for (std::uint32_t i = 1; i <= deg / 2; ++i) {
    Poly h = frobenius_power_of_x(f, p, i);
    if (h.size() < 2) h.resize(2, 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    if (h.empty()) return false;  // x^(p^i) = x mod f forces a small factor
    if (poly_gcd(f, h, p).size() > 1) return false;
  }
  return true;
}

FieldDescriptor::FieldDescriptor(std::uint32_t p, std::uint32_t k, Poly modulus, FieldPtr parent)
    : p_(p), k_(k), modulus_(std::move(modulus)), parent_(std::move(parent)) {
  std::uint64_t size = 1;
  for (std::uint32_t i = 0; i < k_; ++i) {
    size *= p_;
    if (size > kMaxFieldSize) {
      throw Error(Errc::Unsupported, "field of order " + std::to_string(p_) + "^" +
                                         std::to_string(k_) + " exceeds desk-scale limit");
    }
  }
  size_ = static_cast<std::uint32_t>(size);

  if (size_ <= kMaxAddTable) {
    add_table_.resize(std::size_t(size_) * size_);
    for (Code a = 0; a < size_; ++a)
      for (Code b = 0; b < size_; ++b) add_table_[std::size_t(a) * size_ + b] = add_digits(a, b);
  }

  // Primitive element by smallest-code search.
  const auto factors = prime_factors(size_ - 1);
  auto slow_pow = [this](Code a, std::uint64_t e) {
    Code r = 1;
    for (; e; e >>= 1) {
      if (e & 1) r = mul_poly(r, a);
      a = mul_poly(a, a);
    }
    return r;
  };
  for (Code c = 1; c < size_; ++c) {
    bool ok = (size_ == 2) || c != 1;
    for (auto r : factors) {
      if (!ok) break;
      if (slow_pow(c, (size_ - 1) / r) == 1) ok = false;
    }
    if (ok) {
      primitive_ = c;
      break;
    }
  }
  exp_.resize(size_ - 1);
  log_.assign(size_, 0);
  Code cur = 1;
  for (std::uint32_t i = 0; i + 1 < size_; ++i) {
    exp_[i] = cur;
    log_[cur] = i;
    cur = mul_poly(cur, primitive_);
  }

  if (parent_) {
    if (parent_->characteristic() != p_ || k_ % parent_->degree() != 0) {
      throw Error(Errc::MixedFields, "parent is not a subfield");
    }
    // Smallest-code root of the parent modulus.
    const Poly& pm = parent_->modulus();
    bool found = false;
    for (Code c = 0; c < size_ && !found; ++c) {
      Code acc = 0;
      for (std::size_t i = pm.size(); i-- > 0;) acc = add(mul(acc, c), from_int(pm[i]));
      if (acc == 0) {
        root_ = c;
        found = true;
      }
    }
    if (!found) throw Error(Errc::NoDeclaredParent, "no root of parent modulus in target");
    embed_.resize(parent_->size());
    restrict_.assign(size_, -1);
    for (Code a = 0; a < parent_->size(); ++a) {
      const Poly pc = parent_->coeffs(a);
      Code acc = 0;
      for (std::size_t i = pc.size(); i-- > 0;) acc = add(mul(acc, root_), from_int(pc[i]));
      embed_[a] = acc;
      restrict_[acc] = static_cast<std::int32_t>(a);
    }
  }
}

Code FieldDescriptor::add_digits(Code a, Code b) const {
  Code r = 0, scale = 1;
  for (std::uint32_t i = 0; i < k_; ++i) {
    r += ((a % p_ + b % p_) % p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return r;
}

Code FieldDescriptor::mul_poly(Code a, Code b) const {
  Poly pa = coeffs(a), pb = coeffs(b);
  Poly r = poly_mulmod(pa, pb, modulus_, p_);
  return from_coeffs(r);
}

Code FieldDescriptor::add(Code a, Code b) const {
  if (!add_table_.empty()) return add_table_[std::size_t(a) * size_ + b];
  return add_digits(a, b);
}

Code FieldDescriptor::neg(Code a) const {
  Code r = 0, scale = 1;
  for (std::uint32_t i = 0; i < k_; ++i) {
    r += ((p_ - a % p_) % p_) * scale;
    a /= p_;
    scale *= p_;
  }
  return r;
}

Code FieldDescriptor::sub(Code a, Code b) const { return add(a, neg(b)); }

Code FieldDescriptor::mul(Code a, Code b) const {
  if (a == 0 || b == 0) return 0;
  if (exp_.empty()) return mul_poly(a, b);
  std::uint32_t e = log_[a] + log_[b];
  if (e >= size_ - 1) e -= size_ - 1;
  return exp_[e];
}

Code FieldDescriptor::inv(Code a) const {
  if (a == 0) throw Error(Errc::ZeroInverse, "inverse of zero");
  const std::uint32_t l = log_[a];
  return exp_[l == 0 ? 0 : size_ - 1 - l];
}

Code FieldDescriptor::pow(Code a, std::uint64_t e) const {
  Code r = 1;
  for (; e; e >>= 1) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
  }
  return r;
}

Code FieldDescriptor::from_int(std::int64_t n) const {
  std::int64_t r = n % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<Code>(r);
}

Code FieldDescriptor::from_coeffs(std::span<const std::uint32_t> coeffs) const {
  if (coeffs.size() > k_) {
    // Accept trailing zeros only.
    for (std::size_t i = k_; i < coeffs.size(); ++i) {
      if (coeffs[i] % p_ != 0) {
        throw Error(Errc::RangeViolation, "coefficient list longer than field degree");
      }
    }
  }
  Code r = 0, scale = 1;
  for (std::uint32_t i = 0; i < k_ && i < coeffs.size(); ++i) {
    r += (coeffs[i] % p_) * scale;
    scale *= p_;
  }
  return r;
}

Poly FieldDescriptor::coeffs(Code a) const {
  Poly out(k_);
  for (std::uint32_t i = 0; i < k_; ++i) {
    out[i] = a % p_;
    a /= p_;
  }
  return out;
}

Code FieldDescriptor::embed_code(Code parent_code) const {
  if (!parent_) throw Error(Errc::NoDeclaredParent, describe() + " has no declared parent");
  return embed_.at(parent_code);
}

std::optional<Code> FieldDescriptor::restrict_code(Code a) const {
  if (!parent_) throw Error(Errc::NoDeclaredParent, describe() + " has no declared parent");
  const auto r = restrict_.at(a);
  if (r < 0) return std::nullopt;
  return static_cast<Code>(r);
}

Code FieldDescriptor::embedding_root() const {
  if (!parent_) throw Error(Errc::NoDeclaredParent, describe() + " has no declared parent");
  return root_;
}

std::string FieldDescriptor::describe() const {
  std::ostringstream os;
  os << "GF(" << p_ << "^" << k_ << ")";
  return os.str();
}

FieldPtr make_field(std::uint32_t p, std::uint32_t k, std::optional<Poly> modulus) {
  if (!is_prime(p)) throw Error(Errc::NonPrime, std::to_string(p) + " is not prime");
  if (p == 2) throw Error(Errc::Unsupported, "characteristic 2 is excluded");
  if (k == 0) throw Error(Errc::InvalidConfig, "field degree must be positive");
  Poly mod;
  if (modulus) {
    mod = *modulus;
    for (auto& c : mod) c %= p;
    trim(mod);
    if (mod.size() != k + 1 || mod.back() != 1) {
      throw Error(Errc::ReducibleModulus, "modulus must be monic of degree " + std::to_string(k));
    }
    if (!is_irreducible(mod, p)) throw Error(Errc::ReducibleModulus, "modulus is reducible");
  } else {
    std::uint64_t lower_count = 1;
    for (std::uint32_t i = 0; i < k; ++i) lower_count *= p;
    for (std::uint64_t code = 0; code < lower_count; ++code) {
      Poly cand(k + 1, 0);
      std::uint64_t c = code;
      for (std::uint32_t i = 0; i < k; ++i) {
        cand[i] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      cand[k] = 1;
      if (is_irreducible(cand, p)) {
        mod = std::move(cand);
        break;
      }
    }
  }
  return std::make_shared<const FieldDescriptor>(p, k, std::move(mod), nullptr);
}

FieldPtr make_extension(const FieldPtr& base, std::uint32_t m, std::optional<Poly> modulus) {
  const FieldPtr plain = make_field(base->characteristic(), base->degree() * m, std::move(modulus));
  return std::make_shared<const FieldDescriptor>(plain->characteristic(), plain->degree(),
                                                 plain->modulus(), base);
}

FieldElem::FieldElem(FieldPtr field, Code code) : field_(std::move(field)), code_(code) {
  if (code_ >= field_->size()) throw Error(Errc::RangeViolation, "element code out of range");
}

FieldElem FieldElem::from_int(const FieldPtr& field, std::int64_t n) {
  return {field, field->from_int(n)};
}

FieldElem FieldElem::from_coeffs(const FieldPtr& field, std::span<const std::uint32_t> coeffs) {
  return {field, field->from_coeffs(coeffs)};
}

Poly FieldElem::coeffs() const { return field_->coeffs(code_); }

void FieldElem::check_same(const FieldElem& o) const {
  if (field_ != o.field_) throw Error(Errc::MixedFields, "operands from different fields");
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
  check_same(o);
  return {field_, field_->add(code_, o.code_)};
}
FieldElem FieldElem::operator-(const FieldElem& o) const {
  check_same(o);
  return {field_, field_->sub(code_, o.code_)};
}
FieldElem FieldElem::operator-() const { return {field_, field_->neg(code_)}; }
FieldElem FieldElem::operator*(const FieldElem& o) const {
  check_same(o);
  return {field_, field_->mul(code_, o.code_)};
}
FieldElem FieldElem::operator/(const FieldElem& o) const {
  check_same(o);
  return {field_, field_->mul(code_, field_->inv(o.code_))};
}
FieldElem FieldElem::inv() const { return {field_, field_->inv(code_)}; }
FieldElem FieldElem::pow(std::uint64_t e) const { return {field_, field_->pow(code_, e)}; }

bool FieldElem::operator==(const FieldElem& o) const {
  return field_ == o.field_ && code_ == o.code_;
}

FieldElem frobenius(const FieldElem& a) { return {a.field(), a.field()->frobenius(a.code())}; }

FieldElem embed_subfield(const FieldElem& a, const FieldPtr& target) {
  if (!target->parent() || target->parent() != a.field()) {
    throw Error(Errc::NoDeclaredParent, target->describe() + " does not declare " +
                                            a.field()->describe() + " as parent");
  }
  return {target, target->embed_code(a.code())};
}

SpanResult subfield_span(std::span<const FieldElem> elements, const FieldPtr& base) {
  SpanResult out;
  if (elements.empty()) return out;
  const FieldPtr& ext = elements.front().field();
  for (const auto& e : elements) {
    if (e.field() != ext) throw Error(Errc::MixedFields, "span inputs from different fields");
  }
  if (ext->parent() != base) throw Error(Errc::MixedFields, "base is not the declared parent");

  // A base-linear span is the GF(p)-span of {root^t * x : t < deg(base)}.
  const std::uint32_t p = ext->characteristic();
  const std::uint32_t n = ext->degree();
  std::vector<Code> base_powers(base->degree());
  for (std::uint32_t t = 0; t < base->degree(); ++t) base_powers[t] = ext->pow(ext->embedding_root(), t);

  std::vector<Poly> rows;  // echelon rows, pivot = first nonzero index
  std::vector<std::uint32_t> pivots;
  auto insert = [&](Poly v) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::uint32_t c = v[pivots[r]];
      if (!c) continue;
      for (std::uint32_t i = 0; i < n; ++i) v[i] = (v[i] + (p - c) * rows[r][i]) % p;
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      if (v[i]) {
        const std::uint32_t s = inv_mod(v[i], p);
        for (auto& x : v) x = x * s % p;
        // Keep rows fully reduced at the new pivot.
        for (auto& row : rows) {
          const std::uint32_t c = row[i];
          if (!c) continue;
          for (std::uint32_t j = 0; j < n; ++j) row[j] = (row[j] + (p - c) * v[j]) % p;
        }
        rows.push_back(std::move(v));
        pivots.push_back(i);
        return true;
      }
    }
    return false;
  };

  for (const auto& e : elements) {
    bool grew = false;
    for (Code bp : base_powers) grew |= insert(ext->coeffs(ext->mul(bp, e.code())));
    if (grew) out.basis.push_back(e);
  }
  out.dimension = rows.size() / base->degree();
  return out;
}

FieldElem parse_elem(const FieldPtr& field, const std::string& text_in) {
  std::string text;
  for (char ch : text_in)
    if (ch != ' ' && ch != '\t') text += ch;
  if (text.empty()) throw Error(Errc::InvalidConfig, "empty field element");
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(Errc::InvalidConfig, "bad integer '" + std::string(s) + "'");
    }
    return v;
  };
  if (text.front() != '[') return FieldElem::from_int(field, parse_int(text));
  if (text.back() != ']') throw Error(Errc::InvalidConfig, "unterminated element '" + text + "'");
  Poly coeffs;
  std::string_view body(text);
  body = body.substr(1, body.size() - 2);
  while (!body.empty()) {
    const auto comma = body.find(',');
    const auto tok = body.substr(0, comma);
    coeffs.push_back(static_cast<std::uint32_t>(field->from_int(parse_int(tok))));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return FieldElem::from_coeffs(field, coeffs);
}

std::string format_elem(const FieldElem& a) {
  const Poly c = a.coeffs();
  std::string out = "[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(c[i]);
  }
  return out + "]";
}

}  // namespace nonadm::gf
