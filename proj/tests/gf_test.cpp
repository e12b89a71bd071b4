#include "nonadm/gf.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "nonadm/error.hpp"

namespace nonadm::gf {
namespace {

// Brute-force oracle: f is reducible iff some monic polynomial of degree
// 1..deg/2 divides it (schoolbook division).
bool brute_reducible(const Poly& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      Poly g(d + 1, 0);
      std::uint64_t c = code;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = c % p;
        c /= p;
      }
      g[d] = 1;
      Poly r = f;
      for (std::size_t top = deg; top >= d; --top) {
        const std::uint32_t lead = r[top];
        if (lead) {
          for (std::size_t i = 0; i <= d; ++i) {
            r[top - d + i] = (r[top - d + i] + (p - lead) * g[i]) % p;
          }
        }
        if (top == d) break;
      }
      if (std::all_of(r.begin(), r.end(), [](auto v) { return v == 0; })) return true;
    }
  }
  return false;
}

TEST(GfArith, AcceptsIrreducibleCubic) {
  // x^3+x+1 over GF(5): no root, values at 0..4 are 1,3,1,1,4.
  const Poly f{1, 1, 0, 1};
  std::vector<std::uint32_t> values;
  for (std::uint32_t x = 0; x < 5; ++x) values.push_back((x * x * x + x + 1) % 5);
  EXPECT_EQ(values, (std::vector<std::uint32_t>{1, 3, 1, 1, 4}));
  const auto field = make_field(5, 3, f);
  EXPECT_EQ(field->size(), 125u);
  EXPECT_EQ(field->modulus(), f);
}

TEST(GfArith, PrimeFieldDefaultModulusIsX) {
  const auto f5 = make_field(5, 1);
  EXPECT_EQ(f5->modulus(), (Poly{0, 1}));
  EXPECT_EQ(f5->size(), 5u);
}

TEST(GfArith, RejectsBadInputs) {
  try {
    make_field(4, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonPrime);
  }
  try {
    make_field(5, 3, Poly{1, 0, 0, 1});  // x^3+1 has root -1
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ReducibleModulus);
  }
  EXPECT_THROW(make_field(2, 3), Error);
}

TEST(GfArith, DefaultModulusIsSmallestIrreducible) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    for (std::uint32_t k : {2u, 3u}) {
      Poly expected;
      std::uint64_t count = 1;
      for (std::uint32_t i = 0; i < k; ++i) count *= p;
      for (std::uint64_t code = 0; code < count; ++code) {
        Poly cand(k + 1, 0);
        std::uint64_t c = code;
        for (std::uint32_t i = 0; i < k; ++i) {
          cand[i] = c % p;
          c /= p;
        }
        cand[k] = 1;
        if (!brute_reducible(cand, p)) {
          expected = cand;
          break;
        }
      }
      EXPECT_EQ(make_field(p, k)->modulus(), expected) << "p=" << p << " k=" << k;
    }
  }
}

TEST(GfArith, IrreducibilityMatchesBruteForce) {
  const std::uint32_t p = 3;
  for (std::uint32_t deg = 2; deg <= 5; ++deg) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < deg; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      Poly f(deg + 1, 0);
      std::uint64_t c = code;
      for (std::uint32_t i = 0; i < deg; ++i) {
        f[i] = c % p;
        c /= p;
      }
      f[deg] = 1;
      EXPECT_EQ(is_irreducible(f, p), !brute_reducible(f, p));
    }
  }
}

TEST(GfArith, PrimeFieldBasics) {
  const auto f5 = make_field(5, 1);
  const auto two = FieldElem::from_int(f5, 2), three = FieldElem::from_int(f5, 3);
  EXPECT_EQ(two * three, FieldElem::one(f5));
  EXPECT_EQ(three.inv(), two);
  try {
    FieldElem::zero(f5).inv();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ZeroInverse);
  }
}

TEST(GfArith, FieldAxiomsRandomized) {
  std::mt19937_64 rng(7);
  for (const auto& field : {make_field(5, 3), make_field(5, 6), make_field(3, 3)}) {
    std::uniform_int_distribution<Code> pick(0, field->size() - 1);
    for (int trial = 0; trial < 300; ++trial) {
      const FieldElem a(field, pick(rng)), b(field, pick(rng)), c(field, pick(rng));
      EXPECT_EQ((a + b) + c, a + (b + c));
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ(a + b, b + a);
      EXPECT_EQ(a * b, b * a);
      EXPECT_EQ(a - a, FieldElem::zero(field));
      if (!a.is_zero()) EXPECT_EQ(a * a.inv(), FieldElem::one(field));
    }
  }
}

TEST(GfArith, TableMultiplicationMatchesSchoolbook) {
  // Oracle: polynomial product reduced by the modulus, computed here directly.
  const auto field = make_field(5, 3);
  const Poly& m = field->modulus();
  for (Code a = 0; a < field->size(); a += 7) {
    for (Code b = 0; b < field->size(); b += 11) {
      Poly pa = field->coeffs(a), pb = field->coeffs(b);
      Poly prod(5, 0);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) prod[i + j] = (prod[i + j] + pa[i] * pb[j]) % 5;
      for (int top = 4; top >= 3; --top) {
        const auto lead = prod[top];
        for (int i = 0; i <= 3; ++i) prod[top - 3 + i] = (prod[top - 3 + i] + (5 - lead) * m[i]) % 5;
      }
      prod.resize(3);
      EXPECT_EQ(field->coeffs(field->mul(a, b)), prod);
    }
  }
}

TEST(GfArith, FrobeniusProperties) {
  const auto f5 = make_field(5, 1);
  for (Code a = 0; a < 5; ++a) EXPECT_EQ(f5->frobenius(a), a);

  const auto f125 = make_field(5, 3);
  for (Code a = 0; a < f125->size(); ++a) {
    EXPECT_EQ(f125->pow(a, 125), a);  // x^(p^k) = x, exhaustive
    Code x = a;
    for (int i = 0; i < 3; ++i) x = f125->frobenius(x);
    EXPECT_EQ(x, a);
  }
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Code> pick(0, 124);
  for (int t = 0; t < 100; ++t) {
    const FieldElem a(f125, pick(rng)), b(f125, pick(rng));
    EXPECT_EQ(frobenius(a + b), frobenius(a) + frobenius(b));
  }
  // Exact order k on a generator.
  const FieldElem g(f125, f125->primitive());
  EXPECT_NE(frobenius(g), g);
  EXPECT_NE(frobenius(frobenius(g)), g);
  EXPECT_EQ(frobenius(frobenius(frobenius(g))), g);
}

TEST(GfArith, MixedFieldsRejected) {
  const auto a = make_field(5, 3), b = make_field(5, 3);
  try {
    (void)(FieldElem::one(a) + FieldElem::one(b));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MixedFields);
  }
}

TEST(GfArith, EmbeddingIsRingHomomorphism) {
  const auto fq = make_field(5, 3);
  const auto ext = make_extension(fq, 2);
  EXPECT_EQ(ext->degree(), 6u);
  EXPECT_EQ(embed_subfield(FieldElem::zero(fq), ext), FieldElem::zero(ext));
  EXPECT_EQ(embed_subfield(FieldElem::one(fq), ext), FieldElem::one(ext));

  // The root really is a root of the subfield modulus.
  Code acc = 0;
  const Poly& m = fq->modulus();
  for (std::size_t i = m.size(); i-- > 0;) acc = ext->add(ext->mul(acc, ext->embedding_root()), m[i]);
  EXPECT_EQ(acc, 0u);

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Code> pick(0, fq->size() - 1);
  for (int t = 0; t < 100; ++t) {
    const FieldElem a(fq, pick(rng)), b(fq, pick(rng));
    EXPECT_EQ(embed_subfield(a * b, ext), embed_subfield(a, ext) * embed_subfield(b, ext));
    EXPECT_EQ(embed_subfield(a + b, ext), embed_subfield(a, ext) + embed_subfield(b, ext));
  }

  // Image has exactly q elements and equals the fixed points of x -> x^q.
  std::set<Code> image;
  for (Code a = 0; a < fq->size(); ++a) image.insert(ext->embed_code(a));
  EXPECT_EQ(image.size(), fq->size());
  std::size_t fixed = 0;
  for (Code x = 0; x < ext->size(); ++x) {
    const bool is_fixed = ext->pow(x, fq->size()) == x;
    fixed += is_fixed;
    EXPECT_EQ(is_fixed, image.count(x) == 1);
    EXPECT_EQ(ext->in_parent(x), is_fixed);
  }
  EXPECT_EQ(fixed, fq->size());

  try {
    embed_subfield(FieldElem::one(fq), make_field(5, 6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoDeclaredParent);
  }
}

TEST(GfArith, SubfieldSpan) {
  const auto fq = make_field(5, 3);
  const auto ext = make_extension(fq, 2);
  EXPECT_EQ(subfield_span({}, fq).dimension, 0u);
  const FieldElem one = FieldElem::one(ext);
  const std::vector<FieldElem> just_one{one};
  EXPECT_EQ(subfield_span(just_one, fq).dimension, 1u);

  const FieldElem g(ext, ext->primitive());
  ASSERT_NE(g.pow(fq->size()), g);  // g lies outside GF(q)
  const std::vector<FieldElem> pair{one, g};
  const auto res = subfield_span(pair, fq);
  EXPECT_EQ(res.dimension, 2u);
  EXPECT_EQ(res.basis.size(), 2u);

  // Invariance under permutation and base rescaling.
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Code> pick(1, ext->size() - 1), pick_q(1, fq->size() - 1);
  for (int t = 0; t < 50; ++t) {
    std::vector<FieldElem> xs;
    const int count = 1 + t % 3;
    for (int i = 0; i < count; ++i) xs.emplace_back(ext, pick(rng));
    const auto d = subfield_span(xs, fq).dimension;
    auto ys = xs;
    std::reverse(ys.begin(), ys.end());
    for (auto& y : ys) y = y * embed_subfield(FieldElem(fq, pick_q(rng)), ext);
    EXPECT_EQ(subfield_span(ys, fq).dimension, d);
  }

  const std::vector<FieldElem> mixed{one, FieldElem::one(make_extension(fq, 2))};
  EXPECT_THROW(subfield_span(mixed, fq), Error);
}

TEST(GfArith, ParseAndFormat) {
  const auto f = make_field(5, 3);
  EXPECT_EQ(parse_elem(f, "[1, 2]").coeffs(), (Poly{1, 2, 0}));
  EXPECT_EQ(parse_elem(f, "7"), FieldElem::from_int(f, 2));
  EXPECT_EQ(format_elem(parse_elem(f, "[0,0,3]")), "[0,0,3]");
  EXPECT_THROW(parse_elem(f, "[1,2"), Error);
}

}  // namespace
}  // namespace nonadm::gf
