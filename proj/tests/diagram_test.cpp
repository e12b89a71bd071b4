#include "nonadm/diagram.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <set>

#include "nonadm/error.hpp"
#include "nonadm/rng.hpp"

namespace nonadm::diagram {
namespace {

using weights::make_set;

OrbitIndexSet S(std::initializer_list<std::uint32_t> m) { return make_set(3, m); }

weights::WeightTable default_table() {
  std::ifstream file(NONADM_DATA_DIR "/default_weights.tbl");
  EXPECT_TRUE(file);
  return weights::parse_table(file);
}

struct Fixture : ::testing::Test {
  weights::GenericParams params;
  CharacterRegistry reg = CharacterRegistry::build(params, default_table());
  gf::FieldPtr base = gf::make_field(5, 3);
  gf::FieldPtr ext = gf::make_extension(base, 2);
};

TEST_F(Fixture, TwelveDistinctCharacters) {
  const auto& chars = reg.registered();
  ASSERT_EQ(chars.size(), 12u);
  std::set<Character> unique(chars.begin(), chars.end());
  EXPECT_EQ(unique.size(), 12u);
  for (const auto& chi : chars) EXPECT_TRUE(reg.knows(weights::char_swap(chi)));
}

TEST_F(Fixture, ClashIsReported) {
  auto table = default_table();
  table.chi1_twist = 0;  // chi_1 then equals chi_{1,2}
  try {
    CharacterRegistry::build(params, table);
    FAIL() << "expected CharacterClash";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CharacterClash);
  }
}

TEST_F(Fixture, CycleMap) {
  for (std::uint32_t m = 0; m < 8; ++m) {
    const OrbitIndexSet J{3, m};
    EXPECT_EQ(reg.cyc(reg.socle(J)), reg.socle(weights::delta(J)));
  }
  EXPECT_EQ(reg.cyc(reg.socle(S({1}))), reg.socle(S({})));
  EXPECT_EQ(reg.cyc(reg.chi1()), reg.socle(S({})));
  EXPECT_EQ(reg.cyc(reg.chi2()), reg.socle(S({0})));
  EXPECT_FALSE(reg.cyc(weights::char_swap(reg.chi1())));
  EXPECT_FALSE(reg.cyc(weights::char_swap(reg.chi2())));
}

TEST_F(Fixture, Incidence) {
  EXPECT_EQ(reg.block_of(reg.chi1()), S({2}));
  EXPECT_EQ(reg.block_of(weights::char_swap(reg.chi1())), S({}));
  EXPECT_EQ(reg.block_of(reg.chi2()), S({0, 1}));
  EXPECT_EQ(reg.block_of(weights::char_swap(reg.chi2())), S({0}));
  std::size_t total = 0;
  for (auto sigma : reg.blocks()) {
    const auto inc = reg.incident(sigma);
    EXPECT_EQ(inc.front(), reg.socle(sigma));
    for (const auto& chi : inc) EXPECT_EQ(reg.block_of(chi), sigma);
    total += inc.size();
  }
  EXPECT_EQ(total, 12u);
}

TEST_F(Fixture, Transports) {
  const auto plus = reg.chi_plus(), minus = reg.chi_minus();
  EXPECT_EQ(transport_of(plus, reg), (TransportSpec{+1, ScaleKind::One}));
  EXPECT_EQ(transport_of(weights::char_swap(plus), reg), (TransportSpec{-1, ScaleKind::One}));
  EXPECT_EQ(transport_of(minus, reg), (TransportSpec{-1, ScaleKind::One}));
  EXPECT_EQ(transport_of(weights::char_swap(minus), reg), (TransportSpec{+1, ScaleKind::One}));
  EXPECT_EQ(transport_of(reg.chi1(), reg), (TransportSpec{0, ScaleKind::Lambda}));
  EXPECT_EQ(transport_of(weights::char_swap(reg.chi1()), reg), (TransportSpec{0, ScaleKind::LambdaInverse}));
  EXPECT_EQ(transport_of(reg.chi2(), reg), (TransportSpec{0, ScaleKind::One}));
  EXPECT_EQ(transport_of(reg.socle(S({0, 2})), reg), (TransportSpec{0, ScaleKind::One}));
}

CoeffVector random_coeffs(Rng& rng, const gf::FieldPtr& ext, int lo, int hi) {
  CoeffVector c;
  const int n = static_cast<int>(rng.between(1, 4));
  for (int k = 0; k < n; ++k) {
    c.set(static_cast<int>(rng.between(lo, hi)),
          FieldElem(ext, static_cast<gf::Code>(1 + rng.below(ext->size() - 1))));
  }
  return c;
}

TEST_F(Fixture, PiTildeIsInvolution) {
  Rng rng(11);
  const int W = 6;
  int checked = 0;
  for (auto mode : {LambdaMode::Rational, LambdaMode::Twisted, LambdaMode::Spanning, LambdaMode::Degenerate}) {
    const auto lambda = LambdaSeq::generate(mode, W, base, ext, 1000 + static_cast<int>(mode));
    for (int trial = 0; trial < 250; ++trial) {
      const auto& chi = reg.registered()[rng.below(reg.registered().size())];
      const auto c = random_coeffs(rng, ext, -W + 1, W - 1);
      const auto once = pi_tilde(chi, c, lambda, reg);
      const auto twice = pi_tilde(once.chi, once.coeffs, lambda, reg);
      EXPECT_EQ(twice.chi, chi);
      EXPECT_EQ(twice.coeffs, c) << reg.name(chi) << " " << c.to_string();
      ++checked;
    }
  }
  EXPECT_EQ(checked, 1000);
}

TEST_F(Fixture, OrbitIILoopShiftsByOne) {
  // One trip around the six-cycle passes chi_+ once and nothing else moves indices.
  const auto lambda = LambdaSeq::generate(LambdaMode::Twisted, 8, base, ext, 3);
  Character chi = reg.socle(S({}));
  CoeffVector c = CoeffVector::unit(0, FieldElem::one(ext));
  for (int step = 0; step < 6; ++step) {
    auto t = s_pi_tilde(chi, c, lambda, reg);
    chi = t.chi;
    c = t.coeffs;
  }
  EXPECT_EQ(chi, reg.socle(S({})));
  EXPECT_EQ(c, CoeffVector::unit(1, FieldElem::one(ext)));
}

TEST_F(Fixture, OrbitILoopShiftsBackByOne) {
  const auto lambda = LambdaSeq::generate(LambdaMode::Twisted, 8, base, ext, 3);
  Character chi = reg.socle(S({2}));
  CoeffVector c = CoeffVector::unit(2, FieldElem::one(ext));
  for (int step = 0; step < 2; ++step) {
    auto t = s_pi_tilde(chi, c, lambda, reg);
    chi = t.chi;
    c = t.coeffs;
  }
  EXPECT_EQ(chi, reg.socle(S({2})));
  EXPECT_EQ(c, CoeffVector::unit(1, FieldElem::one(ext)));
}

TEST_F(Fixture, TwistRatios) {
  Rng rng(5);
  const auto lambda = LambdaSeq::generate(LambdaMode::Spanning, 5, base, ext, 17);
  std::vector<CoeffVector> samples;
  for (int k = 0; k < 50; ++k) samples.push_back(random_coeffs(rng, ext, -5, 5));
  const auto report = twist_identity_check(reg, lambda, samples);
  EXPECT_TRUE(report.ok);
  for (const auto& s : report.samples) {
    EXPECT_EQ(s.chi1_path_end, reg.socle(S({0})));
    EXPECT_EQ(s.chi2_path_end, reg.socle(S({0})));
  }
}

TEST_F(Fixture, Errors) {
  const auto lambda = LambdaSeq::generate(LambdaMode::Twisted, 2, base, ext, 1);
  EXPECT_THROW(lambda.at(3), Error);
  try {
    apply_transport({+1, ScaleKind::One}, CoeffVector::unit(2, FieldElem::one(ext)), lambda);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::WindowOverflow);
  }
  try {
    s_pi_tilde(weights::char_swap(reg.chi1()), CoeffVector::unit(0, FieldElem::one(ext)), lambda, reg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CycleUndefined);
  }
  try {
    reg.info(weights::make_character(0, 0, 124));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownCharacter);
  }
}

TEST_F(Fixture, LambdaModes) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = LambdaSeq::generate(LambdaMode::Rational, 4, base, ext, seed);
    for (const auto& v : r.values()) EXPECT_TRUE(ext->in_parent(v.code()));
    const auto s = LambdaSeq::generate(LambdaMode::Spanning, 4, base, ext, seed);
    EXPECT_EQ(gf::subfield_span(s.values(), base).dimension, 2u);
    EXPECT_TRUE(ext->in_parent(s.at(0).code()));
  }
  // A rational sequence with an irrational entry is rejected.
  std::vector<FieldElem> vals(5, FieldElem::one(ext));
  gf::Code irr = 1;
  while (ext->in_parent(irr)) ++irr;
  vals[1] = FieldElem(ext, irr);
  try {
    LambdaSeq::from_values(LambdaMode::Rational, 2, base, vals);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidLambda);
  }
  vals[1] = FieldElem::zero(ext);
  EXPECT_THROW(LambdaSeq::from_values(LambdaMode::Degenerate, 2, base, vals), Error);
  // Twisted requires lambda_i != lambda_0.
  std::vector<FieldElem> same(5, FieldElem::one(ext));
  EXPECT_THROW(LambdaSeq::from_values(LambdaMode::Twisted, 2, base, same), Error);
}

TEST(CoeffVectorTest, Basics) {
  auto base = gf::make_field(5, 1);
  CoeffVector c;
  c.set(3, FieldElem::from_int(base, 2));
  c.set(-1, FieldElem::from_int(base, 4));
  c.set(0, FieldElem::zero(base));
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c.min_index(), -1);
  EXPECT_EQ(c.max_index(), 3);
  EXPECT_EQ(c.to_string(), "{-1:[4],3:[2]}");
  const auto n = c.normalized();
  EXPECT_EQ(*n.get(-1), FieldElem::one(base));
  EXPECT_EQ(*n.get(3), FieldElem::from_int(base, 3));  // 2 / 4 = 3 mod 5
  EXPECT_EQ(c.shifted(2).support(), (std::vector<int>{1, 5}));
}

}  // namespace
}  // namespace nonadm::diagram
