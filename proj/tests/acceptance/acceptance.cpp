// Acceptance run: one PASS/FAIL line per criterion. Limits and expected
// values are pinned below; a FAIL is reported as is and makes the exit code 1.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "nonadm/error.hpp"
#include "nonadm/lab.hpp"
#include "nonadm/report.hpp"
#include "nonadm/rng.hpp"

using namespace nonadm;
using diagram::CoeffVector;
using diagram::LambdaMode;
using diagram::LambdaSeq;
using gf::FieldElem;
using weights::OrbitIndexSet;

namespace {

constexpr double kOrbitSeconds = 1e-3;
constexpr double kInvolutionSeconds = 1.0;
constexpr double kCertifySeconds = 60.0;
constexpr double kSweepSeconds = 600.0;
constexpr std::size_t kInvolutionTrials = 1000;
constexpr std::size_t kTwistLambdas = 100;
constexpr std::uint64_t kAuditSlopeMin = 60;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string tuple_str(const std::vector<int>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

std::unique_ptr<cli::World> default_world() { return cli::build_world(cli::default_config()); }

CoeffVector random_coeffs(Rng& rng, const gf::FieldPtr& ext, int lo, int hi) {
  CoeffVector c;
  const int n = static_cast<int>(rng.between(1, 4));
  for (int k = 0; k < n; ++k)
    c.set(static_cast<int>(rng.between(lo, hi)), FieldElem(ext, static_cast<gf::Code>(1 + rng.below(ext->size() - 1))));
  return c;
}

// 1. Orbits recomputed from the defining rule, compared with the listed partition.
Outcome c1() {
  const std::uint32_t f = 3;
  auto delta = [&](std::uint32_t mask) {
    std::uint32_t out = 0;
    for (std::uint32_t j = 0; j < f; ++j) {
      const bool next_in = (mask >> ((j + 1) % f)) & 1u;
      if (j != 0 ? next_in : !next_in) out |= 1u << j;
    }
    return out;
  };
  auto m = [](std::initializer_list<std::uint32_t> js) {
    std::uint32_t x = 0;
    for (auto j : js) x |= 1u << j;
    return x;
  };
  const std::vector<std::uint32_t> orbit_ii{m({}), m({0}), m({0, 2}), m({0, 1, 2}), m({1, 2}), m({1})};
  const std::vector<std::uint32_t> orbit_i{m({2}), m({0, 1})};
  bool ok = true;
  for (std::size_t k = 0; k < orbit_ii.size(); ++k) ok = ok && delta(orbit_ii[k]) == orbit_ii[(k + 1) % 6];
  for (std::size_t k = 0; k < orbit_i.size(); ++k) ok = ok && delta(orbit_i[k]) == orbit_i[(k + 1) % 2];

  const auto t0 = std::chrono::steady_clock::now();
  const auto got = weights::delta_orbits(f);
  const double dt = seconds_since(t0);
  std::vector<std::vector<std::uint32_t>> masks;
  for (const auto& o : got) {
    masks.emplace_back();
    for (const auto& J : o) masks.back().push_back(J.mask);
  }
  const bool exact = masks == std::vector<std::vector<std::uint32_t>>{orbit_ii, orbit_i};
  std::ostringstream d;
  d << "orbits ";
  for (const auto& o : got) {
    d << "[";
    for (std::size_t k = 0; k < o.size(); ++k) d << (k ? " " : "") << o[k].to_string();
    d << "]";
  }
  d << ", " << dt * 1e3 << " ms (limit " << kOrbitSeconds * 1e3 << " ms)";
  return {ok && exact && dt < kOrbitSeconds, d.str()};
}

// 2. Tuples at p = 5, r = (1,1,1), against the four values the criterion lists.
Outcome c2() {
  const weights::GenericParams params;  // p = 5, r = (1,1,1)
  const auto table = weights::parse_table(std::string(cli::kDefaultTable));
  const int p = static_cast<int>(params.p), r0 = params.r[0], r1 = params.r[1], r2 = params.r[2];
  // Printed formulas, evaluated here independently of the library.
  const std::vector<int> f2{r0, p - 2 - r1, r2 + 1}, f01{p - 1 - r0, r1 + 1, p - 2 - r2},
      fc1{p - 2 - r0, p - 1 - r1, r2 + 1}, fc2{p - r0, r1 + 1, r2};
  const auto lib2 = weights::weight_tuple(weights::make_set(3, {2}), params, table).tuple;
  const auto lib01 = weights::weight_tuple(weights::make_set(3, {0, 1}), params, table).tuple;
  const auto sp = weights::special_characters(params, table);
  const bool formulas_match = lib2 == f2 && lib01 == f01 && sp.chi1_tuple == fc1 && sp.chi2_tuple == fc2;
  const std::vector<std::vector<int>> listed{{1, 3, 2}, {3, 2, 2}, {2, 3, 2}, {4, 2, 1}};
  const std::vector<std::vector<int>> computed{lib2, lib01, sp.chi1_tuple, sp.chi2_tuple};
  std::ostringstream d;
  d << "computed";
  for (const auto& t : computed) d << " " << tuple_str(t);
  d << "; listed";
  for (const auto& t : listed) d << " " << tuple_str(t);
  d << "; library " << (formulas_match ? "matches" : "DIFFERS FROM") << " the printed formulas";
  if (computed != listed) d << "; sigma_{2} formula (r0, p-2-r1, r2+1) gives " << tuple_str(f2);
  return {formulas_match && computed == listed, d.str()};
}

// 3. Pi~ applied twice is the identity.
Outcome c3(const cli::World& w) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = cli::involution_suite(w, kInvolutionTrials, 20240601);
  const double dt = seconds_since(t0);
  std::ostringstream d;
  d << s.trials - s.failures << "/" << s.trials << " triples over 4 lambda modes, " << dt << " s (limit "
    << kInvolutionSeconds << " s)";
  return {s.trials == kInvolutionTrials && s.failures == 0 && dt < kInvolutionSeconds, d.str()};
}

// 4. Two S~Pi~ steps from chi_1 against one from chi_2, index by index.
Outcome c4(const cli::World& w) {
  Rng rng(4444);
  const auto& reg = w.registry;
  const auto target = reg.socle(weights::make_set(3, {0}));
  const int W = w.config.working_window();
  std::size_t checked = 0, bad = 0;
  for (std::size_t k = 0; k < kTwistLambdas; ++k) {
    const auto lambda = LambdaSeq::generate(LambdaMode::Twisted, W, w.base, w.ext, rng.next());
    for (int t = 0; t < 10; ++t) {
      const auto c = random_coeffs(rng, w.ext, -W + 2, W - 2);
      const auto a = diagram::s_pi_tilde(reg.chi1(), c, lambda, reg);
      const auto b = diagram::s_pi_tilde(a.chi, a.coeffs, lambda, reg);
      const auto e = diagram::s_pi_tilde(reg.chi2(), c, lambda, reg);
      bool ok = b.chi == target && e.chi == target && b.coeffs.support() == e.coeffs.support() &&
                b.coeffs.support() == c.support();
      for (int i : c.support()) ok = ok && *b.coeffs.get(i) == lambda.at(i) * *e.coeffs.get(i);
      ++checked;
      bad += !ok;
    }
  }
  std::ostringstream d;
  d << checked - bad << "/" << checked << " vectors over " << kTwistLambdas
    << " lambda sequences end at chi_{0} with ratio lambda_i";
  return {bad == 0 && checked == kTwistLambdas * 10, d.str()};
}

// 5. Index drift around each orbit.
Outcome c5(const cli::World& w) {
  const auto& reg = w.registry;
  const auto one = FieldElem::one(w.ext);
  auto lap = [&](OrbitIndexSet start, int steps) {
    auto chi = reg.socle(start);
    auto c = CoeffVector::unit(0, one);
    for (int s = 0; s < steps; ++s) {
      auto t = diagram::s_pi_tilde(chi, c, w.lambda, reg);
      chi = t.chi;
      c = t.coeffs;
    }
    return std::make_pair(chi == reg.socle(start), c);
  };
  const auto ii = lap(weights::make_set(3, {}), 6);
  const auto i = lap(weights::make_set(3, {2}), 2);
  const bool ok = ii.first && ii.second == CoeffVector::unit(1, one) && i.first && i.second == CoeffVector::unit(-1, one);
  return {ok, "orbit II (6 steps): e_0 -> " + ii.second.to_string() + "; orbit I (2 steps): e_0 -> " +
                  i.second.to_string()};
}

// 6. Default certification with replay.
Outcome c6() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = cli::default_config();
  const auto r = cli::cmd_certify(cfg);
  const auto replay = cli::cmd_replay(cfg, r.artifacts.at("certificate.json"));
  const double dt = seconds_since(t0);
  const auto& v = r.report["verdict"];
  const bool ok = v["status"] == "certified" && v["boundary_losses"] == 0 && r.report["replay"]["ok"] == true &&
                  replay.exit_code == cli::kSuccess && r.report["seeds"] == 108 && dt < kCertifySeconds;
  std::ostringstream d;
  d << v["status"].get<std::string>() << ", " << r.report["seeds"] << " seeds, boundary losses "
    << v["boundary_losses"] << ", replay " << (replay.exit_code == 0 ? "ok" : "FAILED") << ", " << dt
    << " s (limit " << kCertifySeconds << " s)";
  return {ok, d.str()};
}

// 7. Degenerate lambda and support-2 seeds.
Outcome c7() {
  auto cfg = cli::default_config();
  cfg.lambda_mode = LambdaMode::Degenerate;
  const auto w = cli::build_world(cfg);
  Rng rng(77);
  std::vector<engine::Fact> seeds;
  const auto& reg = w->registry;
  for (int k = 0; k < 24; ++k) {
    const int a = static_cast<int>(rng.between(-4, 3));
    const int b = static_cast<int>(rng.between(a + 1, 4));
    CoeffVector c;
    c.set(a, FieldElem(w->ext, static_cast<gf::Code>(1 + rng.below(w->ext->size() - 1))));
    c.set(b, FieldElem(w->ext, static_cast<gf::Code>(1 + rng.below(w->ext->size() - 1))));
    if (k % 3 == 2) {
      seeds.push_back(engine::Fact::block(reg.blocks()[rng.below(reg.blocks().size())], c));
    } else {
      const auto& chars = reg.registered();
      seeds.push_back(engine::Fact::eigen(chars[rng.below(chars.size())], c));
    }
  }
  std::size_t stalled = 0;
  for (const auto& s : seeds) {
    const auto res = engine::saturate(w->ctx, s);
    stalled += !res.certified && res.reason == "descent stalled";
  }
  const auto cert = engine::certify_irreducible(w->ctx, seeds);
  const bool ok = stalled == seeds.size() && !cert.verdict.certified && cert.verdict.reason == "descent stalled";
  return {ok, std::to_string(stalled) + "/" + std::to_string(seeds.size()) +
                  " support-2 seeds not certified with reason \"descent stalled\""};
}

// 8. F_q-mode scalar closure.
Outcome c8() {
  auto spanning = cli::default_config();
  spanning.scalars = engine::ScalarMode::Base;
  spanning.lambda_mode = LambdaMode::Spanning;
  const auto a = cli::cmd_certify(spanning);
  bool full = a.report["verdict"]["status"] == "certified";
  const auto& cells = a.report["verdict"]["scalar_closure"];
  std::set<std::pair<std::string, int>> seen;
  for (const auto& c : cells) {
    full = full && c[2] == spanning.m;
    seen.insert({c[0].get<std::string>(), c[1].get<int>()});
  }
  full = full && seen.size() == 8u * (2 * spanning.window + 1);

  auto rational = spanning;
  rational.lambda_mode = LambdaMode::Rational;
  rational.socle_seeds = false;
  rational.random_seeds = 0;
  rational.extra_seeds[0] = "eigen chi_{0,2} 0:[0,1,0,0,0,0]";
  const auto w = cli::build_world(rational);
  const auto seed = engine::parse_seed(rational.extra_seeds[0], w->ctx);
  const bool irrational = !seed.coeffs.get(0)->field()->in_parent(seed.coeffs.get(0)->code());
  const auto b = cli::cmd_certify(rational);
  bool deficit = irrational && b.report["verdict"]["reason"] == "scalar-closure deficit" &&
                 !b.report["verdict"]["scalar_closure"].empty();
  for (const auto& c : b.report["verdict"]["scalar_closure"]) deficit = deficit && c[2] == 1;
  std::ostringstream d;
  d << "spanning: " << seen.size() << " cells, dimension " << spanning.m << " of " << spanning.m << " "
    << (full ? "everywhere" : "NOT everywhere") << "; rational with non-rational seed scalar: "
    << b.report["verdict"]["reason"].get<std::string>() << " at dimension 1";
  return {full && deficit, d.str()};
}

// 9. Finite oracle sweep at q = 27.
Outcome c9() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto ctx = lab::GammaContext::make(3, 3);
  const auto sw = lab::sweep(ctx, true);
  std::size_t witnessed = 0;
  const auto& F = *ctx.field;
  for (const auto& e : sw.entries) {
    if (!e.s) continue;
    const auto ps = lab::build_principal_series(ctx, e.ea, e.ed);
    // Witness recomputed from the closed form of S_s on the function on B.
    lab::Vec expect(ctx.q() + 1, 0);
    for (gf::Code l = 1; l < ctx.q(); ++l) {
      const gf::Code t = F.neg(F.inv(l));
      expect[t] = F.add(expect[t], F.mul(F.pow(l, *e.s + e.ea), F.pow(t, e.ed)));
    }
    if (*e.s == 0) expect[ctx.q()] = F.add(expect[ctx.q()], 1);
    bool ok = e.witness == expect && !linalg::is_zero(e.witness);
    for (const auto& u : ctx.u_generators) ok = ok && ps.act(u, e.witness) == e.witness;
    const auto gen = lab::spin(ps.module, ps.f_chi());
    const auto local = lab::socle(ps.module.restrict(gen));
    linalg::Subspace soc(ctx.field, ps.dim());
    for (const auto& c : local.basis()) soc.add(gen.combine(c));
    ok = ok && soc.contains(e.witness);
    witnessed += ok;
  }
  const double dt = seconds_since(t0);
  const std::size_t total = (ctx.q() - 1) * (ctx.q() - 1);
  const bool ok = total == 676 && sw.entries.size() + sw.swap_fixed == total && sw.not_unique == 0 &&
                  witnessed == sw.entries.size() && dt < kSweepSeconds;
  std::ostringstream d;
  d << total << " characters: " << sw.entries.size() << " swap-unfixed (" << sw.entries.size() - sw.not_unique
    << " with unique s, " << witnessed << " witnesses verified), " << sw.swap_fixed
    << " swap-fixed excluded by the precondition; " << dt << " s (limit " << kSweepSeconds << " s)";
  return {ok, d.str()};
}

// 10. Audit slope.
Outcome c10() {
  bool every = true;
  std::uint64_t slope = 0;
  std::string dims;
  for (int n = 1; n <= 10; ++n) {
    auto cfg = cli::default_config();
    cfg.audit_n_max = n;
    const auto r = cli::cmd_audit(cfg);
    every = every && r.report["audit"]["verdict"] == "nonadmissible";
    slope = r.report["audit"]["slope"].get<std::uint64_t>();
    if (n == 10) {
      for (const auto& w : r.report["audit"]["weights"])
        dims += " " + w["label"].get<std::string>() + ":" + std::to_string(w["dim"].get<int>());
    }
  }
  std::ostringstream d;
  d << "slope " << slope << " (required >= " << kAuditSlopeMin << "), paper-given dims" << dims
    << ", verdict nonadmissible for N_max = 1..10: " << (every ? "yes" : "no");
  return {every && slope >= kAuditSlopeMin, d.str()};
}

// 11. Byte-identical reports and digests.
Outcome c11() {
  const auto cfg = cli::default_config();
  std::size_t same = 0, total = 0;
  using Cmd = std::function<cli::CommandResult(const cli::RunConfig&)>;
  for (const Cmd& cmd : {Cmd(cli::cmd_verify_combinatorics), Cmd(cli::cmd_certify), Cmd(cli::cmd_audit),
                         Cmd(cli::cmd_verify_finite)}) {
    const auto a = cmd(cfg), b = cmd(cfg);
    ++total;
    bool eq = cli::canonical_dump(a.report) == cli::canonical_dump(b.report);
    for (const auto& [name, doc] : a.artifacts) eq = eq && cli::canonical_dump(doc) == cli::canonical_dump(b.artifacts.at(name));
    same += eq;
  }
  return {same == total, std::to_string(same) + "/" + std::to_string(total) +
                             " commands byte-identical across two runs (reports, certificates, oracle table)"};
}

}  // namespace

int main() {
  const auto world = default_world();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"delta-orbit reproduction", c1},
      {"weight and character tuples", c2},
      {"involution suite", [&] { return c3(*world); }},
      {"twist identity", [&] { return c4(*world); }},
      {"loop-shift law", [&] { return c5(*world); }},
      {"certification at defaults", c6},
      {"hypothesis necessity probe", c7},
      {"Schur mechanism", c8},
      {"finite oracle", c9},
      {"nonadmissibility audit", c10},
      {"determinism", c11},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
