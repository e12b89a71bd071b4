#include "nonadm/report.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "nonadm/error.hpp"
#include "nonadm/lab.hpp"
#include "nonadm/rng.hpp"

namespace nonadm::cli {

using diagram::CoeffVector;
using diagram::LambdaMode;
using diagram::LambdaSeq;
using gf::FieldElem;
using nlohmann::json;
using weights::OrbitIndexSet;

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

CommandResult start(const std::string& name, const RunConfig& config) {
  CommandResult r;
  r.command = name;
  r.report["command"] = name;
  r.report["config"] = config.echo();
  r.report["seed"] = std::to_string(config.seed);
  return r;
}

CommandResult failed(CommandResult r, int code, const Error& e) {
  r.exit_code = code;
  r.report["error"] = {{"code", std::string(errc_name(e.code()))}, {"message", e.what()}};
  r.report["exit_code"] = code;
  r.text += "error: " + std::string(e.what()) + "\n";
  return r;
}

CommandResult finish(CommandResult r) {
  r.report["exit_code"] = r.exit_code;
  return r;
}

json provenance_json(const World& w) {
  json j = json::object();
  for (const auto& wt : w.registry.weights()) j["sigma_" + wt.label.to_string()] = weights::provenance_name(wt.provenance);
  return j;
}

CoeffVector random_coeffs(Rng& rng, const gf::FieldPtr& ext, int lo, int hi) {
  CoeffVector c;
  const int n = static_cast<int>(rng.between(1, 4));
  for (int k = 0; k < n; ++k) {
    c.set(static_cast<int>(rng.between(lo, hi)), FieldElem(ext, static_cast<gf::Code>(1 + rng.below(ext->size() - 1))));
  }
  return c;
}

std::string set_list(const std::vector<OrbitIndexSet>& orbit) {
  std::string s;
  for (const auto& J : orbit) s += (s.empty() ? "" : " -> ") + J.to_string();
  return s;
}

}  // namespace

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

InvolutionSuite involution_suite(const World& world, std::size_t trials, std::uint64_t seed) {
  InvolutionSuite out;
  Rng rng(seed);
  const int W = world.config.working_window();
  const auto& reg = world.registry;
  std::vector<weights::Character> chars = reg.registered();
  for (const auto& chi : reg.registered())
    if (reg.info(chi).role == diagram::Role::Socle) chars.push_back(weights::char_swap(chi));
  const LambdaMode modes[] = {LambdaMode::Rational, LambdaMode::Twisted, LambdaMode::Spanning, LambdaMode::Degenerate};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto lambda = LambdaSeq::generate(modes[k], W, world.base, world.ext, rng.next());
    const std::size_t n = trials / 4 + (k < trials % 4 ? 1 : 0);
    for (std::size_t t = 0; t < n; ++t) {
      const auto& chi = chars[rng.below(chars.size())];
      const auto c = random_coeffs(rng, world.ext, -W + 1, W - 1);
      const auto once = diagram::pi_tilde(chi, c, lambda, reg);
      const auto twice = diagram::pi_tilde(once.chi, once.coeffs, lambda, reg);
      ++out.trials;
      if (twice.chi != chi || !(twice.coeffs == c)) ++out.failures;
    }
  }
  return out;
}

std::vector<LoopShift> loop_shifts(const World& world) {
  std::vector<LoopShift> out;
  const auto one = FieldElem::one(world.ext);
  for (const auto& orbit : weights::delta_orbits(world.config.params.f)) {
    LoopShift ls;
    ls.orbit = orbit.front().mask == 0 ? "II" : "I";
    ls.steps = orbit.size();
    auto chi = world.registry.socle(orbit.front());
    auto c = CoeffVector::unit(0, one);
    for (std::size_t s = 0; s < orbit.size(); ++s) {
      auto t = diagram::s_pi_tilde(chi, c, world.lambda, world.registry);
      chi = t.chi;
      c = t.coeffs;
    }
    ls.closed = chi == world.registry.socle(orbit.front()) && c.size() == 1 && *c.get(c.min_index()) == one;
    ls.shift = c.empty() ? 0 : c.min_index();
    out.push_back(ls);
  }
  return out;
}

TwistSuite twist_suite(const World& world, std::size_t lambdas, std::uint64_t seed) {
  TwistSuite out;
  Rng rng(seed);
  const int W = world.config.working_window();
  const auto target = world.registry.socle(weights::make_set(world.config.params.f, {0}));
  const LambdaMode mode = world.config.lambda_mode;
  for (std::size_t k = 0; k < lambdas; ++k) {
    const auto lambda = LambdaSeq::generate(mode, W, world.base, world.ext, rng.next());
    std::vector<CoeffVector> samples;
    for (int i = 0; i < 10; ++i) samples.push_back(random_coeffs(rng, world.ext, -W + 2, W - 2));
    const auto rep = diagram::twist_identity_check(world.registry, lambda, samples);
    ++out.lambdas;
    for (const auto& s : rep.samples) {
      ++out.samples;
      if (!s.ratios_match || s.chi1_path_end != target || s.chi2_path_end != target) ++out.failures;
    }
  }
  return out;
}

CommandResult cmd_verify_combinatorics(const RunConfig& config) {
  auto r = start("verify-combinatorics", config);
  Stopwatch sw;
  std::ostringstream text;

  const auto diag = weights::validate_genericity(config.params, config.bounds, config.table);
  r.report["genericity"] = {{"pass", diag.pass}, {"messages", diag.messages}};
  if (!diag.pass) {
    r.exit_code = kValidation;
    text << "genericity: FAIL\n";
    for (const auto& m : diag.messages) text << "  " << m << "\n";
    r.text = text.str();
    if (config.params.f == 3) {
      try {
        diagram::CharacterRegistry::build(config.params, config.table);
      } catch (const Error& e) {
        if (e.code() == Errc::CharacterClash) return failed(std::move(r), kValidation, e);
      }
    }
    return finish(std::move(r));
  }

  json orbits = json::array();
  text << "delta orbits (f = " << config.params.f << "):\n";
  for (const auto& orbit : weights::delta_orbits(config.params.f)) {
    json o = json::array();
    for (const auto& J : orbit) o.push_back(J.to_string());
    orbits.push_back(o);
    text << "  " << set_list(orbit) << "\n";
  }
  r.report["delta_orbits"] = orbits;
  r.timings["orbits"] = sw.lap();

  std::unique_ptr<World> world;
  try {
    world = build_world(config);
  } catch (const Error& e) {
    r.text = text.str();
    return failed(std::move(r), kValidation, e);
  }
  const auto& reg = world->registry;
  r.report["provenance"] = provenance_json(*world);
  r.report["exponent_convention"] = weights::kExponentConvention;

  json ws = json::array();
  text << "weights:\n";
  for (const auto& w : reg.weights()) {
    ws.push_back({{"label", w.label.to_string()},
                  {"tuple", w.tuple},
                  {"twist", w.twist},
                  {"dim", weights::weight_dim(w)},
                  {"provenance", weights::provenance_name(w.provenance)}});
    text << "  sigma_" << w.label.to_string() << " = (";
    for (std::size_t i = 0; i < w.tuple.size(); ++i) text << (i ? "," : "") << w.tuple[i];
    text << ") dim " << weights::weight_dim(w) << " [" << weights::provenance_name(w.provenance) << "]\n";
  }
  r.report["weights"] = ws;

  json chars = json::array();
  for (const auto& chi : reg.registered()) {
    json c{{"name", reg.name(chi)}, {"chi", {chi.ea, chi.ed}}, {"swap", reg.name(weights::char_swap(chi))}};
    if (auto b = reg.block_of(chi)) c["block"] = b->to_string();
    if (auto next = reg.cyc(chi)) c["cyc"] = reg.name(*next);
    chars.push_back(c);
  }
  r.report["registry"] = {{"characters", chars}, {"distinct", true}, {"notes", reg.notes()}};
  json inc = json::object();
  for (const auto& sigma : reg.blocks()) {
    json names = json::array();
    for (const auto& chi : reg.incident(sigma)) names.push_back(reg.name(chi));
    inc[sigma.to_string()] = names;
  }
  r.report["incidence"] = inc;
  text << "registry: " << reg.registered().size() << " distinct characters\n";
  r.timings["registry"] = sw.lap();

  bool ok = true;
  const auto inv = involution_suite(*world, config.involution_trials, config.seed);
  r.report["involution"] = {{"trials", inv.trials}, {"failures", inv.failures}};
  ok = ok && inv.failures == 0;
  text << "Pi~ squared = id: " << inv.trials - inv.failures << "/" << inv.trials << "\n";
  r.timings["involution"] = sw.lap();

  json loops = json::array();
  for (const auto& l : loop_shifts(*world)) {
    const int expected = l.orbit == "II" ? 1 : -1;
    loops.push_back({{"orbit", l.orbit}, {"steps", l.steps}, {"shift", l.shift}, {"closed", l.closed},
                     {"expected_shift", expected}});
    ok = ok && l.closed && l.shift == expected;
    text << "orbit " << l.orbit << ": " << l.steps << " steps, index shift " << (l.shift > 0 ? "+" : "") << l.shift
         << (l.closed ? "" : " (not closed)") << "\n";
  }
  r.report["loop_shift"] = loops;

  const auto tw = twist_suite(*world, config.twist_trials, config.seed + 1);
  r.report["twist_identity"] = {{"lambdas", tw.lambdas}, {"samples", tw.samples}, {"failures", tw.failures},
                                {"end_character", reg.name(reg.socle(weights::make_set(config.params.f, {0})))}};
  ok = ok && tw.failures == 0;
  text << "twist identity: " << tw.samples - tw.failures << "/" << tw.samples << " samples over " << tw.lambdas
       << " lambda sequences\n";
  r.timings["laws"] = sw.lap();

  r.report["pass"] = ok;
  r.exit_code = ok ? kSuccess : kValidation;
  text << (ok ? "PASS" : "FAIL") << "\n";
  r.text = text.str();
  return finish(std::move(r));
}

CommandResult cmd_verify_finite(const RunConfig& config) {
  auto r = start("verify-finite", config);
  if (!config.lab_enabled) {
    r.report["skipped"] = true;
    r.text = "finite lab disabled (lab.enabled = false); section skipped\n";
    return finish(std::move(r));
  }
  Stopwatch sw;
  std::ostringstream text;
  try {
    const auto ctx = lab::GammaContext::make(config.lab_p, config.lab_f);
    const bool conv = config.zero_pow_one;
    const auto main = lab::sweep(ctx, conv);
    r.timings["sweep"] = sw.lap();
    const auto flipped = lab::sweep(ctx, !conv);
    r.timings["sensitivity_sweep"] = sw.lap();

    json table = json::array();
    json findings = json::array();
    std::map<std::uint32_t, std::size_t> histogram;
    std::size_t sensitive = 0;
    for (std::size_t i = 0; i < main.entries.size(); ++i) {
      const auto& e = main.entries[i];
      const bool flag = e.candidates != flipped.entries[i].candidates;
      sensitive += flag;
      json row{{"chi", {e.ea, e.ed}}, {"unique", e.s.has_value()}, {"convention", conv ? "0^0=1" : "0^0=0"},
               {"convention_sensitive", flag}};
      row["s"] = e.s ? json(*e.s) : json(nullptr);
      table.push_back(row);
      if (e.s) {
        ++histogram[*e.s];
      } else {
        findings.push_back({{"chi", {e.ea, e.ed}},
                            {"candidates", e.candidates},
                            {"nonzero_images", e.nonzero.size()},
                            {"spin_dim", e.spin_dim},
                            {"socle_dim", e.socle_dim}});
      }
    }
    json hist = json::object();
    for (const auto& [s, n] : histogram) hist[std::to_string(s)] = n;
    const std::size_t total = static_cast<std::size_t>(ctx.q() - 1) * (ctx.q() - 1);
    r.report["lab"] = {{"q", ctx.q()},
                       {"p", config.lab_p},
                       {"f", config.lab_f},
                       {"model", "principal series Ind_B chi of GL_2(F_q); f_chi supported on B"},
                       {"characters", total},
                       {"swap_fixed", main.swap_fixed},
                       {"swap_unfixed", main.entries.size()},
                       {"unique", main.entries.size() - main.not_unique},
                       {"not_unique", main.not_unique},
                       {"s_histogram", hist},
                       {"convention", conv ? "0^0=1" : "0^0=0"},
                       {"convention_sensitive", sensitive},
                       {"flipped_not_unique", flipped.not_unique},
                       {"findings", findings}};
    r.artifacts["oracle_table.json"] = table;
    text << "finite lab over GL_2(F_" << ctx.q() << "), principal series of dim " << ctx.q() + 1 << "\n";
    text << "  characters: " << total << " (" << main.entries.size() << " swap-unfixed, " << main.swap_fixed
         << " swap-fixed)\n";
    text << "  unique s(chi): " << main.entries.size() - main.not_unique << "/" << main.entries.size() << "\n";
    for (const auto& [s, n] : histogram) text << "    s = " << s << ": " << n << "\n";
    text << "  convention " << (conv ? "0^0=1" : "0^0=0") << "; flipped convention changes " << sensitive
         << " candidate sets and leaves " << flipped.not_unique << " without a unique s\n";
    if (main.not_unique) text << "  FINDING: " << main.not_unique << " characters without a unique s\n";

    if (config.registry_check) {
      auto world = build_world(config);
      const auto& reg = world->registry;
      const auto big = lab::GammaContext::make(config.params.p, config.params.f);
      std::map<weights::Character, int> attach;
      json rows = json::array();
      for (const auto& chi : reg.registered()) {
        json row{{"name", reg.name(chi)}, {"chi", {chi.ea, chi.ed}}};
        if (chi.ea == chi.ed) {
          row["s"] = nullptr;
          row["note"] = "swap-fixed, excluded";
        } else {
          const auto fs = lab::find_s_candidates(big, static_cast<std::uint32_t>(chi.ea),
                                                 static_cast<std::uint32_t>(chi.ed), conv);
          row["candidates"] = fs.candidates;
          row["s"] = fs.s ? json(*fs.s) : json(nullptr);
          if (fs.s) attach[chi] = static_cast<int>(*fs.s);
        }
        rows.push_back(row);
      }
      world->registry.attach_s_values(attach);
      r.report["registry_s"] = {{"q", big.q()}, {"characters", rows}, {"attached", attach.size()}};
      text << "  registry characters at q = " << big.q() << ": " << attach.size() << " with a unique s\n";
      r.timings["registry_check"] = sw.lap();
    }
  } catch (const Error& e) {
    r.text = text.str();
    return failed(std::move(r), kValidation, e);
  }
  r.text = text.str();
  return finish(std::move(r));
}

CommandResult cmd_certify(const RunConfig& config) {
  auto r = start("certify", config);
  Stopwatch sw;
  std::ostringstream text;
  try {
    auto world = build_world(config);
    const auto& ctx = world->ctx;
    r.report["provenance"] = provenance_json(*world);
    engine::SeedSpec spec;
    spec.random_seeds = config.random_seeds;
    spec.max_support = config.max_support;
    spec.socle_seeds = config.socle_seeds;
    spec.rng_seed = config.battery_seed();
    for (const auto& [k, s] : config.extra_seeds) spec.extra.push_back(engine::parse_seed(s, ctx));
    const auto seeds = engine::generate_seeds(ctx, spec);
    r.timings["setup"] = sw.lap();

    const auto cert = engine::certify_irreducible(ctx, seeds);
    r.timings["certify"] = sw.lap();
    const json doc = engine::certificate_json(cert, ctx, config.echo());
    const auto replay = engine::replay_certificate(doc, ctx);
    r.timings["replay"] = sw.lap();

    json digests = json::array();
    for (const auto& s : cert.seeds) digests.push_back(engine::hex64(s.store.digest()));
    const auto& v = cert.verdict;
    r.report["verdict"] = engine::verdict_json(v, ctx);
    r.report["seeds"] = seeds.size();
    r.report["store_digests"] = digests;
    r.report["certificate_digest"] = engine::hex64(engine::fnv1a(canonical_dump(doc)));
    r.report["replay"] = {{"ok", replay.ok}, {"steps", replay.steps}, {"messages", replay.messages}};
    r.artifacts["certificate.json"] = doc;

    text << "lambda mode " << diagram::mode_name(config.lambda_mode) << ", scalars "
         << engine::scalar_mode_name(config.scalars) << ", target window [-" << config.window << ", "
         << config.window << "], working window " << config.working_window() << "\n";
    text << "seeds: " << seeds.size() << ", facts derived: " << v.facts_derived
         << ", boundary losses: " << v.boundary_losses << ", descent steps: " << v.descent_steps << "\n";
    text << "verdict: " << (v.certified ? "certified" : "not certified");
    if (!v.certified) text << " (" << v.reason << ", seed " << v.stalling_seed.value_or(0) << ")";
    text << "\nreplay: " << (replay.ok ? "ok" : "FAILED") << " (" << replay.steps << " steps)\n";
    r.exit_code = !replay.ok ? kCertificateFailure : (v.certified ? kSuccess : kNotCertified);
  } catch (const Error& e) {
    r.text = text.str();
    return failed(std::move(r), kValidation, e);
  }
  r.text = text.str();
  return finish(std::move(r));
}

CommandResult cmd_audit(const RunConfig& config) {
  auto r = start("audit", config);
  std::ostringstream text;
  try {
    auto world = build_world(config);
    std::vector<weights::WeightTuple> included;
    for (const auto& w : world->registry.weights())
      if (config.audit_all_weights || w.provenance == weights::Provenance::PaperGiven) included.push_back(w);
    const auto audit = engine::audit_admissibility(config.audit_n_max, included);
    json rows = json::array();
    for (const auto& row : audit.rows) rows.push_back({{"n", row.n}, {"bound", row.bound}});
    json ws = json::array();
    for (const auto& [label, dim] : audit.weights) ws.push_back({{"label", label}, {"dim", dim}});
    r.report["provenance"] = provenance_json(*world);
    r.report["audit"] = {{"rows", rows}, {"slope", audit.slope}, {"verdict", audit.verdict}, {"weights", ws},
                         {"included", config.audit_all_weights ? "all" : "paper"}};
    text << "lower bound on dim of K_1-invariants of N copies of D_0(rho)\n";
    for (const auto& [label, dim] : audit.weights) text << "  " << label << ": dim " << dim << "\n";
    for (const auto& row : audit.rows) text << "  N = " << row.n << ": >= " << row.bound << "\n";
    text << "slope " << audit.slope << ", verdict " << audit.verdict << "\n";
  } catch (const Error& e) {
    r.text = text.str();
    return failed(std::move(r), kValidation, e);
  }
  r.text = text.str();
  return finish(std::move(r));
}

CommandResult cmd_replay(const RunConfig& config, const json& certificate) {
  auto r = start("replay", config);
  std::unique_ptr<World> world;
  try {
    world = build_world(config);
  } catch (const Error& e) {
    return failed(std::move(r), kValidation, e);
  }
  try {
    const auto res = engine::replay_certificate(certificate, world->ctx);
    json differing = json::array();
    if (certificate.contains("config") && certificate["config"].is_object()) {
      const json now = config.echo();
      for (const auto& [k, v] : now.items())
        if (!certificate["config"].contains(k) || certificate["config"][k] != v) differing.push_back(k);
    }
    r.report["replay"] = {{"ok", res.ok}, {"steps", res.steps}, {"messages", res.messages},
                          {"config_keys_differing", differing}};
    r.exit_code = res.ok ? kSuccess : kCertificateFailure;
    std::ostringstream text;
    text << "replay: " << (res.ok ? "verified" : "MISMATCH") << " (" << res.steps << " steps)\n";
    if (!differing.empty()) text << "  config differs from the certificate's in: " << differing.dump() << "\n";
    const std::size_t shown = std::min<std::size_t>(res.messages.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) text << "  " << res.messages[i] << "\n";
    if (res.messages.size() > shown) text << "  ... " << res.messages.size() - shown << " more\n";
    r.text = text.str();
  } catch (const Error& e) {
    return failed(std::move(r), kCertificateFailure, e);
  } catch (const nlohmann::json::exception& e) {
    return failed(std::move(r), kCertificateFailure, Error(Errc::MalformedTrace, e.what()));
  }
  return finish(std::move(r));
}

}  // namespace nonadm::cli
