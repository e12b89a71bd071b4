#include "nonadm/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <set>

#include "nonadm/error.hpp"
#include "nonadm/rng.hpp"

namespace nonadm::engine {

using diagram::Role;
using weights::char_swap;
using weights::make_set;

Fact Fact::eigen(const Character& chi, CoeffVector c) {
  Fact f;
  f.kind = FactKind::Eigen;
  f.chi = chi;
  f.coeffs = std::move(c);
  return f;
}

Fact Fact::block(OrbitIndexSet sigma, CoeffVector c) {
  Fact f;
  f.kind = FactKind::Block;
  f.sigma = sigma;
  f.coeffs = std::move(c);
  return f;
}

std::string Fact::canonical() const {
  const std::string label = kind == FactKind::Eigen ? "E" + chi.to_string() : "B" + sigma.to_string();
  return label + "|" + coeffs.to_string();
}

namespace {

// Splits on `sep` outside brackets.
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '[' || ch == '(' || ch == '{') ++depth;
    if (ch == ']' || ch == ')' || ch == '}') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw Error(Errc::MalformedTrace, "bad integer '" + s + "'");
  return v;
}

CoeffVector parse_coeffs(const std::string& body, const gf::FieldPtr& ext) {
  CoeffVector c;
  for (const auto& item : split_top(body, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(Errc::MalformedTrace, "bad coefficient '" + item + "'");
    const auto value = gf::parse_elem(ext, item.substr(colon + 1));
    if (value.is_zero()) throw Error(Errc::MalformedTrace, "stored zero coefficient");
    c.set(to_int(item.substr(0, colon)), value);
  }
  return c;
}

OrbitIndexSet parse_set(const std::string& text) {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
    throw Error(Errc::MalformedTrace, "bad index set '" + text + "'");
  }
  OrbitIndexSet s{3, 0};
  for (const auto& m : split_top(text.substr(1, text.size() - 2), ',')) {
    const int j = to_int(m);
    if (j < 0 || j > 2) throw Error(Errc::MalformedTrace, "index set member out of range");
    s.mask |= 1u << j;
  }
  return s;
}

}  // namespace

Fact parse_fact(const std::string& text, const gf::FieldPtr& ext) {
  const auto bar = text.find('|');
  if (bar == std::string::npos || bar < 2 || text.size() < bar + 3 || text[bar + 1] != '{' ||
      text.back() != '}') {
    throw Error(Errc::MalformedTrace, "bad fact '" + text + "'");
  }
  const auto coeffs = parse_coeffs(text.substr(bar + 2, text.size() - bar - 3), ext);
  const std::string label = text.substr(1, bar - 1);
  if (text[0] == 'B') return Fact::block(parse_set(label), coeffs);
  if (text[0] != 'E' || label.front() != '(' || label.back() != ')') {
    throw Error(Errc::MalformedTrace, "bad fact label '" + label + "'");
  }
  const auto parts = split_top(label.substr(1, label.size() - 2), ',');
  if (parts.size() != 2) throw Error(Errc::MalformedTrace, "bad character '" + label + "'");
  Character chi;
  chi.ea = static_cast<std::uint64_t>(to_int(parts[0]));
  chi.ed = static_cast<std::uint64_t>(to_int(parts[1]));
  chi.modulus = 0;  // filled in by the caller's registry check
  return Fact::eigen(chi, coeffs);
}

std::string describe(const Fact& f, const CharacterRegistry& reg) {
  const std::string label =
      f.kind == FactKind::Eigen ? "Eigen(" + reg.name(f.chi) : "Block(sigma_" + f.sigma.to_string();
  return label + ", " + f.coeffs.to_string() + ")";
}

std::string scalar_mode_name(ScalarMode m) { return m == ScalarMode::Full ? "full" : "base"; }

ScalarMode parse_scalar_mode(const std::string& s) {
  if (s == "full") return ScalarMode::Full;
  if (s == "base") return ScalarMode::Base;
  throw Error(Errc::InvalidConfig, "engine.scalars must be full or base, got '" + s + "'");
}

namespace {

Fact canon(const Context& ctx, Fact f) {
  if (ctx.mode == ScalarMode::Full) f.coeffs = f.coeffs.normalized();
  return f;
}

void require_eigen(const Fact& f, const char* rule) {
  if (f.kind != FactKind::Eigen) {
    throw Error(Errc::PreconditionViolation, std::string(rule) + " expects an Eigen fact");
  }
}

}  // namespace

namespace rules {

std::vector<Fact> incidence(const Context& ctx, const Fact& f) {
  if (f.kind != FactKind::Block) throw Error(Errc::PreconditionViolation, "incidence expects a Block fact");
  std::vector<Fact> out;
  for (const auto& chi : ctx.reg->incident(f.sigma)) out.push_back(canon(ctx, Fact::eigen(chi, f.coeffs)));
  return out;
}

Fact pi(const Context& ctx, const Fact& f) {
  require_eigen(f, "pi");
  auto t = diagram::pi_tilde(f.chi, f.coeffs, *ctx.lambda, *ctx.reg);
  return canon(ctx, Fact::eigen(t.chi, std::move(t.coeffs)));
}

Fact socle_gen(const Context& ctx, const Fact& f) {
  require_eigen(f, "socle_gen");
  const auto& info = ctx.reg->info(f.chi);
  if (info.role != Role::Socle) {
    throw Error(Errc::PreconditionViolation, "socle_gen expects a socle character, got " + info.name);
  }
  auto c = diagram::apply_transport(diagram::transport_of(f.chi, *ctx.reg), f.coeffs, *ctx.lambda);
  return canon(ctx, Fact::block(weights::delta(info.set), std::move(c)));
}

Fact socle_project(const Context& ctx, const Fact& f) {
  require_eigen(f, "socle_project");
  const auto& info = ctx.reg->info(f.chi);
  const auto block = ctx.reg->block_of(f.chi);
  if (info.role == Role::Socle || !block) {
    throw Error(Errc::PreconditionViolation, "socle_project expects a non-socle block character");
  }
  return canon(ctx, Fact::eigen(ctx.reg->socle(*block), f.coeffs));
}

Fact cycle(const Context& ctx, const Fact& f) {
  require_eigen(f, "cycle");
  auto t = diagram::s_pi_tilde(f.chi, f.coeffs, *ctx.lambda, *ctx.reg);
  if (ctx.reg->info(f.chi).role == Role::Chi1) t.coeffs = t.coeffs.scaled(ctx.mu);
  return canon(ctx, Fact::eigen(t.chi, std::move(t.coeffs)));
}

Fact cancel(const Context& ctx, const Fact& f1, const Fact& f2, int pivot) {
  require_eigen(f1, "cancel");
  require_eigen(f2, "cancel");
  if (f1.chi != f2.chi) throw Error(Errc::PreconditionViolation, "cancel needs facts of one character");
  const auto a = f1.coeffs.get(pivot), b = f2.coeffs.get(pivot);
  if (!a || !b) throw Error(Errc::PreconditionViolation, "pivot outside the supports");
  const FieldElem ratio = *a / *b;
  if (ctx.mode == ScalarMode::Base && !ctx.ext()->in_parent(ratio.code())) {
    throw Error(Errc::PivotNotRational, "combination scalar " + gf::format_elem(ratio) + " is not in F_q");
  }
  CoeffVector out = f1.coeffs;
  for (const auto& [i, v] : f2.coeffs.entries()) {
    const auto cur = out.get(i).value_or(FieldElem::zero(ctx.ext()));
    out.set(i, cur - ratio * v);
  }
  out.set(pivot, FieldElem::zero(ctx.ext()));
  if (out.empty()) throw Error(Errc::ZeroResult, "every coefficient cancelled");
  return canon(ctx, Fact::eigen(f1.chi, std::move(out)));
}

}  // namespace rules

std::optional<std::size_t> FactStore::find(const Fact& f) const {
  if (auto it = index_.find(f.canonical()); it != index_.end()) return it->second;
  return std::nullopt;
}

std::pair<std::size_t, bool> FactStore::add(const Fact& f, TraceEntry entry, bool force) {
  const std::string key = f.canonical();
  if (auto it = index_.find(key); it != index_.end()) return {it->second, false};
  if (mode_ == ScalarMode::Base && f.coeffs.size() == 1) {
    const auto bar = key.find('|');
    const std::string cell = key.substr(0, bar) + "@" + std::to_string(f.coeffs.min_index());
    auto& gens = scalar_gens_[cell];
    std::vector<FieldElem> trial = gens;
    trial.push_back(f.coeffs.entries().begin()->second);
    const bool grows = gf::subfield_span(trial, base_).dimension > gens.size();
    if (!grows && !force) return {npos, false};
    if (grows) gens.push_back(trial.back());
  }
  const std::size_t id = facts_.size();
  facts_.push_back(f);
  trace_.push_back(std::move(entry));
  index_.emplace(key, id);
  return {id, true};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t FactStore::digest() const {
  std::uint64_t sum = 0;
  for (const auto& f : facts_) sum += fnv1a(f.canonical());
  return sum;
}

namespace {

std::size_t extension_degree(const Context& ctx) { return ctx.ext()->degree() / ctx.base()->degree(); }

}  // namespace

std::vector<SpanCell> scalar_closure(const Context& ctx, const std::vector<Fact>& facts) {
  std::map<std::pair<std::uint32_t, int>, std::vector<FieldElem>> scalars;
  for (const auto& f : facts) {
    if (f.kind != FactKind::Block || f.coeffs.size() != 1) continue;
    const int j = f.coeffs.min_index();
    if (j < -ctx.target_window || j > ctx.target_window) continue;
    scalars[{f.sigma.mask, j}].push_back(f.coeffs.entries().begin()->second);
  }
  std::vector<SpanCell> out;
  for (const auto& [key, vals] : scalars) {
    SpanCell cell;
    cell.sigma = OrbitIndexSet{3, key.first};
    cell.index = key.second;
    cell.dimension = ctx.mode == ScalarMode::Full ? extension_degree(ctx)
                                                  : gf::subfield_span(vals, ctx.base()).dimension;
    out.push_back(cell);
  }
  return out;
}

namespace {

// Completeness of the target grid and the smallest span found on it.
struct GridCheck {
  bool complete = true;
  std::size_t min_span = 0;
};

GridCheck check_grid(const Context& ctx, const std::vector<SpanCell>& cells) {
  GridCheck g;
  const std::size_t expected = 8u * static_cast<std::size_t>(2 * ctx.target_window + 1);
  g.complete = cells.size() == expected;
  g.min_span = extension_degree(ctx);
  if (!g.complete) g.min_span = 0;
  for (const auto& c : cells) g.min_span = std::min(g.min_span, c.dimension);
  return g;
}

class Runner {
 public:
  Runner(const Context& ctx, SeedResult& res) : ctx_(ctx), res_(res) {}

  void fire() {
    if (++res_.firings > ctx_.budget.max_firings) throw Error(Errc::BudgetExceeded, "rule firing budget exhausted");
  }

  std::pair<std::size_t, bool> add(const Fact& f, TraceEntry e, bool force = false) {
    auto r = res_.store.add(f, std::move(e), force);
    if (res_.store.size() > ctx_.budget.max_facts) throw Error(Errc::BudgetExceeded, "fact budget exhausted");
    return r;
  }

  // FIFO fixpoint of incidence, pi, socle_gen and socle_project, restricted
  // to facts supported in [lo, hi]. The lambda-scaled pi on chi_1, chi_1^s
  // fires on singleton facts only; on longer vectors it would generate new
  // coefficient ratios without helping the descent.
  void closure(std::size_t start, int lo, int hi) {
    std::deque<std::size_t> work{start};
    while (!work.empty()) {
      const std::size_t id = work.front();
      work.pop_front();
      const Fact f = res_.store.at(id);
      std::vector<std::pair<const char*, Fact>> outs;
      auto attempt = [&](auto&& fn) {
        fire();
        try {
          fn();
        } catch (const Error& e) {
          if (e.code() != Errc::WindowOverflow) throw;
          ++res_.boundary_losses;
        }
      };
      if (f.kind == FactKind::Block) {
        attempt([&] {
          for (auto& g : rules::incidence(ctx_, f)) outs.emplace_back("incidence", std::move(g));
        });
      } else {
        const auto role = ctx_.reg->info(f.chi).role;
        const bool scaled = role == Role::Chi1 || role == Role::Chi1Swap;
        if (!scaled || f.coeffs.size() == 1) attempt([&] { outs.emplace_back("pi", rules::pi(ctx_, f)); });
        if (role == Role::Socle) {
          attempt([&] { outs.emplace_back("socle_gen", rules::socle_gen(ctx_, f)); });
        } else if (role != Role::SocleSwap) {
          attempt([&] { outs.emplace_back("socle_project", rules::socle_project(ctx_, f)); });
        }
      }
      for (auto& [rule, g] : outs) {
        if (g.coeffs.min_index() < lo || g.coeffs.max_index() > hi) continue;
        auto [nid, inserted] = add(g, TraceEntry{rule, {id}, ""});
        if (inserted) work.push_back(nid);
      }
    }
  }

 private:
  const Context& ctx_;
  SeedResult& res_;
};

void check_seed(const Context& ctx, const Fact& seed) {
  if (seed.coeffs.empty()) throw Error(Errc::PreconditionViolation, "seed facts must be nonzero");
  if (seed.kind == FactKind::Eigen) (void)ctx.reg->info(seed.chi);
  for (const auto& [i, v] : seed.coeffs.entries()) {
    if (v.field() != ctx.ext()) throw Error(Errc::MixedFields, "seed coefficients outside the lambda field");
    if (!ctx.lambda->in_window(i)) throw Error(Errc::WindowOverflow, "seed support outside the working window");
  }
}

}  // namespace

SeedResult saturate(const Context& ctx, const Fact& seed_in) {
  check_seed(ctx, seed_in);
  SeedResult res;
  res.store = FactStore(ctx.mode, ctx.base());
  res.seed = canon(ctx, seed_in);
  Runner run(ctx, res);
  std::size_t cur = run.add(res.seed, TraceEntry{"seed", {}, ""}, true).first;
  const int W0 = ctx.target_window;

  auto fail = [&](std::string reason) {
    res.certified = false;
    res.reason = std::move(reason);
    return std::move(res);
  };

  while (res.store.at(cur).coeffs.size() > 1) {
    const CoeffVector c = res.store.at(cur).coeffs;
    const int lo = c.min_index(), hi = c.max_index(), width = hi - lo;
    run.closure(cur, std::min(lo, 0) - 2, std::max(hi, width) + 2);

    // Re-centre on the smallest support index so the pivot sits at 0.
    CoeffVector centred = c.shifted(-lo);
    if (ctx.mode == ScalarMode::Full) centred = centred.normalized();
    const auto id1 = res.store.find(Fact::eigen(ctx.reg->chi1(), centred));
    const auto id2 = res.store.find(Fact::eigen(ctx.reg->chi2(), centred));
    if (!id1 || !id2) return fail(res.boundary_losses ? "boundary loss" : "descent stalled");

    auto step = [&](const char* rule, std::size_t in) {
      run.fire();
      return run.add(rules::cycle(ctx, res.store.at(in)), TraceEntry{rule, {in}, ""}, true).first;
    };
    const std::size_t a = step("cycle", *id1);
    const std::size_t b = step("cycle", a);
    const std::size_t d = step("cycle", *id2);
    run.fire();
    try {
      const Fact reduced = rules::cancel(ctx, res.store.at(b), res.store.at(d), 0);
      cur = run.add(reduced, TraceEntry{"cancel", {b, d}, "pivot=0"}, true).first;
    } catch (const Error& e) {
      if (e.code() == Errc::PivotNotRational) return fail("pivot not rational");
      if (e.code() == Errc::ZeroResult) return fail("descent stalled");
      throw;
    }
    ++res.descent_steps;
  }

  const int j = res.store.at(cur).coeffs.min_index();
  run.closure(cur, std::min(-W0, j) - 2, std::max(W0, j) + 2);

  const auto grid = check_grid(ctx, scalar_closure(ctx, res.store.facts()));
  res.min_span = grid.min_span;
  if (!grid.complete) return fail(res.boundary_losses ? "boundary loss" : "descent stalled");
  if (grid.min_span < extension_degree(ctx)) return fail("scalar-closure deficit");
  res.certified = true;
  return res;
}

namespace {

std::vector<Character> known_characters(const CharacterRegistry& reg) {
  std::vector<Character> out = reg.registered();
  for (std::uint32_t m = 0; m < 8; ++m) out.push_back(char_swap(reg.socle({3, m})));
  return out;
}

}  // namespace

std::vector<Fact> generate_seeds(const Context& ctx, const SeedSpec& spec) {
  std::vector<Fact> out;
  for (const auto& f : spec.extra) out.push_back(canon(ctx, f));
  const auto one = FieldElem::one(ctx.ext());
  if (spec.socle_seeds) {
    for (std::uint32_t m = 0; m < 8; ++m) out.push_back(Fact::eigen(ctx.reg->socle({3, m}), CoeffVector::unit(0, one)));
  }
  Rng rng(spec.rng_seed);
  const auto chars = known_characters(*ctx.reg);
  const std::size_t labels = chars.size() + 8;
  const int W0 = ctx.target_window;
  const std::size_t positions = static_cast<std::size_t>(2 * W0 + 1);
  const std::size_t cap = std::max<std::size_t>(1, std::min(spec.max_support, positions));
  for (std::size_t k = 0; k < spec.random_seeds; ++k) {
    const std::size_t label = rng.below(labels);
    const std::size_t support = 1 + rng.below(cap);
    std::vector<int> idx;
    for (int i = -W0; i <= W0; ++i) idx.push_back(i);
    for (std::size_t i = 0; i < support; ++i) std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
    CoeffVector c;
    for (std::size_t i = 0; i < support; ++i) {
      c.set(idx[i], FieldElem(ctx.ext(), static_cast<gf::Code>(1 + rng.below(ctx.ext()->size() - 1))));
    }
    Fact f = label < chars.size() ? Fact::eigen(chars[label], c)
                                  : Fact::block({3, static_cast<std::uint32_t>(label - chars.size())}, c);
    out.push_back(canon(ctx, f));
  }
  return out;
}

Fact parse_seed(const std::string& text, const Context& ctx) {
  std::vector<std::string> words;
  for (std::size_t pos = 0; pos < text.size();) {
    const auto next = text.find(' ', pos);
    const auto w = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (!w.empty()) words.push_back(w);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (words.size() != 3) throw Error(Errc::InvalidConfig, "seed must read '<eigen|block> <label> <coeffs>'");
  CoeffVector c;
  try {
    c = parse_coeffs(words[2], ctx.ext());
  } catch (const Error& e) {
    throw Error(Errc::InvalidConfig, std::string("seed coefficients: ") + e.what());
  }
  if (words[0] == "block") {
    try {
      return canon(ctx, Fact::block(parse_set(words[1]), c));
    } catch (const Error& e) {
      throw Error(Errc::InvalidConfig, std::string("seed block: ") + e.what());
    }
  }
  if (words[0] != "eigen") throw Error(Errc::InvalidConfig, "seed kind must be eigen or block");
  for (const auto& chi : known_characters(*ctx.reg)) {
    if (ctx.reg->name(chi) == words[1]) return canon(ctx, Fact::eigen(chi, c));
  }
  throw Error(Errc::UnknownCharacter, "no registered character named '" + words[1] + "'");
}

Verdict summarize(const Context& ctx, const std::vector<SeedResult>& seeds) {
  Verdict v;
  v.extension_degree = extension_degree(ctx);
  v.certified = !seeds.empty();
  std::map<std::pair<std::uint32_t, int>, std::size_t> grid;
  for (std::uint32_t m = 0; m < 8; ++m)
    for (int j = -ctx.target_window; j <= ctx.target_window; ++j) grid[{m, j}] = v.extension_degree;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    const auto& s = seeds[k];
    v.facts_derived += s.store.size();
    v.boundary_losses += s.boundary_losses;
    v.descent_steps += s.descent_steps;
    if (!s.certified && v.certified) {
      v.certified = false;
      v.reason = s.reason;
      v.stalling_seed = k;
    }
    auto cells = scalar_closure(ctx, s.store.facts());
    std::map<std::pair<std::uint32_t, int>, std::size_t> have;
    for (const auto& c : cells) have[{c.sigma.mask, c.index}] = c.dimension;
    for (auto& [key, dim] : grid) {
      auto it = have.find(key);
      dim = std::min(dim, it == have.end() ? std::size_t{0} : it->second);
    }
  }
  if (seeds.empty()) v.reason = "no seeds";
  for (const auto& [key, dim] : grid) v.closure.push_back({{3, key.first}, key.second, dim});
  return v;
}

Certification certify_irreducible(const Context& ctx, const std::vector<Fact>& seeds) {
  if (seeds.empty()) throw Error(Errc::EmptySeeds, "the seed battery is empty");
  Certification cert;
  for (const auto& s : seeds) cert.seeds.push_back(saturate(ctx, s));
  cert.verdict = summarize(ctx, cert.seeds);
  return cert;
}

nlohmann::json verdict_json(const Verdict& v, const Context& ctx) {
  nlohmann::json j;
  j["status"] = v.certified ? "certified" : "not-certified";
  j["reason"] = v.reason;
  j["meaning"] = v.certified ? "every seed derives all blocks at all target indices"
                             : "not derivable in this rule system (no claim of reducibility)";
  if (v.stalling_seed) j["stalling_seed"] = *v.stalling_seed;
  j["facts_derived"] = v.facts_derived;
  j["boundary_losses"] = v.boundary_losses;
  j["descent_steps"] = v.descent_steps;
  j["scalar_mode"] = scalar_mode_name(ctx.mode);
  j["span_target"] = v.extension_degree;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : v.closure) cells.push_back({c.sigma.to_string(), c.index, c.dimension});
  j["scalar_closure"] = cells;
  return j;
}

nlohmann::json certificate_json(const Certification& cert, const Context& ctx, const nlohmann::json& config) {
  nlohmann::json j;
  j["format"] = "nonadm-certificate/1";
  j["config"] = config;
  j["scalar_mode"] = scalar_mode_name(ctx.mode);
  j["mu"] = gf::format_elem(ctx.mu);
  j["target_window"] = ctx.target_window;
  j["lambda_mode"] = diagram::mode_name(ctx.lambda->mode());
  nlohmann::json lam = nlohmann::json::array();
  for (const auto& v : ctx.lambda->values()) lam.push_back(gf::format_elem(v));
  j["lambda"] = lam;
  j["verdict"] = verdict_json(cert.verdict, ctx);
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& s : cert.seeds) {
    nlohmann::json e;
    e["seed"] = s.seed.canonical();
    e["certified"] = s.certified;
    e["reason"] = s.reason;
    e["digest"] = hex64(s.store.digest());
    e["facts"] = s.store.size();
    e["descent_steps"] = s.descent_steps;
    e["boundary_losses"] = s.boundary_losses;
    nlohmann::json trace = nlohmann::json::array();
    for (std::size_t i = 0; i < s.store.size(); ++i) {
      const auto& t = s.store.trace()[i];
      trace.push_back({t.rule, t.inputs, s.store.at(i).canonical(), t.note});
    }
    e["trace"] = trace;
    seeds.push_back(std::move(e));
  }
  j["seeds"] = seeds;
  return j;
}

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::MalformedTrace, what); }

// Parses a trace fact and binds its character to the registry's modulus.
Fact load_fact(const std::string& text, const Context& ctx) {
  Fact f = parse_fact(text, ctx.ext());
  if (f.kind == FactKind::Eigen) {
    f.chi.modulus = ctx.reg->params().q() - 1;
    if (!ctx.reg->knows(f.chi)) malformed("unregistered character in " + text);
  }
  return f;
}

}  // namespace

ReplayResult replay_certificate(const nlohmann::json& cert, const Context& ctx) {
  ReplayResult r;
  auto mismatch = [&](std::string msg) {
    r.ok = false;
    r.messages.push_back(std::move(msg));
  };
  if (!cert.is_object() || !cert.contains("seeds") || !cert["seeds"].is_array()) malformed("no seeds array");
  if (!cert.contains("verdict") || !cert["verdict"].is_object()) malformed("no verdict");
  bool all_certified = !cert["seeds"].empty();
  std::size_t k = 0;
  for (const auto& s : cert["seeds"]) {
    const std::string tag = "seed " + std::to_string(k++);
    if (!s.is_object() || !s.contains("trace") || !s["trace"].is_array() || !s.contains("seed") ||
        !s.contains("certified") || !s.contains("digest")) {
      malformed(tag + ": missing fields");
    }
    std::vector<Fact> facts;
    std::set<std::string> seen;
    std::uint64_t digest = 0;
    for (const auto& e : s["trace"]) {
      if (!e.is_array() || e.size() != 4 || !e[0].is_string() || !e[1].is_array() || !e[2].is_string() ||
          !e[3].is_string()) {
        malformed(tag + ": bad trace entry");
      }
      const std::string rule = e[0], text = e[2], note = e[3];
      std::vector<std::size_t> in;
      for (const auto& x : e[1]) {
        if (!x.is_number_unsigned() || x.get<std::size_t>() >= facts.size()) malformed(tag + ": bad input id");
        in.push_back(x.get<std::size_t>());
      }
      const Fact f = load_fact(text, ctx);
      const std::size_t pos = facts.size();
      const std::string where = tag + " step " + std::to_string(pos) + " (" + rule + ")";
      if (f.canonical() != text) mismatch(where + ": fact not in canonical form");
      if (canon(ctx, f).canonical() != text) mismatch(where + ": fact not normalized for the scalar mode");
      if (!seen.insert(text).second) mismatch(where + ": duplicate fact");
      try {
        auto expect_one = [&](const Fact& g) {
          if (g.canonical() != text) mismatch(where + ": recomputed " + g.canonical());
        };
        auto arity = [&](std::size_t n) {
          if (in.size() != n) malformed(where + ": wrong number of inputs");
        };
        if (rule == "seed") {
          arity(0);
          if (pos != 0 || text != s["seed"].get<std::string>()) mismatch(where + ": seed differs");
        } else if (rule == "incidence") {
          arity(1);
          const auto outs = rules::incidence(ctx, facts[in[0]]);
          if (std::none_of(outs.begin(), outs.end(), [&](const Fact& g) { return g.canonical() == text; })) {
            mismatch(where + ": not an incident character");
          }
        } else if (rule == "pi") {
          arity(1);
          expect_one(rules::pi(ctx, facts[in[0]]));
        } else if (rule == "socle_gen") {
          arity(1);
          expect_one(rules::socle_gen(ctx, facts[in[0]]));
        } else if (rule == "socle_project") {
          arity(1);
          expect_one(rules::socle_project(ctx, facts[in[0]]));
        } else if (rule == "cycle") {
          arity(1);
          expect_one(rules::cycle(ctx, facts[in[0]]));
        } else if (rule == "cancel") {
          arity(2);
          if (note.rfind("pivot=", 0) != 0) malformed(where + ": cancel without pivot");
          expect_one(rules::cancel(ctx, facts[in[0]], facts[in[1]], to_int(note.substr(6))));
        } else {
          malformed(where + ": unknown rule");
        }
      } catch (const Error& err) {
        if (err.code() == Errc::MalformedTrace) throw;
        mismatch(where + ": " + err.what());
      }
      facts.push_back(f);
      digest += fnv1a(text);
      ++r.steps;
    }
    if (facts.empty()) malformed(tag + ": empty trace");
    if (hex64(digest) != s["digest"].get<std::string>()) mismatch(tag + ": store digest differs");
    const auto grid = check_grid(ctx, scalar_closure(ctx, facts));
    const bool derivable = grid.complete && grid.min_span == extension_degree(ctx);
    const bool claimed = s["certified"].get<bool>();
    if (claimed && !derivable) mismatch(tag + ": certified claim not supported by the replayed facts");
    if (!claimed && derivable) mismatch(tag + ": replayed facts certify a seed recorded as not certified");
    all_certified = all_certified && claimed;
  }
  const bool claimed = cert["verdict"].value("status", "") == "certified";
  if (claimed != all_certified) mismatch("overall verdict disagrees with the seed verdicts");
  return r;
}

Audit audit_admissibility(int n_max, const std::vector<weights::WeightTuple>& included) {
  Audit a;
  for (const auto& w : included) {
    const auto d = weights::weight_dim(w);
    a.weights.emplace_back("sigma_" + w.label.to_string(), d);
    a.slope += d;
  }
  for (int n = 1; n <= n_max; ++n) a.rows.push_back({n, static_cast<std::uint64_t>(n) * a.slope});
  a.verdict = (a.slope > 0 && !a.rows.empty()) ? "nonadmissible" : "inconclusive";
  return a;
}

}  // namespace nonadm::engine
