#pragma once

// Derivation system over facts about an unknown nonzero subrepresentation
// pi' of pi(lambda). A fact Eigen(chi, c) says sum_i c_i iota_i(v^chi) lies in
// pi'; Block(sigma, c) says (sum_i c_i iota_i)(D_{0,sigma}) lies in pi'.
// "not-certified" means "not derivable with these rules", never "reducible".

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nonadm/diagram.hpp"

namespace nonadm::engine {

using diagram::CharacterRegistry;
using diagram::CoeffVector;
using diagram::LambdaSeq;
using gf::FieldElem;
using weights::Character;
using weights::OrbitIndexSet;

enum class FactKind { Eigen, Block };

struct Fact {
  FactKind kind = FactKind::Eigen;
  Character chi;       // Eigen
  OrbitIndexSet sigma;  // Block
  CoeffVector coeffs;

  static Fact eigen(const Character& chi, CoeffVector c);
  static Fact block(OrbitIndexSet sigma, CoeffVector c);
  /// "E(31,1)|{0:[1,0,0,0,0,0]}" or "B{0,2}|{...}".
  std::string canonical() const;
  bool operator==(const Fact& o) const { return canonical() == o.canonical(); }
};

Fact parse_fact(const std::string& text, const gf::FieldPtr& ext);
std::string describe(const Fact& f, const CharacterRegistry& reg);

/// Full: any nonzero multiple of a fact is a fact, vectors are stored
/// normalized. Base: pi' is only an F_q-subspace, scalars are tracked exactly.
enum class ScalarMode { Full, Base };
std::string scalar_mode_name(ScalarMode m);
ScalarMode parse_scalar_mode(const std::string& s);

struct Budget {
  std::size_t max_facts = 1'000'000;
  std::size_t max_firings = 10'000'000;
};

struct Context {
  const CharacterRegistry* reg = nullptr;
  const LambdaSeq* lambda = nullptr;
  ScalarMode mode = ScalarMode::Full;
  FieldElem mu;  // in the extension field, must lie in F_q^x
  int target_window = 4;
  Budget budget;

  const gf::FieldPtr& ext() const { return lambda->ext(); }
  const gf::FieldPtr& base() const { return lambda->base(); }
};

/// Rule applications, pure functions of their inputs. Outputs are put in
/// the canonical form of the scalar mode.
namespace rules {
/// Block(sigma, c) -> Eigen(chi, c) for every registered chi in the block.
std::vector<Fact> incidence(const Context& ctx, const Fact& f);
/// Eigen(chi, c) -> Eigen(chi^s, Pi~ transport of c).
Fact pi(const Context& ctx, const Fact& f);
/// Eigen(chi_J, c) -> Block(sigma_delta(J), c transported as chi_J).
/// Taken as an axiom: a socle vector of sigma_J forces D_{0,sigma_delta(J)}.
Fact socle_gen(const Context& ctx, const Fact& f);
/// Eigen(chi, c) for a non-socle chi of block sigma -> Eigen(chi_sigma, c):
/// the K-span of a nonzero vector of D_{0,sigma} contains its socle sigma.
Fact socle_project(const Context& ctx, const Fact& f);
/// S~ Pi~ on Eigen facts; the chi_1 step carries the constant mu.
Fact cycle(const Context& ctx, const Fact& f);
/// f1 - (f1_j / f2_j) f2 for two Eigen facts of the same character. In Base
/// mode the ratio must lie in F_q (PivotNotRational); ZeroResult if nothing
/// survives.
Fact cancel(const Context& ctx, const Fact& f1, const Fact& f2, int pivot);
}  // namespace rules

struct TraceEntry {
  std::string rule;
  std::vector<std::size_t> inputs;
  std::string note;
};

/// Facts in derivation order. Each fact has exactly one trace entry.
class FactStore {
 public:
  FactStore() = default;
  FactStore(ScalarMode mode, gf::FieldPtr base) : mode_(mode), base_(std::move(base)) {}

  std::optional<std::size_t> find(const Fact& f) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Returns (id, inserted); id is npos when rejected. In Base mode a
  /// singleton fact whose scalar lies in the F_q-span of scalars already held
  /// at (label, index) is rejected unless `force` is set.
  std::pair<std::size_t, bool> add(const Fact& f, TraceEntry entry, bool force = false);

  const std::vector<Fact>& facts() const { return facts_; }
  const std::vector<TraceEntry>& trace() const { return trace_; }
  const Fact& at(std::size_t id) const { return facts_.at(id); }
  std::size_t size() const { return facts_.size(); }
  /// Order-independent: sum mod 2^64 of FNV-1a over canonical strings.
  std::uint64_t digest() const;

 private:
  ScalarMode mode_ = ScalarMode::Full;
  gf::FieldPtr base_;
  std::vector<Fact> facts_;
  std::vector<TraceEntry> trace_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, std::vector<FieldElem>> scalar_gens_;  // Base mode singletons
};

std::uint64_t fnv1a(const std::string& s);
std::string hex64(std::uint64_t v);

struct SpanCell {
  OrbitIndexSet sigma;
  int index = 0;
  std::size_t dimension = 0;  // over the scalar field of the mode, out of m
};

/// F_q-span of the scalars s with Block(sigma, s e_j) held, per target cell.
/// Full mode reports m wherever a singleton fact exists.
std::vector<SpanCell> scalar_closure(const Context& ctx, const std::vector<Fact>& facts);

struct SeedResult {
  Fact seed;
  bool certified = false;
  std::string reason;  // empty when certified
  std::size_t descent_steps = 0;
  std::size_t boundary_losses = 0;
  std::size_t firings = 0;
  std::size_t min_span = 0;
  FactStore store;
};

struct Verdict {
  bool certified = false;
  std::string reason;
  std::optional<std::size_t> stalling_seed;
  std::size_t facts_derived = 0;
  std::size_t boundary_losses = 0;
  std::size_t descent_steps = 0;
  std::size_t extension_degree = 0;  // m, the target span dimension
  std::vector<SpanCell> closure;     // minimum over seeds
};

/// Runs one seed: closure, descent to a singleton, final closure over the
/// target window, verdict.
SeedResult saturate(const Context& ctx, const Fact& seed);

struct SeedSpec {
  std::size_t random_seeds = 100;
  std::size_t max_support = 4;
  bool socle_seeds = true;
  std::uint64_t rng_seed = 1;
  std::vector<Fact> extra;
};

/// Seed battery: extra seeds, Eigen(chi_J, e_0) for every J, then random
/// facts with support in the target window and random labels and scalars.
std::vector<Fact> generate_seeds(const Context& ctx, const SeedSpec& spec);
/// "eigen <name> <i>:<elem>,..." or "block <set> <i>:<elem>,...", names as in
/// the registry ("chi_{0,2}", "chi_1^s"), sets as "{0,2}".
Fact parse_seed(const std::string& text, const Context& ctx);

struct Certification {
  Verdict verdict;
  std::vector<SeedResult> seeds;
};

Certification certify_irreducible(const Context& ctx, const std::vector<Fact>& seeds);
Verdict summarize(const Context& ctx, const std::vector<SeedResult>& seeds);

nlohmann::json verdict_json(const Verdict& v, const Context& ctx);
/// Certificate document; `config` is echoed verbatim.
nlohmann::json certificate_json(const Certification& cert, const Context& ctx,
                                const nlohmann::json& config);

struct ReplayResult {
  bool ok = true;
  std::vector<std::string> messages;
  std::size_t steps = 0;
};

/// Re-executes every trace step without search, checks digests and
/// recomputes each seed's verdict. Throws MalformedTrace on structural damage.
ReplayResult replay_certificate(const nlohmann::json& cert, const Context& ctx);

struct AuditRow {
  int n = 0;
  std::uint64_t bound = 0;
};

struct Audit {
  std::vector<AuditRow> rows;
  std::uint64_t slope = 0;
  std::string verdict;  // "nonadmissible" or "inconclusive"
  std::vector<std::pair<std::string, std::uint64_t>> weights;  // label, dim
};

/// K_1 acts trivially on Serre weights, so the K_1-fixed vectors of N copies
/// of D_0(rho) have dimension at least N times the sum of the included
/// weight dimensions.
Audit audit_admissibility(int n_max, const std::vector<weights::WeightTuple>& included);

}  // namespace nonadm::engine
