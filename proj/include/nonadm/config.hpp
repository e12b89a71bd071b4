#pragma once

// Run configuration: a line-based key=value file with section prefixes.
//
//   field.p = 5            field.f = 3            field.m = 2
//   params.r = 1,1,1       genericity.r_min = 1   genericity.r_max_offset = 3
//   tables.file = <path>   (empty: the built-in table)
//   lambda.mode = twisted  lambda.value.<i> = <elem>   (overrides)
//   engine.window = 4      engine.margin = 48     engine.scalars = full|base
//   engine.mu = 1          engine.random_seeds = 100      engine.max_support = 4
//   engine.socle_seeds = true   engine.max_facts / engine.max_firings
//   engine.seed.<k> = eigen chi_{0,2} 0:[1,0,0,0,0,0]   (extra seeds)
//   combinatorics.involution_trials = 1000   combinatorics.twist_trials = 100
//   lab.enabled = true     lab.p = 3   lab.f = 3   lab.zero_pow = one|zero
//   lab.registry_check = true
//   audit.n_max = 10       audit.weights = paper|all
//   seed = 1
//
// '#' starts a comment. Unknown keys are rejected.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "nonadm/diagram.hpp"
#include "nonadm/engine.hpp"
#include "nonadm/weights.hpp"

namespace nonadm::cli {

/// Text of data/default_weights.tbl, compiled in.
extern const char* const kDefaultTable;

struct RunConfig {
  weights::GenericParams params;
  weights::GenericityBounds bounds;
  std::uint32_t m = 2;

  std::string table_file;  // empty: built-in
  weights::WeightTable table;

  diagram::LambdaMode lambda_mode = diagram::LambdaMode::Twisted;
  std::map<int, std::string> lambda_overrides;

  int window = 4;
  int margin = 48;
  engine::ScalarMode scalars = engine::ScalarMode::Full;
  std::string mu = "1";
  std::size_t random_seeds = 100;
  std::size_t max_support = 4;
  bool socle_seeds = true;
  engine::Budget budget;
  std::map<int, std::string> extra_seeds;

  std::size_t involution_trials = 1000;
  std::size_t twist_trials = 100;

  bool lab_enabled = true;
  std::uint32_t lab_p = 3;
  std::uint32_t lab_f = 3;
  bool zero_pow_one = true;
  bool registry_check = true;

  int audit_n_max = 10;
  bool audit_all_weights = false;

  std::uint64_t seed = 1;

  int working_window() const { return window + margin; }
  /// Independent streams derived from the single seed.
  std::uint64_t lambda_seed() const;
  std::uint64_t battery_seed() const;

  /// Resolved values of every key, as strings, sorted by key.
  nlohmann::json echo() const;
};

/// Parses config text; relative table paths resolve against `base_dir`.
/// Throws InvalidConfig on unknown keys or malformed values.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);
/// Defaults with the built-in table.
RunConfig default_config();

/// Objects built from a config, kept alive together because the engine
/// context points into them.
struct World {
  RunConfig config;
  gf::FieldPtr base;
  gf::FieldPtr ext;
  diagram::CharacterRegistry registry;
  diagram::LambdaSeq lambda;
  engine::Context ctx;

  World(RunConfig c, gf::FieldPtr b, gf::FieldPtr e, diagram::CharacterRegistry r, diagram::LambdaSeq l);
  World(const World&) = delete;
  World& operator=(const World&) = delete;
};

/// Builds fields, registry, lambda and engine context. Throws on genericity,
/// clash or lambda failures.
std::unique_ptr<World> build_world(const RunConfig& config);

}  // namespace nonadm::cli
