#include "nonadm/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nonadm/error.hpp"

namespace nonadm::cli {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& msg) {
  throw Error(Errc::InvalidConfig, key + ": " + msg);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad(key, "expected an integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key, "expected true or false, got '" + v + "'");
}

std::vector<int> parse_ints(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_number<int>(key, trim(tok)));
  if (out.empty()) bad(key, "empty list");
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidConfig, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

std::uint64_t RunConfig::lambda_seed() const { return splitmix(seed); }
std::uint64_t RunConfig::battery_seed() const { return splitmix(seed ^ 0x5eedba77e7ULL); }

RunConfig default_config() {
  RunConfig c;
  c.table = weights::parse_table(std::string(kDefaultTable));
  return c;
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::InvalidConfig, "config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));

    if (key == "field.p") c.params.p = parse_number<std::uint32_t>(key, v);
    else if (key == "field.f") c.params.f = parse_number<std::uint32_t>(key, v);
    else if (key == "field.m") c.m = parse_number<std::uint32_t>(key, v);
    else if (key == "params.r") c.params.r = parse_ints(key, v);
    else if (key == "genericity.r_min") c.bounds.r_min = parse_number<int>(key, v);
    else if (key == "genericity.r_max_offset") c.bounds.r_max_offset = parse_number<int>(key, v);
    else if (key == "tables.file") {
      c.table_file = v.empty() ? "" : (std::filesystem::path(base_dir) / v).lexically_normal().string();
    } else if (key == "lambda.mode") c.lambda_mode = diagram::parse_mode(v);
    else if (key.rfind("lambda.value.", 0) == 0) {
      c.lambda_overrides[parse_number<int>(key, key.substr(13))] = v;
    } else if (key == "engine.window") c.window = parse_number<int>(key, v);
    else if (key == "engine.margin") c.margin = parse_number<int>(key, v);
    else if (key == "engine.scalars") c.scalars = engine::parse_scalar_mode(v);
    else if (key == "engine.mu") c.mu = v;
    else if (key == "engine.random_seeds") c.random_seeds = parse_number<std::size_t>(key, v);
    else if (key == "engine.max_support") c.max_support = parse_number<std::size_t>(key, v);
    else if (key == "engine.socle_seeds") c.socle_seeds = parse_bool(key, v);
    else if (key == "engine.max_facts") c.budget.max_facts = parse_number<std::size_t>(key, v);
    else if (key == "engine.max_firings") c.budget.max_firings = parse_number<std::size_t>(key, v);
    else if (key.rfind("engine.seed.", 0) == 0) {
      c.extra_seeds[parse_number<int>(key, key.substr(12))] = v;
    } else if (key == "combinatorics.involution_trials") c.involution_trials = parse_number<std::size_t>(key, v);
    else if (key == "combinatorics.twist_trials") c.twist_trials = parse_number<std::size_t>(key, v);
    else if (key == "lab.enabled") c.lab_enabled = parse_bool(key, v);
    else if (key == "lab.p") c.lab_p = parse_number<std::uint32_t>(key, v);
    else if (key == "lab.f") c.lab_f = parse_number<std::uint32_t>(key, v);
    else if (key == "lab.zero_pow") {
      if (v != "one" && v != "zero") bad(key, "expected one or zero");
      c.zero_pow_one = v == "one";
    } else if (key == "lab.registry_check") c.registry_check = parse_bool(key, v);
    else if (key == "audit.n_max") c.audit_n_max = parse_number<int>(key, v);
    else if (key == "audit.weights") {
      if (v != "paper" && v != "all") bad(key, "expected paper or all");
      c.audit_all_weights = v == "all";
    } else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, v);
    else throw Error(Errc::InvalidConfig, "unknown key '" + key + "'");
  }

  if (c.window < 0) bad("engine.window", "must be nonnegative");
  if (c.margin < 2) bad("engine.margin", "must be at least 2");
  if (c.m < 1) bad("field.m", "must be positive");
  if (c.max_support < 1) bad("engine.max_support", "must be positive");
  if (c.audit_n_max < 0) bad("audit.n_max", "must be nonnegative");
  c.table = weights::parse_table(c.table_file.empty() ? std::string(kDefaultTable) : read_file(c.table_file));
  return c;
}

RunConfig load_config(const std::string& path) {
  return parse_config(read_file(path), std::filesystem::path(path).parent_path().string());
}

nlohmann::json RunConfig::echo() const {
  nlohmann::json j;
  j["field.p"] = std::to_string(params.p);
  j["field.f"] = std::to_string(params.f);
  j["field.m"] = std::to_string(m);
  j["params.r"] = join(params.r);
  j["genericity.r_min"] = std::to_string(bounds.r_min);
  j["genericity.r_max_offset"] = std::to_string(bounds.r_max_offset);
  j["tables.file"] = table_file.empty() ? "<built-in>" : table_file;
  j["tables.content"] = weights::format_table(table);
  j["lambda.mode"] = diagram::mode_name(lambda_mode);
  for (const auto& [i, v] : lambda_overrides) j["lambda.value." + std::to_string(i)] = v;
  j["engine.window"] = std::to_string(window);
  j["engine.margin"] = std::to_string(margin);
  j["engine.working_window"] = std::to_string(working_window());
  j["engine.scalars"] = engine::scalar_mode_name(scalars);
  j["engine.mu"] = mu;
  j["engine.random_seeds"] = std::to_string(random_seeds);
  j["engine.max_support"] = std::to_string(max_support);
  j["engine.socle_seeds"] = socle_seeds ? "true" : "false";
  j["engine.max_facts"] = std::to_string(budget.max_facts);
  j["engine.max_firings"] = std::to_string(budget.max_firings);
  for (const auto& [k, v] : extra_seeds) j["engine.seed." + std::to_string(k)] = v;
  j["combinatorics.involution_trials"] = std::to_string(involution_trials);
  j["combinatorics.twist_trials"] = std::to_string(twist_trials);
  j["lab.enabled"] = lab_enabled ? "true" : "false";
  j["lab.p"] = std::to_string(lab_p);
  j["lab.f"] = std::to_string(lab_f);
  j["lab.zero_pow"] = zero_pow_one ? "one" : "zero";
  j["lab.registry_check"] = registry_check ? "true" : "false";
  j["audit.n_max"] = std::to_string(audit_n_max);
  j["audit.weights"] = audit_all_weights ? "all" : "paper";
  j["seed"] = std::to_string(seed);
  return j;
}

World::World(RunConfig c, gf::FieldPtr b, gf::FieldPtr e, diagram::CharacterRegistry r, diagram::LambdaSeq l)
    : config(std::move(c)), base(std::move(b)), ext(std::move(e)), registry(std::move(r)), lambda(std::move(l)) {
  ctx.reg = &registry;
  ctx.lambda = &lambda;
  ctx.mode = config.scalars;
  ctx.target_window = config.window;
  ctx.budget = config.budget;
  const auto mu_base = gf::parse_elem(base, config.mu);
  if (mu_base.is_zero()) bad("engine.mu", "must be nonzero");
  ctx.mu = gf::embed_subfield(mu_base, ext);
}

std::unique_ptr<World> build_world(const RunConfig& config) {
  const auto diag = weights::validate_genericity(config.params, config.bounds, config.table);
  if (!diag.pass) {
    std::string msg = "genericity check failed";
    for (const auto& m : diag.messages) msg += "; " + m;
    throw Error(Errc::RangeViolation, msg);
  }
  auto base = gf::make_field(config.params.p, config.params.f);
  auto ext = gf::make_extension(base, config.m);
  auto registry = diagram::CharacterRegistry::build(config.params, config.table);
  std::map<int, gf::FieldElem> overrides;
  for (const auto& [i, v] : config.lambda_overrides) overrides[i] = gf::parse_elem(ext, v);
  auto lambda = diagram::LambdaSeq::generate(config.lambda_mode, config.working_window(), base, ext,
                                             config.lambda_seed(), overrides);
  return std::make_unique<World>(config, std::move(base), std::move(ext), std::move(registry), std::move(lambda));
}

}  // namespace nonadm::cli
