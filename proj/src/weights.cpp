#include "nonadm/weights.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <istream>
#include <set>
#include <sstream>

#include "nonadm/error.hpp"

namespace nonadm::weights {

std::vector<std::uint32_t> OrbitIndexSet::members() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t j = 0; j < f; ++j)
    if (contains(j)) out.push_back(j);
  return out;
}

std::string OrbitIndexSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (auto j : members()) {
    if (!first) out += ',';
    out += std::to_string(j);
    first = false;
  }
  return out + "}";
}

OrbitIndexSet make_set(std::uint32_t f, std::initializer_list<std::uint32_t> members) {
  OrbitIndexSet s{f, 0};
  for (auto j : members) s.mask |= 1u << (j % f);
  return s;
}

OrbitIndexSet delta(OrbitIndexSet J) {
  OrbitIndexSet out{J.f, 0};
  for (std::uint32_t j = 0; j < J.f; ++j) {
    const bool next_in = J.contains((j + 1) % J.f);
    if (j == 0 ? !next_in : next_in) out.mask |= 1u << j;
  }
  return out;
}

std::vector<std::vector<OrbitIndexSet>> delta_orbits(std::uint32_t f) {
  const std::uint32_t total = 1u << f;
  std::vector<std::uint32_t> order(total);
  for (std::uint32_t m = 0; m < total; ++m) order[m] = m;
  std::stable_sort(order.begin(), order.end(), [](std::uint32_t a, std::uint32_t b) {
    return std::popcount(a) < std::popcount(b);
  });
  std::vector<bool> seen(total, false);
  std::vector<std::vector<OrbitIndexSet>> orbits;
  for (auto start : order) {
    if (seen[start]) continue;
    std::vector<OrbitIndexSet> orbit;
    OrbitIndexSet cur{f, start};
    while (!seen[cur.mask]) {
      seen[cur.mask] = true;
      orbit.push_back(cur);
      cur = delta(cur);
    }
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

std::uint64_t GenericParams::q() const {
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < f; ++i) q *= p;
  return q;
}

std::string provenance_name(Provenance p) {
  return p == Provenance::PaperGiven ? "paper-given" : "configured";
}

namespace {

int parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(Errc::InvalidConfig, "bad integer '" + std::string(s) + "' in weight table");
  }
  return v;
}

std::vector<int> parse_tuple(std::string_view s) {
  std::vector<int> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_int(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

void check_range(const std::vector<int>& tuple, std::uint32_t p, const std::string& what) {
  for (int a : tuple) {
    if (a < 0 || a > static_cast<int>(p) - 1) {
      std::string t;
      for (std::size_t i = 0; i < tuple.size(); ++i) t += (i ? "," : "") + std::to_string(tuple[i]);
      throw Error(Errc::RangeViolation, what + " (" + t + ") leaves [0, p-1]");
    }
  }
}

}  // namespace

WeightTable parse_table(std::istream& in) {
  WeightTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string tok;
    std::map<std::string, std::string> kv;
    while (fields >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) {
        throw Error(Errc::InvalidConfig, "weight table line " + std::to_string(lineno) +
                                             ": expected key=value, got '" + tok + "'");
      }
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    if (kv.empty()) continue;
    if (kv.count("J")) {
      const auto mask = static_cast<std::uint32_t>(parse_int(kv["J"]));
      const int twist = kv.count("twist") ? parse_int(kv["twist"]) : 0;
      if (kv.count("tuple")) {
        table.weights[mask] = TableEntry{parse_tuple(kv["tuple"]), twist};
      } else {
        table.paper_twists[mask] = twist;
      }
    } else if (kv.count("chi")) {
      const int which = parse_int(kv["chi"]);
      const int twist = kv.count("twist") ? parse_int(kv["twist"]) : 0;
      if (which == 1) {
        table.chi1_twist = twist;
      } else if (which == 2) {
        table.chi2_twist = twist;
      } else {
        throw Error(Errc::InvalidConfig, "chi must be 1 or 2");
      }
    } else {
      throw Error(Errc::InvalidConfig,
                  "weight table line " + std::to_string(lineno) + " has neither J= nor chi=");
    }
  }
  return table;
}

WeightTable parse_table(const std::string& text) {
  std::istringstream in(text);
  return parse_table(in);
}

std::string format_table(const WeightTable& table) {
  std::ostringstream os;
  for (const auto& [mask, e] : table.weights) {
    os << "J=" << mask << " tuple=";
    for (std::size_t i = 0; i < e.tuple.size(); ++i) os << (i ? "," : "") << e.tuple[i];
    if (e.twist) os << " twist=" << e.twist;
    os << '\n';
  }
  for (const auto& [mask, twist] : table.paper_twists) os << "J=" << mask << " twist=" << twist << '\n';
  if (table.chi1_twist) os << "chi=1 twist=" << table.chi1_twist << '\n';
  if (table.chi2_twist) os << "chi=2 twist=" << table.chi2_twist << '\n';
  return os.str();
}

std::optional<std::vector<int>> paper_weight_tuple(OrbitIndexSet J, const GenericParams& params) {
  if (params.f != 3 || J.f != 3 || params.r.size() != 3) return std::nullopt;
  const int p = static_cast<int>(params.p);
  const auto& r = params.r;
  if (J == make_set(3, {2})) return std::vector<int>{r[0], p - 2 - r[1], r[2] + 1};
  if (J == make_set(3, {0, 1})) return std::vector<int>{p - 1 - r[0], r[1] + 1, p - 2 - r[2]};
  return std::nullopt;
}

WeightTuple weight_tuple(OrbitIndexSet J, const GenericParams& params, const WeightTable& table) {
  WeightTuple out;
  out.label = J;
  const auto configured = table.weights.find(J.mask);
  if (auto paper = paper_weight_tuple(J, params)) {
    if (configured != table.weights.end() && configured->second.tuple != *paper) {
      throw Error(Errc::TableConflict, "configured tuple for " + J.to_string() +
                                           " disagrees with the printed formula");
    }
    out.tuple = *paper;
    out.provenance = Provenance::PaperGiven;
    if (configured != table.weights.end()) out.twist = configured->second.twist;
    if (auto t = table.paper_twists.find(J.mask); t != table.paper_twists.end()) out.twist = t->second;
  } else if (configured != table.weights.end()) {
    out.tuple = configured->second.tuple;
    out.twist = configured->second.twist;
    out.provenance = Provenance::Configured;
  } else {
    throw Error(Errc::MissingTableEntry, "no weight tuple for " + J.to_string());
  }
  if (out.tuple.size() != params.f) {
    throw Error(Errc::RangeViolation, "tuple for " + J.to_string() + " has wrong length");
  }
  check_range(out.tuple, params.p, "weight tuple for " + J.to_string());
  return out;
}

std::string Character::to_string() const {
  return "(" + std::to_string(ea) + "," + std::to_string(ed) + ")";
}

Character make_character(std::int64_t ea, std::int64_t ed, std::uint64_t modulus) {
  const auto m = static_cast<std::int64_t>(modulus);
  auto red = [m](std::int64_t v) { return static_cast<std::uint64_t>(((v % m) + m) % m); };
  return Character{red(ea), red(ed), modulus};
}

Character char_swap(const Character& chi) { return Character{chi.ed, chi.ea, chi.modulus}; }

Character encode_character(const std::vector<int>& tuple, const GenericParams& params, int twist) {
  const std::uint64_t n = params.q() - 1;
  std::int64_t e = 0, scale = 1;
  for (int m : tuple) {
    e += m * scale;
    scale *= params.p;
  }
  return make_character(e + twist, twist, n);
}

SpecialCharacters special_characters(const GenericParams& params, const WeightTable& table) {
  if (params.f != 3 || params.r.size() != 3) {
    throw Error(Errc::InvalidConfig, "special characters are defined for f = 3");
  }
  const int p = static_cast<int>(params.p);
  const auto& r = params.r;
  SpecialCharacters out;
  out.chi1_tuple = {p - 2 - r[0], p - 1 - r[1], r[2] + 1};
  out.chi2_tuple = {p - r[0], r[1] + 1, r[2]};
  check_range(out.chi1_tuple, params.p, "chi_1 tuple");
  check_range(out.chi2_tuple, params.p, "chi_2 tuple");
  out.chi1 = encode_character(out.chi1_tuple, params, table.chi1_twist);
  out.chi2 = encode_character(out.chi2_tuple, params, table.chi2_twist);
  return out;
}

std::uint64_t weight_dim(const WeightTuple& w) {
  std::uint64_t d = 1;
  for (int a : w.tuple) d *= static_cast<std::uint64_t>(a + 1);
  return d;
}

Diagnostics validate_genericity(const GenericParams& params, const GenericityBounds& bounds,
                                const WeightTable& table) {
  Diagnostics diag;
  auto fail = [&](const std::string& msg) {
    diag.pass = false;
    diag.messages.push_back("FAIL " + msg);
  };
  if (params.r.size() != params.f) fail("r has " + std::to_string(params.r.size()) + " entries, f = " +
                                        std::to_string(params.f));
  const int hi = static_cast<int>(params.p) - bounds.r_max_offset;
  for (std::size_t i = 0; i < params.r.size(); ++i) {
    const int ri = params.r[i];
    if (ri < bounds.r_min || ri > hi) {
      fail("r" + std::to_string(i) + " = " + std::to_string(ri) + " outside [" +
           std::to_string(bounds.r_min) + ", " + std::to_string(hi) + "]");
    }
  }
  if (!diag.pass) return diag;

  std::vector<std::pair<std::string, Character>> chars;
  for (std::uint32_t mask = 0; mask < (1u << params.f); ++mask) {
    const OrbitIndexSet J{params.f, mask};
    try {
      const auto w = weight_tuple(J, params, table);
      chars.emplace_back("chi_" + J.to_string(), encode_character(w.tuple, params, w.twist));
    } catch (const Error& e) {
      if (e.code() == Errc::MissingTableEntry) {
        diag.messages.push_back("note: " + std::string(e.what()));
      } else {
        fail(e.what());
      }
    }
  }
  if (params.f == 3) {
    try {
      const auto sc = special_characters(params, table);
      chars.emplace_back("chi_1", sc.chi1);
      chars.emplace_back("chi_1^s", char_swap(sc.chi1));
      chars.emplace_back("chi_2", sc.chi2);
      chars.emplace_back("chi_2^s", char_swap(sc.chi2));
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  for (std::size_t i = 0; i < chars.size(); ++i) {
    for (std::size_t j = i + 1; j < chars.size(); ++j) {
      if (chars[i].second == chars[j].second) {
        fail(chars[i].first + " and " + chars[j].first + " coincide at " + chars[i].second.to_string());
      }
    }
  }
  if (diag.pass) diag.messages.push_back("pass: bounds and distinctness (" + std::to_string(chars.size()) +
                                         " characters)");
  return diag;
}

}  // namespace nonadm::weights
