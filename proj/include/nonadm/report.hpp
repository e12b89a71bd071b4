#pragma once

// Sub-commands of the nonadm tool. Each returns a canonical JSON section (no
// timings), a text rendering, and its exit code; timings are kept apart so
// that identical inputs give byte-identical reports.

#include <optional>
#include <string>

#include <json.hpp>

#include "nonadm/config.hpp"

namespace nonadm::cli {

enum ExitCode : int { kSuccess = 0, kNotCertified = 3, kValidation = 4, kCertificateFailure = 5 };

struct CommandResult {
  std::string command;
  int exit_code = kSuccess;
  nlohmann::json report;   // canonical, hashed
  nlohmann::json timings;  // seconds per phase, not hashed
  std::string text;
  /// Extra artifacts by file name (certificate.json, oracle_table.json).
  std::map<std::string, nlohmann::json> artifacts;
};

CommandResult cmd_verify_combinatorics(const RunConfig& config);
CommandResult cmd_verify_finite(const RunConfig& config);
CommandResult cmd_certify(const RunConfig& config);
CommandResult cmd_audit(const RunConfig& config);
/// Replays `certificate` against the config's lambda and scalar mode.
CommandResult cmd_replay(const RunConfig& config, const nlohmann::json& certificate);

/// Sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const nlohmann::json& j);

// Individual checks, shared by verify-combinatorics and the acceptance run.

struct InvolutionSuite {
  std::size_t trials = 0;
  std::size_t failures = 0;
};
/// Pi~ applied twice on random (character, coefficients, lambda) triples,
/// split evenly over the four lambda modes.
InvolutionSuite involution_suite(const World& world, std::size_t trials, std::uint64_t seed);

struct LoopShift {
  std::string orbit;   // "I" or "II"
  std::size_t steps = 0;
  int shift = 0;       // observed index drift of a unit vector
  bool closed = false; // returned to the starting character
};
/// One lap of S~Pi~ around each socle orbit starting from a unit vector at 0.
std::vector<LoopShift> loop_shifts(const World& world);

struct TwistSuite {
  std::size_t lambdas = 0;
  std::size_t samples = 0;
  std::size_t failures = 0;  // ratio mismatch or wrong end character
};
TwistSuite twist_suite(const World& world, std::size_t lambdas, std::uint64_t seed);

}  // namespace nonadm::cli
