#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nonadm {

enum class Errc {
  NonPrime,
  ReducibleModulus,
  MixedFields,
  ZeroInverse,
  NoDeclaredParent,
  Unsupported,
  MissingTableEntry,
  RangeViolation,
  TableConflict,
  CharacterClash,
  UnknownCharacter,
  WindowOverflow,
  CycleUndefined,
  InvalidLambda,
  PivotNotRational,
  ZeroResult,
  BudgetExceeded,
  EmptySeeds,
  MalformedTrace,
  NotUnique,
  SOutOfRange,
  ZeroModule,
  PreconditionViolation,
  InvalidConfig,
};

std::string_view errc_name(Errc code) noexcept;

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace nonadm
