#include "nonadm/error.hpp"

namespace nonadm {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonPrime: return "NonPrime";
    case Errc::ReducibleModulus: return "ReducibleModulus";
    case Errc::MixedFields: return "MixedFields";
    case Errc::ZeroInverse: return "ZeroInverse";
    case Errc::NoDeclaredParent: return "NoDeclaredParent";
    case Errc::Unsupported: return "Unsupported";
    case Errc::MissingTableEntry: return "MissingTableEntry";
    case Errc::RangeViolation: return "RangeViolation";
    case Errc::TableConflict: return "TableConflict";
    case Errc::CharacterClash: return "CharacterClash";
    case Errc::UnknownCharacter: return "UnknownCharacter";
    case Errc::WindowOverflow: return "WindowOverflow";
    case Errc::CycleUndefined: return "CycleUndefined";
    case Errc::InvalidLambda: return "InvalidLambda";
    case Errc::PivotNotRational: return "PivotNotRational";
    case Errc::ZeroResult: return "ZeroResult";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::EmptySeeds: return "EmptySeeds";
    case Errc::MalformedTrace: return "MalformedTrace";
    case Errc::NotUnique: return "NotUnique";
    case Errc::SOutOfRange: return "SOutOfRange";
    case Errc::ZeroModule: return "ZeroModule";
    case Errc::PreconditionViolation: return "PreconditionViolation";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace nonadm
