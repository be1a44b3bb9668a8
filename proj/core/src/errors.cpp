#include "coxfine/errors.hpp"

#include <cstdio>

#include "coxfine/event_set.hpp"

namespace coxfine {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kNonPositiveWeight: return "nonpositive-weight";
    case ErrorCode::kTriggerViolation: return "trigger-violation";
    case ErrorCode::kTooManyWorlds: return "too-many-worlds";
    case ErrorCode::kTooLargeToEnumerate: return "too-large-to-enumerate";
    case ErrorCode::kEmptyConditioning: return "empty-conditioning";
    case ErrorCode::kDegenerateDomain: return "degenerate-domain";
    case ErrorCode::kPairConflict: return "pair-conflict";
    case ErrorCode::kClosureConflict: return "closure-conflict";
    case ErrorCode::kMissingKey: return "missing-key";
    case ErrorCode::kClassMismatch: return "class-mismatch";
    case ErrorCode::kDecompositionRange: return "decomposition-range";
    case ErrorCode::kUsage: return "usage";
  }
  return "unknown";
}

std::string EventSet::hex() const {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%llx", static_cast<unsigned long long>(bits_));
  return buf;
}

}  // namespace coxfine
