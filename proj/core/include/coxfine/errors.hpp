#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coxfine {

enum class ErrorCode {
  kParse,               // malformed number or domain file syntax
  kNonPositiveWeight,   // f(w) <= 0 or f'(w) <= 0
  kTriggerViolation,    // f and f' differ outside the trigger, or disagree on its total
  kTooManyWorlds,       // more than 64 worlds
  kTooLargeToEnumerate, // exhaustive enumeration requested above the supported size
  kEmptyConditioning,   // Bel(V|U) with U empty
  kDegenerateDomain,    // every conditional probability is equal, no gap exists
  kPairConflict,        // two chains with equal (x, y) yield different values
  kClosureConflict,     // symmetric keys with incompatible values
  kMissingKey,          // a pair-table lookup that must succeed did not
  kClassMismatch,       // an order does not exhibit the expected class pattern
  kDecompositionRange,  // a chain profile falls outside its asserted range
  kUsage,               // bad CLI or configuration input
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace coxfine
