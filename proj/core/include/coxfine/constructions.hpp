#pragma once

#include <optional>
#include <vector>

#include "coxfine/belief_structure.hpp"
#include "coxfine/value_table.hpp"

namespace coxfine {

// The four magnitude blocks of the 12-world domain, as world indices
// (w1 is index 0). In the 13-world variant w0 is index 0 and every block
// index shifts by one.
inline constexpr int kCounterexampleWorlds = 12;
inline constexpr int kFineWorlds = 13;

std::vector<Rational> counterexample_base_weights();

// Minimum positive gap between distinct values of Pr(V|U) over all V and
// nonempty U. Throws kDegenerateDomain when only one value exists.
Rational select_delta(const BeliefStructure& base);
Rational select_delta(const ValueTable& probability_values);

// 12 worlds; f' moves delta·10^18 of weight from w10 to w11; trigger {w10,w11,w12}.
// Without an explicit delta, delta = select_delta(base).
BeliefStructure build_halpern(std::optional<Rational> delta = std::nullopt);

// 13 worlds w0..w12; f(w0) = 10^-5 and w3, w6, w9, w12 lose 10^-5 each;
// trigger {w0,w10,w11,w12}; same delta mechanism.
BeliefStructure build_fine13(std::optional<Rational> delta = std::nullopt);

// The structure with the same base weights but f' = f and the same labels.
BeliefStructure probability_of(const BeliefStructure& s);

// Exhaustive check that Pr(a) > Pr(b) implies Bel(a) > Bel(b) over all value
// classes, plus the largest |Bel(V|U) - Pr(V|U)|.
struct OrderPreservation {
  bool holds = true;
  std::size_t probability_classes = 0;
  Rational max_shift;
  // First violating adjacent pair of probability classes, if any.
  std::optional<ConditionalObject> lower_witness;
  std::optional<ConditionalObject> upper_witness;
};

OrderPreservation check_order_preservation(const BeliefStructure& s, const ValueTable& bel,
                                           const ValueTable& pr);

}  // namespace coxfine
