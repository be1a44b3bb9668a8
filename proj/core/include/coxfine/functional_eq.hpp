#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "coxfine/belief_structure.hpp"
#include "coxfine/cox_checker.hpp"
#include "coxfine/pair_table.hpp"
#include "coxfine/value_table.hpp"

namespace coxfine {

// (U, A, B1, B2) with A = V ∩ U nonempty and B1, B2 disjoint subsets of A.
// Bel(· | A) only sees intersections with A, so this reduced form realises
// every triple x = Bel(V∩V1 | V∩U), y = Bel(V∩V2 | V∩U), z = Bel(V | U).
struct RWitness {
  EventSet given, event, first, second;

  friend auto operator<=>(const RWitness&, const RWitness&) = default;
};

struct RTriple {
  ValueId x = kNoValue, y = kNoValue, z = kNoValue;
  RWitness witness;
};

// Visits all 5^n states (minus those with A empty) in ascending
// (U, A, B1 ∪ B2, B1) order.
void for_each_r_state(const ValueTable& values, std::uint64_t u_begin, std::uint64_t u_end,
                      const std::function<void(const RTriple&)>& fn);

// Distinct value triples, each with its smallest witness, sorted by (x, y, z).
std::vector<RTriple> enumerate_r_constrained(const BeliefStructure& structure,
                                             const ValueTable& values);

struct Eq7Report {
  bool holds = true;
  std::uint64_t states = 0;
  std::uint64_t missing_keys = 0;
  std::optional<RWitness> counterexample;
  std::optional<RWitness> missing;
};

// F'(x,z) + F'(y,z) = F'(x+y,z) on every R-constrained triple, with all three
// keys looked up in the pair table.
Eq7Report verify_eq7(const BeliefStructure& structure, const ConstrainedPairTable& table,
                     int threads = 1);

// A point (x, y, z) with x + y ≤ 1 where the extension breaks the
// functional equation, if one of the probed candidates does.
struct AdditivityGap {
  Rational x, y, z;
  Rational fxz, fyz, fsum;  // F(x,z), F(y,z), F(x+y,z)
};

std::optional<AdditivityGap> find_additivity_gap(const TotalCombination& total);

}  // namespace coxfine
