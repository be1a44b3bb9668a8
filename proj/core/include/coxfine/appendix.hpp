#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "coxfine/belief_structure.hpp"
#include "coxfine/pair_table.hpp"

namespace coxfine {

// The four magnitude blocks {w1,w2,w3}, {w4,w5,w6}, {w7,w8,w9}, {w10,w11,w12}
// with block weights 11, 19·10^4, 19·10^8 and 19·10^18.
struct BlockLayout {
  std::array<EventSet, 4> blocks;
  std::array<int, 4> scales{0, 4, 8, 18};
};

// Resolves the blocks by label; throws kUsage when a label is missing.
BlockLayout block_layout(const BeliefStructure& structure);

// U lies inside a single block.
bool is_standard(const BlockLayout& layout, EventSet u);

// Distinct Pr(V|U) over standard nonempty U, ascending.
std::vector<Rational> relevant_numbers(const BeliefStructure& structure, const BlockLayout& layout);

// The f-heaviest standard subset of U: the heaviest U ∩ block, ties going
// to the later block.
EventSet heaviest_standard_subset(const BeliefStructure& structure, const BlockLayout& layout,
                                  EventSet u);

struct ClosenessReport {
  bool holds = true;
  Rational bound{2, 1000};
  // Distinct (V ∩ U, U) evaluations and the (V, U) pairs they stand for.
  std::uint64_t checks = 0;
  std::uint64_t pairs = 0;
  Rational worst;
  std::optional<ConditionalObject> worst_at;
  EventSet worst_reference;
};

// |Pr(V|U) − Pr(V|U')| < 2/1000 for every nonstandard nonempty U and every V.
ClosenessReport check_closeness(const BeliefStructure& structure, const BlockLayout& layout);

// Bel(V'∩V|U) = Bel(V'|V∩U) · Bel(V|U). Throws kEmptyConditioning when
// V ∩ U is empty.
bool classify_good(const BeliefStructure& structure, EventSet u, EventSet v, EventSet v_prime);

struct GoodCensus {
  bool holds = true;
  // States (U, V∩U, V'∩V∩U) with V∩U nonempty.
  std::uint64_t states = 0;
  std::uint64_t not_good = 0;
  // Not-good counts by V ∩ trigger.
  std::map<EventSet, std::uint64_t> by_shape;
  // A not-good triple outside the characterisation.
  std::optional<ChainWitness> counterexample;
};

// Every not-good triple has U ⊇ trigger and V ∩ trigger one of {w10},
// {w11}, {w10,w12}, {w11,w12}.
GoodCensus characterize_not_good(const BeliefStructure& structure);

// f(U1∩U2) = a·10^18 + b, f(U1) = 19·10^18 + c for a not-good chain, and for
// a paired chain V: f(V1∩V2) = a·10^k + b', f(V1) = 19·10^k + c' with k the
// scale of the heaviest block meeting V1.
struct ChainProfile {
  int a = 0;
  bool a_stated = false;  // a ∈ {2, 3, 16, 17}
  Rational b, c;
  int k = 18;
  Rational b_primed, c_primed;
  bool all_in = false;              // U3∩U2∩U1 = U2∩U1
  bool empty_intersection = false;  // U3∩U2∩U1 = ∅
};

// Throws kDecompositionRange when the chain is good, U1 misses part of the
// top block, a is not an integer or b, c leave [0, 20·10^8).
ChainProfile profile_decompose(const BeliefStructure& structure, const BlockLayout& layout,
                               const ChainWitness& u);
void pair_profile(const BeliefStructure& structure, const BlockLayout& layout,
                  ChainProfile& profile, const ChainWitness& v);

struct IdentityCheck {
  bool master = false;          // 10^18(ac'−19b') + 10^k(19b−ac) + (bc'−b'c) = 0
  bool k_expected = false;      // k ∈ {8, 18}
  bool primed_in_range = false; // 0 ≤ b', c' < 20·10^8 (k = 18) or 20·10^4 (k = 8)
  bool split = false;           // the three-way split (k = 8) or the two-way split (k = 18)
  bool primed_zero = true;      // k = 8 ⇒ b' = c' = 0
  bool holds() const { return master && k_expected && primed_in_range && split && primed_zero; }
};

IdentityCheck verify_identities(const ChainProfile& profile);

struct IdentityReport {
  std::uint64_t matched_pairs = 0;
  std::map<int, std::uint64_t> by_k;
  std::uint64_t decomposition_failures = 0;
  // Decomposed profiles with a outside {2, 3, 16, 17}.
  std::uint64_t a_outside_stated = 0;
  std::uint64_t master_failures = 0;
  std::uint64_t k_failures = 0;
  std::uint64_t range_failures = 0;
  std::uint64_t split_failures = 0;
  std::uint64_t k8_nonzero = 0;
  std::optional<std::pair<ChainWitness, ChainWitness>> first_failure;
  bool holds() const {
    return decomposition_failures + a_outside_stated + master_failures + k_failures + range_failures +
               split_failures + k8_nonzero == 0;
  }
};

struct TrichotomyViolation {
  ChainWitness not_good, partner;
};

// Chains are reduced to C1 = U1, C2 = U2∩U1, C3 = U3∩C2 with C2 nonempty.
// For every not-good chain and every chain with the same pair
// (Pr(C3|C2), Pr(C2|C1)) one of: both Bel(C3|C1), Bel(C3|C2) zero on both
// sides; C3 = C2 on both sides; equal f(C1) and f(C2).
struct TrichotomyReport {
  std::uint64_t chains = 0;
  std::uint64_t not_good_chains = 0;
  std::uint64_t groups = 0;             // value pairs holding a not-good chain
  std::uint64_t not_good_profiles = 0;  // distinct (pair, zero, saturated, f(C1), f(C2))
  std::uint64_t partner_profiles = 0;   // distinct (pair, f(C1), f(C2)) in those groups
  // Not-good chains with some chain breaking all three alternatives.
  std::uint64_t violating_chains = 0;
  std::optional<TrichotomyViolation> violation;
  // Filled when a block layout is given.
  std::optional<IdentityReport> identities;
  bool holds() const { return violating_chains == 0; }
};

TrichotomyReport verify_trichotomy(const BeliefStructure& structure,
                                   const BlockLayout* layout = nullptr);

// Full chain-pair cross product; at most 7 worlds.
TrichotomyReport verify_trichotomy_naive(const BeliefStructure& structure);

}  // namespace coxfine
