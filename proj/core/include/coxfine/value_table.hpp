#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coxfine/belief_structure.hpp"

namespace coxfine {

// Exhaustive enumerations materialise one entry per (S ⊆ U) pair, i.e. 3^n.
inline constexpr int kMaxEnumerationWorlds = 14;

enum class Valuation { kBelief, kProbability };

using ValueId = std::uint32_t;
inline constexpr ValueId kNoValue = ~ValueId{0};

// Interned conditional values. Every Bel(V|U) (or Pr(V|U)) with U nonempty is
// assigned the rank of its value among all distinct values, so id order is
// value order and id equality is value equality. Lookups are by (S, U) with
// S ⊆ U, addressed through the base-3 code sum_i [i∈U]·3^i + [i∈S]·3^i.
class ValueTable {
 public:
  static ValueTable build(const BeliefStructure& structure,
                          Valuation valuation = Valuation::kBelief);

  int world_count() const { return n_; }
  std::size_t size() const { return values_.size(); }

  // S must be a subset of U and U nonempty.
  ValueId id(std::uint64_t s, std::uint64_t u) const { return ids_[tern_[s] + tern_[u]]; }
  ValueId id(EventSet s, EventSet u) const { return id(s.bits(), u.bits()); }
  ValueId id_of(EventSet v, EventSet u) const { return id((v & u).bits(), u.bits()); }

  const Rational& value(ValueId id) const { return values_[id]; }
  std::span<const Rational> values() const { return values_; }

  std::optional<ValueId> find(const Rational& v) const;
  ValueId zero_id() const { return zero_; }
  ValueId one_id() const { return one_; }

 private:
  int n_ = 0;
  std::vector<std::uint32_t> tern_;
  std::vector<ValueId> ids_;
  std::vector<Rational> values_;
  ValueId zero_ = kNoValue;
  ValueId one_ = kNoValue;
};

// Base-3 codes for every mask of n bits.
std::vector<std::uint32_t> ternary_codes(int n);

void require_enumerable(const BeliefStructure& structure);

}  // namespace coxfine
