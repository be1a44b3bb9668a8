#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coxfine/belief_structure.hpp"
#include "coxfine/errors.hpp"
#include "coxfine/parallel.hpp"
#include "coxfine/value_table.hpp"

namespace coxfine {

// u1 ⊇ u2 ⊇ u3 with u2 nonempty.
struct ChainWitness {
  EventSet u1, u2, u3;

  friend auto operator<=>(const ChainWitness&, const ChainWitness&) = default;
};

// One constrained pair (x, y) = (Bel(u3|u2), Bel(u2|u1)) and its forced
// value w = Bel(u3|u1). The stored witness is the lexicographically smallest
// (u1, u2, u3) among all chains realising the key.
struct PairEntry {
  ValueId x = kNoValue;
  ValueId y = kNoValue;
  ValueId w = kNoValue;
  ChainWitness witness;
  // Smallest chain for this key whose u1 does not contain the trigger; u2 is
  // empty when every chain for the key has the trigger inside u1.
  ChainWitness trigger_free;
  bool has_trigger_chain = false;

  bool has_trigger_free_chain() const { return !trigger_free.u2.empty(); }
};

class PairConflictError : public Error {
 public:
  PairConflictError(ValueId x, ValueId y, ValueId w_first, ValueId w_second, ChainWitness first,
                    ChainWitness second);

  ValueId x, y, w_first, w_second;
  ChainWitness first, second;
};

struct PairTableOptions {
  int threads = 1;
  // Only chains whose conditioning sets u2 (hence u1) contain this set.
  EventSet anchor;
};

// The partial combination function F' on all constrained pairs.
class ConstrainedPairTable {
 public:
  // Throws PairConflictError when F' is not well defined.
  static ConstrainedPairTable build(const BeliefStructure& structure, const ValueTable& values,
                                    const PairTableOptions& options = {});

  const ValueTable& values() const { return *values_; }
  EventSet anchor() const { return anchor_; }

  // Sorted by (x, y).
  std::span<const PairEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::uint64_t chain_count() const { return chains_; }

  const PairEntry* lookup(ValueId x, ValueId y) const {
    const std::uint32_t i = index_.find(pack_pair(x, y));
    return i == FlatIndex::kAbsent ? nullptr : &entries_[i];
  }
  ValueId combine(ValueId x, ValueId y) const {
    const PairEntry* e = lookup(x, y);
    return e ? e->w : kNoValue;
  }

 private:
  const ValueTable* values_ = nullptr;
  EventSet anchor_;
  std::vector<PairEntry> entries_;
  FlatIndex index_;
  std::uint64_t chains_ = 0;
};

}  // namespace coxfine
