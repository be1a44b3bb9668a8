#include "coxfine/pair_table.hpp"

#include <algorithm>
#include <string>

namespace coxfine {

namespace {

std::string chain_text(const ChainWitness& c) {
  return "(" + c.u1.hex() + ", " + c.u2.hex() + ", " + c.u3.hex() + ")";
}

struct PartialTable {
  FlatIndex index{1 << 16};
  std::vector<PairEntry> entries;
  std::uint64_t chains = 0;
};

void absorb(PartialTable& into, const PairEntry& e) {
  const auto slot = static_cast<std::uint32_t>(into.entries.size());
  const std::uint32_t at = into.index.insert(pack_pair(e.x, e.y), slot);
  if (at == slot) {
    into.entries.push_back(e);
    return;
  }
  PairEntry& have = into.entries[at];
  if (have.w != e.w) throw PairConflictError(e.x, e.y, have.w, e.w, have.witness, e.witness);
  if (!have.has_trigger_free_chain()) have.trigger_free = e.trigger_free;
  have.has_trigger_chain = have.has_trigger_chain || e.has_trigger_chain;
}

void enumerate(const ValueTable& values, std::uint64_t trigger, std::uint64_t anchor,
               std::uint64_t lo, std::uint64_t hi, PartialTable& out) {
  for (std::uint64_t u1 = lo; u1 < hi; ++u1) {
    if ((anchor & ~u1) != 0) continue;
    const bool triggered = (trigger & ~u1) == 0;
    const std::uint64_t free_bits = u1 & ~anchor;
    for_each_submask(free_bits, [&](std::uint64_t extra) {
      const std::uint64_t u2 = anchor | extra;
      if (u2 == 0) return;
      const ValueId y = values.id(u2, u1);
      for_each_submask(u2, [&](std::uint64_t u3) {
        ++out.chains;
        const ValueId x = values.id(u3, u2);
        const ValueId w = values.id(u3, u1);
        const auto slot = static_cast<std::uint32_t>(out.entries.size());
        const std::uint32_t at = out.index.insert(pack_pair(x, y), slot);
        const ChainWitness chain{EventSet(u1), EventSet(u2), EventSet(u3)};
        if (at == slot) {
          PairEntry e;
          e.x = x;
          e.y = y;
          e.w = w;
          e.witness = chain;
          if (triggered) {
            e.has_trigger_chain = true;
          } else {
            e.trigger_free = chain;
          }
          out.entries.push_back(e);
          return;
        }
        PairEntry& have = out.entries[at];
        if (have.w != w) throw PairConflictError(x, y, have.w, w, have.witness, chain);
        if (triggered) {
          have.has_trigger_chain = true;
        } else if (!have.has_trigger_free_chain()) {
          have.trigger_free = chain;
        }
      });
    });
  }
}

}  // namespace

PairConflictError::PairConflictError(ValueId x_, ValueId y_, ValueId w1, ValueId w2,
                                     ChainWitness c1, ChainWitness c2)
    : Error(ErrorCode::kPairConflict,
            "constrained pair maps to two values: chains " + chain_text(c1) + " and " +
                chain_text(c2)),
      x(x_),
      y(y_),
      w_first(w1),
      w_second(w2),
      first(c1),
      second(c2) {}

ConstrainedPairTable ConstrainedPairTable::build(const BeliefStructure& structure,
                                                 const ValueTable& values,
                                                 const PairTableOptions& options) {
  require_enumerable(structure);
  ConstrainedPairTable t;
  t.values_ = &values;
  t.anchor_ = options.anchor;
  const std::uint64_t masks = std::uint64_t{1} << structure.size();
  const std::uint64_t trigger = structure.trigger().bits();
  const std::uint64_t anchor = options.anchor.bits();

  const int parts = std::max(1, options.threads);
  std::vector<PartialTable> partial(parts);
  run_partitioned(1, masks, parts, [&](int p, std::uint64_t lo, std::uint64_t hi) {
    enumerate(values, trigger, anchor, lo, hi, partial[p]);
  });

  // Parts cover increasing u1 ranges, so folding them in order keeps the
  // smallest witness for every key.
  PartialTable merged = std::move(partial[0]);
  for (int p = 1; p < parts; ++p) {
    for (const PairEntry& e : partial[p].entries) absorb(merged, e);
    merged.chains += partial[p].chains;
    partial[p] = PartialTable{};
  }

  t.chains_ = merged.chains;
  t.entries_ = std::move(merged.entries);
  std::sort(t.entries_.begin(), t.entries_.end(), [](const PairEntry& a, const PairEntry& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  t.index_ = FlatIndex(t.entries_.size());
  for (std::size_t i = 0; i < t.entries_.size(); ++i) {
    t.index_.insert(pack_pair(t.entries_[i].x, t.entries_[i].y), static_cast<std::uint32_t>(i));
  }
  return t;
}

}  // namespace coxfine
