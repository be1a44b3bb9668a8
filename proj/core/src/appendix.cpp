#include "coxfine/appendix.hpp"

#include <algorithm>

#include "coxfine/errors.hpp"
#include "coxfine/parallel.hpp"
#include "coxfine/value_table.hpp"
#include "sum_cache.hpp"

namespace coxfine {

namespace {

// f(mask) for every mask of the structure's worlds.
std::vector<Rational> subset_weights(const BeliefStructure& s) {
  const std::size_t n = s.size();
  std::vector<Rational> f(std::size_t{1} << n);
  for (std::size_t m = 1; m < f.size(); ++m) {
    const int low = std::countr_zero(m);
    f[m] = f[m & (m - 1)] + s.base()[low];
  }
  return f;
}

// Ranks of subset weights, so equal weights share an id.
std::vector<std::uint32_t> weight_ids(const std::vector<Rational>& f) {
  std::vector<Rational> sorted = f;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::uint32_t> ids(f.size());
  for (std::size_t m = 0; m < f.size(); ++m) {
    ids[m] = static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), f[m]) -
                                        sorted.begin());
  }
  return ids;
}

Rational pow10(int k) {
  long v = 1;
  for (int i = 0; i < k; ++i) v *= 10;
  return Rational(v);
}

// Visits reduced chains c1 ⊇ c2 ⊇ c3 with c2 nonempty.
template <typename Fn>
void for_each_reduced_chain(const BeliefStructure& s, Fn&& fn) {
  const std::uint64_t full = s.worlds().bits();
  for (std::uint64_t c1 = 1; c1 <= full; ++c1) {
    for_each_submask(c1, [&](std::uint64_t c2) {
      if (c2 == 0) return;
      for_each_submask(c2, [&](std::uint64_t c3) { fn(c1, c2, c3); });
    });
  }
}

// Per-chain facts used by the trichotomy.
struct ChainFacts {
  ValueId px, py;
  bool good, zero, saturated;
  std::uint32_t f1, f2;
};

class ChainEvaluator {
 public:
  explicit ChainEvaluator(const BeliefStructure& s)
      : bel_(ValueTable::build(s)),
        pr_(ValueTable::build(s, Valuation::kProbability)),
        fid_(weight_ids(subset_weights(s))) {}

  ChainFacts operator()(std::uint64_t c1, std::uint64_t c2, std::uint64_t c3) {
    const ValueId bx = bel_.id(c3, c2), by = bel_.id(c2, c1), bw = bel_.id(c3, c1);
    ChainFacts f;
    f.px = pr_.id(c3, c2);
    f.py = pr_.id(c2, c1);
    f.good = products_.check(bel_, bx, by, bw);
    f.zero = bx == bel_.zero_id() && bw == bel_.zero_id();
    f.saturated = c3 == c2;
    f.f1 = fid_[c1];
    f.f2 = fid_[c2];
    return f;
  }

 private:
  ValueTable bel_;
  ValueTable pr_;
  std::vector<std::uint32_t> fid_;
  detail::ProductCache products_;
};

std::uint64_t fpair(const ChainFacts& f) { return pack_pair(f.f1, f.f2); }

int category(bool zero, bool saturated) { return (zero ? 1 : 0) | (saturated ? 2 : 0); }

// Category c can stand beside profile p without any alternative applying.
bool unrescued(bool zero, bool saturated, int c) {
  return !(zero && (c & 1)) && !(saturated && (c & 2));
}

ChainWitness chain_of(std::uint64_t c1, std::uint64_t c2, std::uint64_t c3) {
  return {EventSet(c1), EventSet(c2), EventSet(c3)};
}

}  // namespace

BlockLayout block_layout(const BeliefStructure& structure) {
  BlockLayout layout;
  for (int b = 0; b < 4; ++b) {
    for (int j = 1; j <= 3; ++j) {
      const std::string label = "w" + std::to_string(3 * b + j);
      const int i = structure.index_of(label);
      if (i < 0) throw Error(ErrorCode::kUsage, "block layout needs world " + label);
      layout.blocks[b] = layout.blocks[b] | EventSet::single(i);
    }
  }
  return layout;
}

bool is_standard(const BlockLayout& layout, EventSet u) {
  return std::any_of(layout.blocks.begin(), layout.blocks.end(),
                     [&](EventSet b) { return u.subset_of(b); });
}

std::vector<Rational> relevant_numbers(const BeliefStructure& structure,
                                       const BlockLayout& layout) {
  require_enumerable(structure);
  const auto f = subset_weights(structure);
  std::vector<Rational> out;
  for (EventSet block : layout.blocks) {
    for_each_submask(block.bits(), [&](std::uint64_t u) {
      if (u == 0) return;
      for_each_submask(u, [&](std::uint64_t s) { out.push_back(f[s] / f[u]); });
    });
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EventSet heaviest_standard_subset(const BeliefStructure& structure, const BlockLayout& layout,
                                  EventSet u) {
  EventSet best;
  Rational best_weight(-1);
  for (EventSet block : layout.blocks) {
    const EventSet part = u & block;
    const Rational w = structure.weight_sum(WeightTable::kBase, part);
    if (w >= best_weight) {
      best = part;
      best_weight = w;
    }
  }
  return best;
}

ClosenessReport check_closeness(const BeliefStructure& structure, const BlockLayout& layout) {
  require_enumerable(structure);
  const auto f = subset_weights(structure);
  const std::uint64_t full = structure.worlds().bits();
  ClosenessReport r;
  for (std::uint64_t u = 1; u <= full; ++u) {
    if (is_standard(layout, EventSet(u))) continue;
    const std::uint64_t ref = heaviest_standard_subset(structure, layout, EventSet(u)).bits();
    r.pairs += full + 1;
    for_each_submask(u, [&](std::uint64_t s) {
      ++r.checks;
      Rational d = f[s] / f[u] - f[s & ref] / f[ref];
      if (d.sign() < 0) d = -d;
      if (!r.worst_at || d > r.worst) {
        r.worst = d;
        r.worst_at = ConditionalObject{EventSet(s), EventSet(u)};
        r.worst_reference = EventSet(ref);
      }
    });
  }
  r.holds = r.worst < r.bound;
  return r;
}

bool classify_good(const BeliefStructure& structure, EventSet u, EventSet v, EventSet v_prime) {
  if ((v & u).empty()) {
    throw Error(ErrorCode::kEmptyConditioning, "good triple needs V ∩ U nonempty");
  }
  return structure.bel(v_prime & v, u) == structure.bel(v_prime, v & u) * structure.bel(v, u);
}

GoodCensus characterize_not_good(const BeliefStructure& structure) {
  require_enumerable(structure);
  const ValueTable bel = ValueTable::build(structure);
  const EventSet trigger = structure.trigger();
  detail::ProductCache products;
  GoodCensus r;
  for_each_reduced_chain(structure, [&](std::uint64_t u, std::uint64_t a, std::uint64_t b) {
    ++r.states;
    if (products.check(bel, bel.id(b, a), bel.id(a, u), bel.id(b, u))) return;
    ++r.not_good;
    const EventSet shape = EventSet(a) & trigger;
    ++r.by_shape[shape];
    const bool shifted = structure.weight_sum(WeightTable::kBase, shape) !=
                         structure.weight_sum(WeightTable::kPerturbed, shape);
    if (!(trigger.subset_of(EventSet(u)) && shifted) && !r.counterexample) {
      r.counterexample = chain_of(u, a, b);
    }
  });
  r.holds = !r.counterexample;
  return r;
}

ChainProfile profile_decompose(const BeliefStructure& structure, const BlockLayout& layout,
                               const ChainWitness& u) {
  const EventSet c1 = u.u1, c2 = u.u2 & u.u1, c3 = u.u3 & c2;
  if (c2.empty() || classify_good(structure, c1, c2, c3)) {
    throw Error(ErrorCode::kDecompositionRange, "profile needs a not-good chain");
  }
  const EventSet top = layout.blocks[3];
  const Rational e18 = pow10(18);
  auto f = [&](EventSet s) { return structure.weight_sum(WeightTable::kBase, s); };
  ChainProfile p;
  const Rational a = f(c2 & top) / e18;
  p.b = f(c2.without(top));
  p.c = f(c1.without(top));
  p.all_in = c3 == c2;
  p.empty_intersection = c3.empty();
  const bool integral = a.mpq().get_den() == 1;
  p.a = integral ? static_cast<int>(a.mpq().get_num().get_si()) : -1;
  p.a_stated = p.a == 2 || p.a == 3 || p.a == 16 || p.a == 17;
  const Rational bound = Rational(20) * pow10(8);
  if (!integral || f(c1 & top) != Rational(19) * e18 || p.b.sign() < 0 || p.c.sign() < 0 ||
      !(p.b < bound) || !(p.c < bound)) {
    throw Error(ErrorCode::kDecompositionRange, "chain profile outside its range");
  }
  return p;
}

void pair_profile(const BeliefStructure& structure, const BlockLayout& layout,
                  ChainProfile& profile, const ChainWitness& v) {
  const EventSet c1 = v.u1, c2 = v.u2 & v.u1;
  int block = 0;
  for (int i = 0; i < 4; ++i) {
    if (!(c1 & layout.blocks[i]).empty()) block = i;
  }
  profile.k = layout.scales[block];
  const Rational s = pow10(profile.k);
  profile.b_primed = structure.weight_sum(WeightTable::kBase, c2) - Rational(profile.a) * s;
  profile.c_primed = structure.weight_sum(WeightTable::kBase, c1) - Rational(19) * s;
}

IdentityCheck verify_identities(const ChainProfile& p) {
  const Rational a(p.a), n19(19), s = pow10(p.k), e18 = pow10(18);
  const Rational& b = p.b;
  const Rational& c = p.c;
  const Rational& b1 = p.b_primed;
  const Rational& c1 = p.c_primed;
  const Rational t1 = a * c1 - n19 * b1, t2 = n19 * b - a * c, t3 = b * c1 - b1 * c;
  IdentityCheck r;
  r.master = (e18 * t1 + s * t2 + t3).is_zero();
  r.k_expected = p.k == 8 || p.k == 18;
  if (r.k_expected) {
    const Rational bound = Rational(20) * pow10(p.k == 18 ? 8 : 4);
    r.primed_in_range = b1.sign() >= 0 && c1.sign() >= 0 && b1 < bound && c1 < bound;
  }
  if (p.k == 8) {
    r.split = t1.is_zero() && t2.is_zero() && t3.is_zero();
    r.primed_zero = b1.is_zero() && c1.is_zero();
  } else if (p.k == 18) {
    r.split = (n19 * (b - b1) + a * (c1 - c)).is_zero() && t3.is_zero();
  }
  return r;
}

TrichotomyReport verify_trichotomy(const BeliefStructure& structure, const BlockLayout* layout) {
  require_enumerable(structure);
  ChainEvaluator eval(structure);
  TrichotomyReport r;

  struct Profile {
    std::uint32_t group;
    bool zero, saturated;
    std::uint64_t fp;
    std::uint64_t multiplicity;
    ChainWitness chain;
  };
  FlatIndex groups;
  FlatIndex profile_index;
  std::vector<Profile> profiles;
  for_each_reduced_chain(structure, [&](std::uint64_t c1, std::uint64_t c2, std::uint64_t c3) {
    ++r.chains;
    const ChainFacts f = eval(c1, c2, c3);
    if (f.good) return;
    ++r.not_good_chains;
    const auto g = groups.insert(pack_pair(f.px, f.py), static_cast<std::uint32_t>(r.groups));
    if (g == r.groups) ++r.groups;
    if (g >= (1U << 24)) throw Error(ErrorCode::kTooLargeToEnumerate, "too many value groups");
    const std::uint64_t key = (std::uint64_t{g} << 36) |
                              (static_cast<std::uint64_t>(category(f.zero, f.saturated)) << 32) |
                              (std::uint64_t{f.f1} << 16) | f.f2;
    const auto slot = static_cast<std::uint32_t>(profiles.size());
    const auto at = profile_index.insert(key, slot);
    if (at == slot) {
      profiles.push_back({g, f.zero, f.saturated, fpair(f), 0, chain_of(c1, c2, c3)});
    }
    ++profiles[at].multiplicity;
  });
  r.not_good_profiles = profiles.size();

  // Per group and category: up to two chains with distinct (f(C1), f(C2)).
  struct Slot {
    std::uint64_t fp = ~std::uint64_t{0};
    ChainWitness chain;
  };
  std::vector<std::array<std::array<Slot, 2>, 4>> seen(r.groups);
  FlatIndex partner_index;
  std::vector<std::pair<std::uint32_t, ChainWitness>> partners;
  for_each_reduced_chain(structure, [&](std::uint64_t c1, std::uint64_t c2, std::uint64_t c3) {
    const ChainFacts f = eval(c1, c2, c3);
    const auto g = groups.find(pack_pair(f.px, f.py));
    if (g == FlatIndex::kAbsent) return;
    auto& cat = seen[g][category(f.zero, f.saturated)];
    const std::uint64_t fp = fpair(f);
    if (cat[0].fp == ~std::uint64_t{0}) {
      cat[0] = {fp, chain_of(c1, c2, c3)};
    } else if (cat[1].fp == ~std::uint64_t{0} && cat[0].fp != fp) {
      cat[1] = {fp, chain_of(c1, c2, c3)};
    }
    if (layout) {
      const std::uint64_t key = (std::uint64_t{g} << 32) | (std::uint64_t{f.f1} << 16) | f.f2;
      const auto slot = static_cast<std::uint32_t>(partners.size());
      if (partner_index.insert(key, slot) == slot) partners.emplace_back(g, chain_of(c1, c2, c3));
    }
  });
  r.partner_profiles = partners.size();

  for (const Profile& p : profiles) {
    std::optional<ChainWitness> partner;
    for (int c = 0; c < 4 && !partner; ++c) {
      if (!unrescued(p.zero, p.saturated, c)) continue;
      for (const Slot& s : seen[p.group][c]) {
        if (s.fp != ~std::uint64_t{0} && s.fp != p.fp) {
          partner = s.chain;
          break;
        }
      }
    }
    if (!partner) continue;
    r.violating_chains += p.multiplicity;
    if (!r.violation) r.violation = TrichotomyViolation{p.chain, *partner};
  }

  if (layout) {
    std::vector<std::vector<std::size_t>> by_group(r.groups);
    for (std::size_t i = 0; i < partners.size(); ++i) by_group[partners[i].first].push_back(i);
    IdentityReport id;
    FlatIndex decomposed;
    for (const Profile& p : profiles) {
      // The decomposition only depends on (f(C1), f(C2)) within a group.
      const std::uint64_t key =
          (std::uint64_t{p.group} << 32) | ((p.fp >> 32) << 16) | (p.fp & 0xffff);
      if (decomposed.insert(key, 1) != 1) continue;
      ChainProfile base;
      try {
        base = profile_decompose(structure, *layout, p.chain);
      } catch (const Error&) {
        ++id.decomposition_failures;
        if (!id.first_failure) id.first_failure = std::make_pair(p.chain, p.chain);
        continue;
      }
      if (!base.a_stated) {
        ++id.a_outside_stated;
        if (!id.first_failure) id.first_failure = std::make_pair(p.chain, p.chain);
      }
      for (std::size_t i : by_group[p.group]) {
        ChainProfile pp = base;
        pair_profile(structure, *layout, pp, partners[i].second);
        ++id.matched_pairs;
        ++id.by_k[pp.k];
        const IdentityCheck c = verify_identities(pp);
        id.master_failures += !c.master;
        id.k_failures += !c.k_expected;
        id.range_failures += c.k_expected && !c.primed_in_range;
        id.split_failures += c.k_expected && !c.split;
        id.k8_nonzero += !c.primed_zero;
        if (!c.holds() && !id.first_failure) {
          id.first_failure = std::make_pair(p.chain, partners[i].second);
        }
      }
    }
    r.identities = id;
  }
  return r;
}

TrichotomyReport verify_trichotomy_naive(const BeliefStructure& structure) {
  if (structure.size() > 7) {
    throw Error(ErrorCode::kTooLargeToEnumerate, "naive trichotomy is limited to 7 worlds");
  }
  ChainEvaluator eval(structure);
  std::vector<std::pair<ChainFacts, ChainWitness>> all;
  for_each_reduced_chain(structure, [&](std::uint64_t c1, std::uint64_t c2, std::uint64_t c3) {
    all.emplace_back(eval(c1, c2, c3), chain_of(c1, c2, c3));
  });
  TrichotomyReport r;
  r.chains = all.size();
  for (const auto& [p, pc] : all) {
    if (p.good) continue;
    ++r.not_good_chains;
    for (const auto& [q, qc] : all) {
      if (p.px != q.px || p.py != q.py) continue;
      const bool zero = p.zero && q.zero;
      const bool saturated = p.saturated && q.saturated;
      const bool weights = p.f1 == q.f1 && p.f2 == q.f2;
      if (zero || saturated || weights) continue;
      ++r.violating_chains;
      if (!r.violation) r.violation = TrichotomyViolation{pc, qc};
      break;
    }
  }
  return r;
}

}  // namespace coxfine
