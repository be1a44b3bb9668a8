#include "coxfine/cox_checker.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "coxfine/errors.hpp"
#include "sum_cache.hpp"

namespace coxfine {

namespace {

// Prefix-max Fenwick tree over positions 0..n-1 holding (key, index) pairs.
// Larger key wins; on equal keys the smaller index wins.
class MaxFenwick {
 public:
  explicit MaxFenwick(std::size_t n) : key_(n + 1, 0), idx_(n + 1, kNone), used_(n + 1, false) {}

  static constexpr std::size_t kNone = ~std::size_t{0};

  void update(std::size_t pos, std::uint64_t key, std::size_t index) {
    for (std::size_t i = pos + 1; i < key_.size(); i += i & (~i + 1)) {
      if (!used_[i] || key > key_[i] || (key == key_[i] && index < idx_[i])) {
        key_[i] = key;
        idx_[i] = index;
        used_[i] = true;
      }
    }
  }

  // Best over positions [0, pos]; kNone when empty.
  std::pair<std::uint64_t, std::size_t> query(std::size_t pos) const {
    std::uint64_t best = 0;
    std::size_t at = kNone;
    for (std::size_t i = pos + 1; i > 0; i -= i & (~i + 1)) {
      if (!used_[i]) continue;
      if (at == kNone || key_[i] > best || (key_[i] == best && idx_[i] < at)) {
        best = key_[i];
        at = idx_[i];
      }
    }
    return {best, at};
  }

 private:
  std::vector<std::uint64_t> key_;
  std::vector<std::size_t> idx_;
  std::vector<bool> used_;
};

bool dominated(const KeyPoint& s, const KeyPoint& q, const DominanceRule& r) {
  const bool dx = r.strict_x ? s.x < q.x : s.x <= q.x;
  const bool dy = r.strict_y ? s.y < q.y : s.y <= q.y;
  return dx && dy;
}

bool violates(ValueId source_w, ValueId query_w, const DominanceRule& r) {
  return r.strict_w ? source_w >= query_w : source_w > query_w;
}

bool exempt(const KeyPoint& q, const DominanceRule& r, ValueId zero_id) {
  return r.positive_query && (q.x == zero_id || q.y == zero_id);
}

std::vector<std::size_t> order_by_xy(std::span<const KeyPoint> pts) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (!std::is_sorted(pts.begin(), pts.end(), [](const KeyPoint& a, const KeyPoint& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
      })) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pts[a].x != pts[b].x ? pts[a].x < pts[b].x : pts[a].y < pts[b].y;
    });
  }
  return order;
}

constexpr DominanceRule kClauseA{false, false, false, false};
constexpr DominanceRule kClauseB{true, false, true, true};
constexpr DominanceRule kClauseC{false, true, true, true};

}  // namespace

ComplementReport verify_complement(const BeliefStructure& structure, const ValueTable& values) {
  require_enumerable(structure);
  ComplementReport report;
  std::vector<ValueId> complement(values.size(), kNoValue);
  std::vector<bool> known(values.size(), false);
  const std::uint64_t masks = std::uint64_t{1} << structure.size();
  for (std::uint64_t u = 1; u < masks; ++u) {
    for_each_submask(u, [&](std::uint64_t s) {
      if (report.counterexample) return;
      ++report.checked;
      const ValueId a = values.id(s, u);
      if (!known[a]) {
        complement[a] = values.find(Rational(1) - values.value(a)).value_or(kNoValue);
        known[a] = true;
      }
      if (values.id(u & ~s, u) != complement[a]) {
        report.holds = false;
        report.counterexample = ConditionalObject{EventSet(s), EventSet(u)};
      }
    });
    if (report.counterexample) break;
  }
  return report;
}

AdditivityReport verify_additivity(const BeliefStructure& structure, const ValueTable& values) {
  require_enumerable(structure);
  AdditivityReport report;
  detail::SumCache cache;
  const std::uint64_t masks = std::uint64_t{1} << structure.size();
  for (std::uint64_t u = 1; u < masks && report.holds; ++u) {
    for_each_submask(u, [&](std::uint64_t s) {
      if (!report.holds) return;
      const ValueId c = values.id(s, u);
      for_each_submask(s, [&](std::uint64_t v) {
        if (!report.holds) return;
        ++report.checked;
        if (!cache.check(values, values.id(v, u), values.id(s & ~v, u), c)) {
          report.holds = false;
          report.counterexample =
              AdditivityCounterexample{EventSet(u), EventSet(v), EventSet(s & ~v)};
        }
      });
    });
  }
  return report;
}

std::vector<KeyPoint> key_points(const ConstrainedPairTable& table) {
  std::vector<KeyPoint> pts;
  pts.reserve(table.size());
  for (const PairEntry& e : table.entries()) pts.push_back({e.x, e.y, e.w});
  return pts;
}

std::optional<DominanceViolation> find_dominance_violation(std::span<const KeyPoint> sources,
                                                           std::span<const KeyPoint> queries,
                                                           const DominanceRule& rule,
                                                           std::size_t value_count,
                                                           ValueId zero_id) {
  const auto src = order_by_xy(sources);
  const auto qry = order_by_xy(queries);
  MaxFenwick tree(value_count);
  std::size_t next = 0;
  for (std::size_t qi : qry) {
    const KeyPoint& q = queries[qi];
    while (next < src.size()) {
      const KeyPoint& s = sources[src[next]];
      if (rule.strict_x ? s.x >= q.x : s.x > q.x) break;
      tree.update(s.y, s.w, src[next]);
      ++next;
    }
    if (exempt(q, rule, zero_id)) continue;
    if (rule.strict_y && q.y == 0) continue;
    const auto [w, at] = tree.query(rule.strict_y ? q.y - 1 : q.y);
    if (at == MaxFenwick::kNone) continue;
    if (violates(static_cast<ValueId>(w), q.w, rule)) return DominanceViolation{at, qi};
  }
  return std::nullopt;
}

std::optional<DominanceViolation> find_dominance_violation_naive(std::span<const KeyPoint> sources,
                                                                 std::span<const KeyPoint> queries,
                                                                 const DominanceRule& rule,
                                                                 ValueId zero_id) {
  const auto qry = order_by_xy(queries);
  for (std::size_t qi : qry) {
    const KeyPoint& q = queries[qi];
    if (exempt(q, rule, zero_id)) continue;
    std::optional<std::size_t> best;
    for (std::size_t si = 0; si < sources.size(); ++si) {
      const KeyPoint& s = sources[si];
      if (!dominated(s, q, rule)) continue;
      if (!best || s.w > sources[*best].w) best = si;
    }
    if (best && violates(sources[*best].w, q.w, rule)) return DominanceViolation{*best, qi};
  }
  return std::nullopt;
}

MonotoneReport check_monotone(std::span<const KeyPoint> points, std::size_t value_count,
                              ValueId zero_id) {
  MonotoneReport r;
  r.points = points.size();
  r.a = find_dominance_violation(points, points, kClauseA, value_count, zero_id);
  r.b = find_dominance_violation(points, points, kClauseB, value_count, zero_id);
  r.c = find_dominance_violation(points, points, kClauseC, value_count, zero_id);
  return r;
}

MonotoneReport check_monotone_naive(std::span<const KeyPoint> points, ValueId zero_id) {
  MonotoneReport r;
  r.points = points.size();
  r.a = find_dominance_violation_naive(points, points, kClauseA, zero_id);
  r.b = find_dominance_violation_naive(points, points, kClauseB, zero_id);
  r.c = find_dominance_violation_naive(points, points, kClauseC, zero_id);
  return r;
}

MonotoneReport check_monotone(const ConstrainedPairTable& table) {
  const auto pts = key_points(table);
  return check_monotone(pts, table.values().size(), table.values().zero_id());
}

WitnessSearch find_associativity_witnesses(const ConstrainedPairTable& table,
                                           std::size_t limit) {
  WitnessSearch out;
  const auto entries = table.entries();
  const std::size_t m = table.values().size();
  const ValueId zero = table.values().zero_id();
  const ValueId one = table.values().one_id();

  out.boundary_laws = true;
  for (const PairEntry& e : entries) {
    if ((e.x == one && e.w != e.y) || (e.y == one && e.w != e.x) ||
        ((e.x == zero || e.y == zero) && e.w != zero)) {
      out.boundary_laws = false;
      break;
    }
  }

  // Rows: entries with first coordinate v occupy [row[v], row[v+1]).
  std::vector<std::size_t> row(m + 1, 0);
  for (const PairEntry& e : entries) ++row[e.x + 1];
  std::partial_sum(row.begin(), row.end(), row.begin());
  // Columns: entry indices grouped by second coordinate, ascending x within.
  std::vector<std::size_t> col(m + 1, 0);
  for (const PairEntry& e : entries) ++col[e.y + 1];
  std::partial_sum(col.begin(), col.end(), col.begin());
  std::vector<std::uint32_t> by_col(entries.size());
  {
    std::vector<std::size_t> fill(col.begin(), col.end() - 1);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      by_col[fill[entries[i].y]++] = static_cast<std::uint32_t>(i);
    }
  }

  auto keep = [&](const AssociativityWitness& w) {
    ++out.total;
    out.witnesses.push_back(w);
    if (out.witnesses.size() >= 4 * limit + 1024) {
      std::sort(out.witnesses.begin(), out.witnesses.end());
      out.witnesses.resize(limit);
    }
  };

  for (ValueId y = 0; y < m; ++y) {
    if (out.boundary_laws && (y == zero || y == one)) continue;
    const std::size_t r0 = row[y], r1 = row[y + 1];
    if (r0 == r1) continue;
    for (std::size_t c = col[y]; c < col[y + 1]; ++c) {
      const PairEntry& left = entries[by_col[c]];
      const ValueId x = left.x, xy = left.w;
      std::size_t a = row[xy];
      const std::size_t a_end = row[xy + 1];
      const bool merge = (a_end - a) <= 4 * (r1 - r0);
      for (std::size_t r = r0; r < r1; ++r) {
        const PairEntry& right = entries[r];
        const ValueId z = right.y;
        ++out.combinations;
        ValueId rhs;
        if (merge) {
          while (a < a_end && entries[a].y < z) ++a;
          if (a == a_end) break;
          if (entries[a].y != z) continue;
          rhs = entries[a].w;
        } else {
          rhs = table.combine(xy, z);
          if (rhs == kNoValue) continue;
        }
        const ValueId lhs = table.combine(x, right.w);
        if (lhs == kNoValue || lhs == rhs) continue;
        keep({x, y, z, right.w, lhs, xy, rhs});
      }
    }
  }
  std::sort(out.witnesses.begin(), out.witnesses.end());
  if (out.witnesses.size() > limit) out.witnesses.resize(limit);
  return out;
}

namespace {

struct TripleSweep {
  std::uint64_t chains = 0;
  std::uint64_t missing = 0;
  std::optional<Chain4> counterexample;
  std::vector<std::optional<Chain4>> found;
};

void sweep_triples(const ConstrainedPairTable& table,
                   const std::vector<std::array<ValueId, 3>>& targets, std::uint64_t lo,
                   std::uint64_t hi, TripleSweep& out) {
  const ValueTable& values = table.values();
  out.found.assign(targets.size(), std::nullopt);
  std::vector<std::size_t> z_match, y_match;
  z_match.reserve(targets.size());
  y_match.reserve(targets.size());
  for (std::uint64_t u1 = lo; u1 < hi; ++u1) {
    for_each_submask(u1, [&](std::uint64_t u2) {
      if (u2 == 0) return;
      const ValueId z = values.id(u2, u1);
      z_match.clear();
      for (std::size_t t = 0; t < targets.size(); ++t) {
        if (!out.found[t] && targets[t][2] == z) z_match.push_back(t);
      }
      for_each_submask(u2, [&](std::uint64_t u3) {
        if (u3 == 0) return;
        const ValueId y = values.id(u3, u2);
        const ValueId yz = table.combine(y, z);
        y_match.clear();
        for (std::size_t t : z_match) {
          if (!out.found[t] && targets[t][1] == y) y_match.push_back(t);
        }
        for_each_submask(u3, [&](std::uint64_t u4) {
          ++out.chains;
          const ValueId x = values.id(u4, u3);
          for (std::size_t t : y_match) {
            if (!out.found[t] && targets[t][0] == x) {
              out.found[t] = Chain4{EventSet(u1), EventSet(u2), EventSet(u3), EventSet(u4)};
            }
          }
          const ValueId xy = table.combine(x, y);
          const ValueId lhs = yz == kNoValue ? kNoValue : table.combine(x, yz);
          const ValueId rhs = xy == kNoValue ? kNoValue : table.combine(xy, z);
          if (lhs == kNoValue || rhs == kNoValue) {
            ++out.missing;
          } else if (lhs == rhs) {
            return;
          }
          if (!out.counterexample) {
            out.counterexample = Chain4{EventSet(u1), EventSet(u2), EventSet(u3), EventSet(u4)};
          }
        });
      });
    });
  }
}

}  // namespace

ConstrainedTripleReport check_constrained_triples(const BeliefStructure& structure,
                                                  const ConstrainedPairTable& table,
                                                  std::span<const std::array<Rational, 3>> queries,
                                                  int threads) {
  require_enumerable(structure);
  const ValueTable& values = table.values();
  ConstrainedTripleReport report;
  std::vector<std::array<ValueId, 3>> targets;
  std::vector<std::size_t> target_of(queries.size(), ~std::size_t{0});
  for (std::size_t q = 0; q < queries.size(); ++q) {
    report.queries.push_back({queries[q], false, std::nullopt});
    std::array<ValueId, 3> ids{};
    bool present = true;
    for (int k = 0; k < 3; ++k) {
      auto id = values.find(queries[q][k]);
      present = present && id.has_value();
      ids[k] = id.value_or(kNoValue);
    }
    if (present) {
      target_of[q] = targets.size();
      targets.push_back(ids);
    }
  }

  const int parts = std::max(1, threads);
  std::vector<TripleSweep> partial(parts);
  const std::uint64_t masks = std::uint64_t{1} << structure.size();
  run_partitioned(1, masks, parts, [&](int p, std::uint64_t lo, std::uint64_t hi) {
    sweep_triples(table, targets, lo, hi, partial[p]);
  });

  for (const TripleSweep& part : partial) {
    report.chains += part.chains;
    report.missing_keys += part.missing;
    if (!report.counterexample && part.counterexample) report.counterexample = part.counterexample;
  }
  report.associative = !report.counterexample;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (target_of[q] == ~std::size_t{0}) continue;
    for (const TripleSweep& part : partial) {
      if (part.found[target_of[q]]) {
        report.queries[q].constrained = true;
        report.queries[q].chain = part.found[target_of[q]];
        break;
      }
    }
  }
  return report;
}

std::vector<ConstrainedTriple> enumerate_constrained_triples(const ValueTable& values) {
  if (values.size() >= (std::size_t{1} << 21)) {
    throw Error(ErrorCode::kTooLargeToEnumerate, "too many distinct values to key triples");
  }
  std::unordered_map<std::uint64_t, Chain4> seen;
  const std::uint64_t masks = std::uint64_t{1} << values.world_count();
  for (std::uint64_t u1 = 1; u1 < masks; ++u1) {
    for_each_submask(u1, [&](std::uint64_t u2) {
      if (u2 == 0) return;
      const std::uint64_t z = values.id(u2, u1);
      for_each_submask(u2, [&](std::uint64_t u3) {
        if (u3 == 0) return;
        const std::uint64_t y = values.id(u3, u2);
        for_each_submask(u3, [&](std::uint64_t u4) {
          const std::uint64_t key = (std::uint64_t{values.id(u4, u3)} << 42) | (y << 21) | z;
          seen.try_emplace(key, Chain4{EventSet(u1), EventSet(u2), EventSet(u3), EventSet(u4)});
        });
      });
    });
  }
  std::vector<ConstrainedTriple> out;
  out.reserve(seen.size());
  constexpr std::uint64_t kMask = (std::uint64_t{1} << 21) - 1;
  for (const auto& [key, chain] : seen) {
    out.push_back({static_cast<ValueId>(key >> 42), static_cast<ValueId>((key >> 21) & kMask),
                   static_cast<ValueId>(key & kMask), chain});
  }
  std::sort(out.begin(), out.end(), [](const ConstrainedTriple& a, const ConstrainedTriple& b) {
    return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
  });
  return out;
}

std::optional<Chain4> find_constrained_chain(const ValueTable& values, const Rational& x,
                                             const Rational& y, const Rational& z) {
  const auto xi = values.find(x), yi = values.find(y), zi = values.find(z);
  if (!xi || !yi || !zi) return std::nullopt;
  const std::uint64_t masks = std::uint64_t{1} << values.world_count();
  for (std::uint64_t u1 = 1; u1 < masks; ++u1) {
    std::optional<Chain4> hit;
    for_each_submask(u1, [&](std::uint64_t u2) {
      if (hit || u2 == 0 || values.id(u2, u1) != *zi) return;
      for_each_submask(u2, [&](std::uint64_t u3) {
        if (hit || u3 == 0 || values.id(u3, u2) != *yi) return;
        for_each_submask(u3, [&](std::uint64_t u4) {
          if (!hit && values.id(u4, u3) == *xi) {
            hit = Chain4{EventSet(u1), EventSet(u2), EventSet(u3), EventSet(u4)};
          }
        });
      });
    });
    if (hit) return hit;
  }
  return std::nullopt;
}

ClosureReport commutative_closure(const ConstrainedPairTable& table) {
  ClosureReport r;
  const ValueTable& values = table.values();
  const ValueId one = values.one_id();

  r.points.reserve(table.size() * 2);
  mpq_class product;
  for (const PairEntry& e : table.entries()) {
    r.points.push_back({e.x, e.y, e.w});
    if (e.x == e.y) {
      if (e.x != one) ++r.diagonal_keys;
    } else {
      r.points.push_back({e.y, e.x, e.w});
      if (const PairEntry* mirror = table.lookup(e.y, e.x)) {
        if (e.x < e.y) ++r.symmetric_pairs;
        if (e.x != one && e.y != one && !r.symmetric_violation) {
          r.symmetric_violation = std::make_pair(e.x, e.y);
        }
        if (mirror->w != e.w) {
          throw Error(ErrorCode::kClosureConflict,
                      "F'(x,y) and F'(y,x) differ for values " + values.value(e.x).str() + ", " +
                          values.value(e.y).str());
        }
      }
    }
    if ((e.x == one && e.w != e.y) || (e.y == one && e.w != e.x)) r.one_law = false;

    if (e.has_trigger_free_chain()) ++r.trigger_free_keys;
    if (e.has_trigger_chain) ++r.trigger_keys;
    if (e.has_trigger_free_chain() && e.has_trigger_chain) ++r.keys_with_both;
    if (e.has_trigger_free_chain() && e.trigger_free == e.witness) ++r.stored_witness_trigger_free;
    if (e.has_trigger_free_chain() && !r.product_violation) {
      mpq_mul(product.get_mpq_t(), values.value(e.x).mpq().get_mpq_t(),
              values.value(e.y).mpq().get_mpq_t());
      if (product != values.value(e.w).mpq()) r.product_violation = e;
    }
  }
  std::sort(r.points.begin(), r.points.end(), [](const KeyPoint& a, const KeyPoint& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  r.points.erase(std::unique(r.points.begin(), r.points.end(),
                             [](const KeyPoint& a, const KeyPoint& b) {
                               return a.x == b.x && a.y == b.y;
                             }),
                 r.points.end());
  r.monotone = check_monotone(r.points, values.size(), values.zero_id());
  return r;
}

// ---------------------------------------------------------------------------

TotalCombination::TotalCombination(const ValueTable& values, std::vector<KeyPoint> closure,
                                   bool strict)
    : values_(&values), data_(std::move(closure)), strict_(strict) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kDegenerateDomain, "extension needs at least two coordinate values");
  }
  Rational gap = values.value(1) - values.value(0);
  for (std::size_t i = 2; i < values.size(); ++i) {
    gap = std::min(gap, values.value(i) - values.value(i - 1));
  }
  epsilon_ = strict ? gap / Rational(4 * static_cast<long>(values.size() - 1)) : Rational(0);
  std::sort(data_.begin(), data_.end(), [](const KeyPoint& a, const KeyPoint& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
}

std::vector<std::size_t> TotalCombination::dominating_data(
    std::span<const std::pair<ValueId, ValueId>> at) const {
  const std::size_t m = values_->size();
  const std::uint64_t s_cap = 2 * static_cast<std::uint64_t>(m);
  std::vector<std::size_t> order(at.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return at[a] < at[b]; });
  std::vector<std::size_t> out(at.size(), MaxFenwick::kNone);
  MaxFenwick tree(m);
  std::size_t next = 0;
  for (std::size_t qi : order) {
    const auto [i, j] = at[qi];
    while (next < data_.size() && data_[next].x <= i) {
      const KeyPoint& d = data_[next];
      const std::uint64_t s = strict_ ? s_cap - (std::uint64_t{d.x} + d.y) : 0;
      tree.update(d.y, (std::uint64_t{d.w} << 32) | s, next);
      ++next;
    }
    out[qi] = tree.query(j).second;
  }
  return out;
}

std::optional<std::pair<ValueId, ValueId>> TotalCombination::first_disagreement() const {
  const std::size_t m = values_->size();
  const std::uint64_t s_cap = 2 * static_cast<std::uint64_t>(m);
  const ValueId zero = values_->zero_id();
  auto key = [&](const KeyPoint& d) {
    return strict_ ? (std::uint64_t{d.w} << 32) | (s_cap - (std::uint64_t{d.x} + d.y))
                   : std::uint64_t{d.w} << 32;
  };
  MaxFenwick tree(m);
  for (std::size_t lo = 0; lo < data_.size();) {
    std::size_t hi = lo;
    while (hi < data_.size() && data_[hi].x == data_[lo].x) {
      tree.update(data_[hi].y, key(data_[hi]), hi);
      ++hi;
    }
    for (std::size_t k = lo; k < hi; ++k) {
      const KeyPoint& d = data_[k];
      const bool ok = (d.x == zero || d.y == zero) ? d.w == zero
                                                   : tree.query(d.y).first == key(d);
      if (!ok) return std::make_pair(d.x, d.y);
    }
    lo = hi;
  }
  return std::nullopt;
}

std::vector<Rational> TotalCombination::nodes(
    std::span<const std::pair<ValueId, ValueId>> at) const {
  const auto best = dominating_data(at);
  const ValueId zero = values_->zero_id();
  std::vector<Rational> out;
  out.reserve(at.size());
  for (std::size_t k = 0; k < at.size(); ++k) {
    const auto [i, j] = at[k];
    if (i == zero || j == zero) {
      out.emplace_back(0);
      continue;
    }
    Rational base(0);
    if (best[k] != MaxFenwick::kNone) {
      const KeyPoint& d = data_[best[k]];
      Rational lifted = values_->value(d.w) -
                        epsilon_ * Rational(static_cast<long>(std::uint64_t{d.x} + d.y));
      if (lifted.sign() > 0) base = lifted;
    }
    out.push_back(base + epsilon_ * Rational(static_cast<long>(std::uint64_t{i} + j)));
  }
  return out;
}

std::vector<Rational> TotalCombination::evaluate(
    std::span<const std::pair<Rational, Rational>> at) const {
  const auto vals = values_->values();
  auto cell = [&](const Rational& v) {
    auto it = std::upper_bound(vals.begin(), vals.end(), v);
    auto lo = static_cast<ValueId>(std::max<std::ptrdiff_t>(0, (it - vals.begin()) - 1));
    ValueId hi = vals[lo] == v ? lo : std::min<ValueId>(lo + 1, vals.size() - 1);
    return std::make_pair(lo, hi);
  };
  std::vector<std::pair<ValueId, ValueId>> corners;
  corners.reserve(at.size() * 4);
  std::vector<std::array<ValueId, 4>> cells;
  for (const auto& [x, y] : at) {
    if (x.sign() < 0 || y.sign() < 0 || x > Rational(1) || y > Rational(1)) {
      throw Error(ErrorCode::kUsage, "extension is defined on [0,1]^2 only");
    }
    const auto [i0, i1] = cell(x);
    const auto [j0, j1] = cell(y);
    cells.push_back({i0, i1, j0, j1});
    corners.insert(corners.end(), {{i0, j0}, {i1, j0}, {i0, j1}, {i1, j1}});
  }
  const auto g = nodes(corners);
  std::vector<Rational> out;
  out.reserve(at.size());
  for (std::size_t k = 0; k < at.size(); ++k) {
    const auto [i0, i1, j0, j1] = cells[k];
    const Rational t = i0 == i1 ? Rational(0)
                                : (at[k].first - vals[i0]) / (vals[i1] - vals[i0]);
    const Rational u = j0 == j1 ? Rational(0)
                                : (at[k].second - vals[j0]) / (vals[j1] - vals[j0]);
    const Rational one(1);
    out.push_back((one - t) * (one - u) * g[4 * k] + t * (one - u) * g[4 * k + 1] +
                  (one - t) * u * g[4 * k + 2] + t * u * g[4 * k + 3]);
  }
  return out;
}

ExtensionReport extend_total(const TotalCombination& total, std::size_t resolution) {
  ExtensionReport r;
  r.strict_mode = total.strict();
  const ValueTable& values = total.values();
  const ValueId zero = values.zero_id();
  const ValueId m = static_cast<ValueId>(values.size() - 1);
  auto fail = [&](bool& flag, ValueId i, ValueId j) {
    flag = false;
    if (!r.first_failure) r.first_failure = std::make_pair(i, j);
  };
  auto fail_strict = [&](ValueId i, ValueId j) {
    r.strict_interior = false;
    if (!r.first_strict_failure) r.first_strict_failure = std::make_pair(i, j);
  };

  // Every data point, by comparing dominance keys, plus an exact sample.
  const auto data = total.data();
  r.data_points = data.size();
  if (auto bad = total.first_disagreement()) fail(r.agrees_with_data, bad->first, bad->second);
  {
    const auto stride = std::max<std::size_t>(1, data.size() / 20000);
    std::vector<std::pair<ValueId, ValueId>> sample;
    std::vector<ValueId> expect;
    for (std::size_t k = 0; k < data.size(); k += stride) {
      sample.emplace_back(data[k].x, data[k].y);
      expect.push_back(data[k].w);
    }
    const auto g = total.nodes(sample);
    for (std::size_t k = 0; k < sample.size(); ++k) {
      if (g[k] != values.value(expect[k])) {
        fail(r.agrees_with_data, sample[k].first, sample[k].second);
      }
    }
    r.evaluated_points += sample.size();
  }

  // Sub-grid of coordinates.
  resolution = std::max<std::size_t>(2, std::min<std::size_t>(resolution, values.size()));
  std::vector<ValueId> grid;
  for (std::size_t k = 0; k < resolution; ++k) {
    grid.push_back(static_cast<ValueId>(k * m / (resolution - 1)));
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  r.grid_size = grid.size();
  const std::size_t g = grid.size();
  std::vector<std::pair<ValueId, ValueId>> at;
  at.reserve(g * g);
  for (ValueId i : grid) {
    for (ValueId j : grid) at.emplace_back(i, j);
  }
  const auto node = total.nodes(at);
  r.evaluated_points += at.size();
  auto G = [&](std::size_t a, std::size_t b) -> const Rational& { return node[a * g + b]; };

  for (std::size_t a = 0; a < g; ++a) {
    if (G(a, g - 1) != values.value(grid[a]) || G(g - 1, a) != values.value(grid[a])) {
      fail(r.boundary_one, grid[a], m);
    }
    if (!G(a, 0).is_zero() || !G(0, a).is_zero()) fail(r.boundary_zero, grid[a], zero);
    for (std::size_t b = 0; b < g; ++b) {
      if (G(a, b) != G(b, a)) fail(r.commutative, grid[a], grid[b]);
      if (a + 1 < g) {
        if (G(a + 1, b) < G(a, b)) fail(r.monotone_rows, grid[a], grid[b]);
        if (b > 0 && !(G(a, b) < G(a + 1, b))) fail_strict(grid[a], grid[b]);
      }
      if (b + 1 < g) {
        if (G(a, b + 1) < G(a, b)) fail(r.monotone_columns, grid[a], grid[b]);
        if (a > 0 && !(G(a, b) < G(a, b + 1))) fail_strict(grid[a], grid[b]);
      }
    }
  }

  // Cell midpoints of the sub-grid lie strictly between their corners.
  std::vector<std::pair<Rational, Rational>> mids;
  std::vector<std::pair<std::size_t, std::size_t>> cell_of;
  for (std::size_t a = 0; a + 1 < g; ++a) {
    for (std::size_t b = 0; b + 1 < g; ++b) {
      const Rational half(1, 2);
      mids.emplace_back((values.value(grid[a]) + values.value(grid[a + 1])) * half,
                        (values.value(grid[b]) + values.value(grid[b + 1])) * half);
      cell_of.emplace_back(a, b);
    }
  }
  const auto mid = total.evaluate(mids);
  r.evaluated_points += mids.size();
  for (std::size_t k = 0; k < mids.size(); ++k) {
    const auto [a, b] = cell_of[k];
    if (!(G(a, b) <= mid[k] && mid[k] <= G(a + 1, b + 1))) {
      fail(r.interpolation_monotone, grid[a], grid[b]);
    } else if (!(G(a, b) < mid[k] && mid[k] < G(a + 1, b + 1))) {
      fail_strict(grid[a], grid[b]);
    }
  }
  return r;
}

}  // namespace coxfine
