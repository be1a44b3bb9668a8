#include "coxfine/fine_qcc.hpp"

#include <algorithm>
#include <random>

#include "coxfine/errors.hpp"

namespace coxfine {

namespace {

constexpr DominanceRule kWeak{false, false, false, false};
constexpr DominanceRule kStrictX{true, false, true, true};

Qcc7Violation violation(const ConstrainedPairTable& table, std::span<const KeyPoint> sources,
                        std::span<const KeyPoint> queries, const DominanceViolation& v) {
  return {queries[v.query], sources[v.source], table.entries()[v.query].witness,
          table.entries()[v.source].witness};
}

}  // namespace

std::uint64_t FilterFamily::member_count() const {
  if (anchor_.empty()) return 0;
  return std::uint64_t{1} << (worlds_ - anchor_.count());
}

bool FilterFamily::intersection_closed() const {
  const std::uint64_t rest = anchor_.complement(worlds_).bits();
  bool closed = true;
  for_each_submask(rest, [&](std::uint64_t a) {
    if (!closed) return;
    for_each_submask(rest, [&](std::uint64_t b) {
      if (!contains(EventSet((a | anchor_.bits()) & (b | anchor_.bits())))) closed = false;
    });
  });
  return closed && !anchor_.empty();
}

bool FilterFamily::excludes_empty() const { return !contains(EventSet{}); }

QccBasicReport check_qcc1_qcc2(const BeliefStructure& structure, const InducedOrder& order,
                               std::uint64_t samples, std::uint64_t seed) {
  QccBasicReport r;
  std::mt19937_64 rng(seed);
  const std::uint64_t full = structure.worlds().bits();
  auto draw = [&] {
    std::uint64_t u = 0;
    while (u == 0) u = rng() & full;
    return ConditionalObject{EventSet(rng() & u), EventSet(u)};
  };
  for (std::uint64_t i = 0; i < samples && r.holds(); ++i) {
    const std::array<ConditionalObject, 3> t{draw(), draw(), draw()};
    ++r.samples;
    for (const auto& o : t) r.reflexive = r.reflexive && order.at_least(o, o);
    for (int p = 0; p < 3; ++p) {
      for (int q = 0; q < 3; ++q) {
        if (!order.at_least(t[p], t[q]) && !order.at_least(t[q], t[p])) r.total = false;
        for (int s = 0; s < 3; ++s) {
          if (order.at_least(t[p], t[q]) && order.at_least(t[q], t[s]) &&
              !order.at_least(t[p], t[s])) {
            r.transitive = false;
          }
        }
      }
    }
    if (!r.holds()) r.counterexample = t;
  }
  return r;
}

Qcc7Report check_qcc7(const ConstrainedPairTable& table) {
  const auto pts = key_points(table);
  const std::size_t n = table.values().size();
  const ValueId zero = table.values().zero_id();
  Qcc7Report r;
  r.points = pts.size();
  if (auto v = find_dominance_violation(pts, pts, kWeak, n, zero)) {
    r.a = violation(table, pts, pts, *v);
  }
  if (auto v = find_dominance_violation(pts, pts, kStrictX, n, zero)) {
    r.c = violation(table, pts, pts, *v);
  }
  std::vector<KeyPoint> swapped(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) swapped[i] = {pts[i].y, pts[i].x, pts[i].w};
  if (auto v = find_dominance_violation(swapped, pts, kWeak, n, zero)) {
    r.b = violation(table, pts, pts, *v);
  }
  return r;
}

FineClauses fine_clauses(const ConstrainedPairTable& table, const MonotoneReport& monotone,
                         const WitnessSearch& witnesses) {
  const ValueId zero = table.values().zero_id(), one = table.values().one_id();
  FineClauses c;
  c.increasing = !monotone.b && !monotone.c;
  c.associative = witnesses.total == 0;
  for (const PairEntry& e : table.entries()) {
    const ValueId swapped = table.combine(e.y, e.x);
    if (swapped != kNoValue && swapped != e.w) c.commutative = false;
    if ((e.x == one && e.w != e.y) || (e.y == one && e.w != e.x)) c.unit_law = false;
    if ((e.x == zero || e.y == zero) && e.w != zero) c.zero_law = false;
  }
  return c;
}

bool AgreeingObstruction::classes_hold() const {
  return !classes.empty() &&
         std::all_of(classes.begin(), classes.end(), [](const auto& c) { return c.equal; });
}

AgreeingObstruction agreeing_obstruction(const BeliefStructure& structure, const ValueTable& values,
                                         const ValueTransform& transform, EventSet extra) {
  auto set = [&](std::initializer_list<int> ws) {
    EventSet s = extra;
    for (int w : ws) {
      const int i = structure.index_of("w" + std::to_string(w));
      if (i < 0) throw Error(ErrorCode::kClassMismatch, "missing world w" + std::to_string(w));
      s = s | EventSet::single(i);
    }
    return s;
  };
  auto p = [&](EventSet v, EventSet u) {
    const Rational& b = values.value(values.id_of(v, u));
    return transform ? transform(b) : b;
  };

  AgreeingObstruction r;
  if (transform) {
    for (ValueId i = 1; i < values.size() && r.order_preserving; ++i) {
      r.order_preserving = transform(values.value(i - 1)) < transform(values.value(i));
    }
  }

  struct ClassLayout {
    Rational expected;
    const char* labels[2];
    std::initializer_list<int> sets[4];
  };
  const ClassLayout layouts[] = {
      {Rational(3, 5), {"w1|{w1,w2}", "w10|{w10,w11}"}, {{1}, {1, 2}, {10}, {10, 11}}},
      {Rational(5, 11),
       {"{w1,w2}|{w1,w2,w3}", "w4|{w4,w5}"},
       {{1, 2}, {1, 2, 3}, {4}, {4, 5}}},
      {Rational(11, 19),
       {"{w4,w5}|{w4,w5,w6}", "{w7,w8}|{w7,w8,w9}"},
       {{4, 5}, {4, 5, 6}, {7, 8}, {7, 8, 9}}},
      {Rational(5, 19),
       {"w4|{w4,w5,w6}", "{w10,w11}|{w10,w11,w12}"},
       {{4}, {4, 5, 6}, {10, 11}, {10, 11, 12}}},
      {Rational(3, 11), {"w1|{w1,w2,w3}", "w7|{w7,w8}"}, {{1}, {1, 2, 3}, {7}, {7, 8}}},
  };
  for (const ClassLayout& s : layouts) {
    ObstructionClass c;
    c.expected = s.expected;
    for (int m = 0; m < 2; ++m) {
      const EventSet v = set(s.sets[2 * m]), u = set(s.sets[2 * m + 1]);
      c.members[m] = {s.labels[m], ConditionalObject{v, u}, p(v, u)};
    }
    c.equal = c.members[0].value == c.members[1].value;
    r.classes.push_back(std::move(c));
  }

  const std::initializer_list<int> chains[4][3] = {
      {{4, 5, 6}, {4, 5}, {4}},
      {{1, 2, 3}, {1, 2}, {1}},
      {{10, 11, 12}, {10, 11}, {10}},
      {{7, 8, 9}, {7, 8}, {7}},
  };
  for (int k = 0; k < 4; ++k) {
    const ChainWitness ch{set(chains[k][0]), set(chains[k][1]), set(chains[k][2])};
    r.steps[k] = {ch, p(ch.u3, ch.u2), p(ch.u2, ch.u1), p(ch.u3, ch.u1)};
  }
  const auto& s = r.steps;
  r.linked = s[2].x == s[1].x && s[2].y == s[0].w && s[3].x == s[1].w && s[3].y == s[0].y;
  r.low = s[2].w;
  r.high = s[3].w;
  r.strict_gap = r.low < r.high;
  return r;
}

RestrictedReport restricted_fine_check(const BeliefStructure& structure, int threads) {
  const int w0 = structure.index_of("w0");
  if (w0 < 0) throw Error(ErrorCode::kClassMismatch, "missing world w0");
  const EventSet anchor = EventSet::single(w0);
  const FilterFamily family(structure.size(), anchor);
  const ValueTable values = ValueTable::build(structure);

  RestrictedReport r;
  r.worlds = structure.size();
  r.anchor = anchor;
  r.filter_members = family.member_count();
  r.filter_intersection_closed = family.intersection_closed();
  r.filter_excludes_empty = family.excludes_empty();
  r.anchored_pattern = agreeing_obstruction(structure, values, {}, anchor);

  PairTableOptions options;
  options.threads = threads;
  options.anchor = anchor;
  const auto table = ConstrainedPairTable::build(structure, values, options);
  r.chains = table.chain_count();
  r.keys = table.size();
  r.witnesses = find_associativity_witnesses(table);
  for (const auto& w : r.witnesses.witnesses) {
    r.witness_values.push_back({values.value(w.x), values.value(w.y), values.value(w.z),
                                values.value(w.lhs), values.value(w.rhs)});
  }
  return r;
}

}  // namespace coxfine
