#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "coxfine/appendix.hpp"
#include "coxfine/belief_structure.hpp"
#include "coxfine/constructions.hpp"
#include "coxfine/cox_checker.hpp"
#include "coxfine/fine_qcc.hpp"
#include "coxfine/functional_eq.hpp"
#include "coxfine/pair_table.hpp"
#include "coxfine/parallel.hpp"
#include "coxfine/rescaling.hpp"
#include "coxfine/value_table.hpp"
#include "support.hpp"

using namespace coxfine;
using testsupport::set_of;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " FAILED[" << what << "]";
    }
  }
};

struct Shared {
  int threads = 1;
  std::optional<BeliefStructure> twelve;
  std::optional<ValueTable> values;
  std::optional<ConstrainedPairTable> table;
  std::optional<WitnessSearch> witnesses;
};

// Criterion 1: the ten conditional values, for Pr and for Bel.
void criterion1(Shared& sh, Outcome& out) {
  const auto& s = *sh.twelve;
  auto S = [&](std::initializer_list<const char*> labels) { return set_of(s, labels); };
  struct Obj {
    EventSet v, u;
  };
  struct Class {
    Rational value;
    Obj a, b;
  };
  const std::vector<Class> classes{
      {Rational(3, 5), {S({"w1"}), S({"w1", "w2"})}, {S({"w10"}), S({"w10", "w11"})}},
      {Rational(5, 11), {S({"w1", "w2"}), S({"w1", "w2", "w3"})}, {S({"w4"}), S({"w4", "w5"})}},
      {Rational(11, 19), {S({"w4", "w5"}), S({"w4", "w5", "w6"})}, {S({"w7", "w8"}), S({"w7", "w8", "w9"})}},
      {Rational(5, 19), {S({"w4"}), S({"w4", "w5", "w6"})}, {S({"w10", "w11"}), S({"w10", "w11", "w12"})}},
      {Rational(3, 11), {S({"w1"}), S({"w1", "w2", "w3"})}, {S({"w7"}), S({"w7", "w8"})}},
  };
  int matched = 0;
  for (const auto& c : classes) {
    for (const Obj& o : {c.a, c.b}) {
      const EventSet v = o.v, u = o.u;
      const bool pr = Rational(testsupport::oracle_pr(s, v.bits(), u.bits())) == c.value &&
                      s.cond_prob(v, u) == c.value;
      const bool bel = Rational(testsupport::oracle_bel(s, v.bits(), u.bits())) == c.value &&
                       s.bel(v, u) == c.value;
      out.require(pr, "Pr " + c.value.str());
      out.require(bel, "Bel " + c.value.str());
      matched += pr && bel;
    }
  }
  out.detail << matched << "/10 objects equal their class value under Pr and Bel";
}

// Criterion 2: the four forced values and the associativity witness.
void criterion2(Shared& sh, Outcome& out) {
  const auto& s = *sh.twelve;
  sh.values.emplace(ValueTable::build(s));
  PairTableOptions opt;
  opt.threads = sh.threads;
  try {
    sh.table.emplace(ConstrainedPairTable::build(s, *sh.values, opt));
  } catch (const PairConflictError& e) {
    out.require(false, std::string("pair table conflict: ") + e.what());
    return;
  }
  const auto& values = *sh.values;
  const Rational d = s.delta();
  auto forced = [&](const Rational& x, const Rational& y, const Rational& w) {
    const auto xi = values.find(x), yi = values.find(y);
    if (!xi || !yi) return false;
    const PairEntry* e = sh.table->lookup(*xi, *yi);
    return e && values.value(e->w) == w;
  };
  out.require(forced(Rational(5, 11), Rational(11, 19), Rational(5, 19)), "F(5/11,11/19)=5/19");
  out.require(forced(Rational(3, 5), Rational(5, 11), Rational(3, 11)), "F(3/5,5/11)=3/11");
  out.require(forced(Rational(3, 5), Rational(5, 19), (Rational(3) - d) / Rational(19)),
              "F(3/5,5/19)=(3-d)/19");
  out.require(forced(Rational(3, 11), Rational(11, 19), Rational(3, 19)), "F(3/11,11/19)=3/19");
  sh.witnesses.emplace(find_associativity_witnesses(*sh.table, 64));
  bool reported = false;
  for (const auto& w : sh.witnesses->witnesses) {
    if (values.value(w.x) == Rational(3, 5) && values.value(w.y) == Rational(5, 11) &&
        values.value(w.z) == Rational(11, 19)) {
      reported = values.value(w.lhs) == (Rational(3) - d) / Rational(19) &&
                 values.value(w.rhs) == Rational(3, 19);
    }
  }
  out.require(reported, "witness (3/5,5/11,11/19)");
  out.detail << "chains=" << sh.table->chain_count() << " keys=" << sh.table->size()
             << " witnesses=" << sh.witnesses->total << " delta=" << d.str();
  out.require(sh.table->chain_count() == (std::uint64_t{1} << 24) - (1 << 12), "chain count 4^12-2^12");
}

// Criterion 3: well defined, monotone, closure claims.
void criterion3(Shared& sh, Outcome& out) {
  if (!sh.table) {
    out.require(false, "no pair table");
    return;
  }
  const auto mono = check_monotone(*sh.table);
  out.require(!mono.a, "monotone (a)");
  out.require(!mono.b, "monotone (b)");
  out.require(!mono.c, "monotone (c)");
  const auto closure = commutative_closure(*sh.table);
  out.require(closure.claim_product(), "product off the trigger");
  out.require(closure.claim_symmetric(), "one of x, y is 1 for symmetric keys");
  out.detail << " conflicts=0 symmetric_pairs=" << closure.symmetric_pairs
             << " trigger_free_keys=" << closure.trigger_free_keys;
  if (closure.symmetric_violation) {
    const auto& v = *sh.values;
    const auto [x, y] = *closure.symmetric_violation;
    out.detail << " e.g. F(" << v.value(x).str() << "," << v.value(y).str()
               << ")=" << v.value(sh.table->combine(x, y)).str() << " and F(" << v.value(y).str()
               << "," << v.value(x).str() << ")=" << v.value(sh.table->combine(y, x)).str();
  }
}

// Criterion 4: rescaling infeasible with a certificate; identity on Pr.
void criterion4(Shared& sh, Outcome& out) {
  const auto& s = *sh.twelve;
  const auto& values = *sh.values;
  const auto sys = build_system(s, values);
  const RescalingSolver solver(sys);
  const auto verdict = solver.solve();
  out.require(verdict.status == Feasibility::kInfeasible, "infeasible");
  out.require(verdict.certificate && replay(sys, *verdict.certificate), "verdict certificate replays");
  const auto hi = values.find(Rational(3, 19));
  const auto lo = values.find((Rational(3) - s.delta()) / Rational(19));
  std::optional<Certificate> cert;
  if (hi && lo) cert = solver.certificate_for(*lo, *hi);
  out.require(cert && replay(sys, *cert), "g(3/19)=g((3-d)/19) certificate");
  if (cert) out.detail << "certificate terms=" << cert->terms.size();

  const auto pr = probability_of(s);
  const auto pv = ValueTable::build(pr);
  const auto psys = build_system(pr, pv);
  const auto pverdict = solve(psys);
  out.require(pverdict.status == Feasibility::kFeasible && pverdict.identity, "Pr feasible by identity");
  bool identity = true;
  for (const auto& e : psys.equations) {
    identity = identity && pv.value(e.a) * pv.value(e.b) == pv.value(e.c);
  }
  out.require(identity, "identity satisfies every Pr equation");
  out.detail << " equations=" << sys.equations.size() << " rank=" << verdict.rank
             << " collision_classes=" << verdict.collision_classes
             << " pr_equations=" << psys.equations.size();
}

// Criterion 5: associativity on constrained triples.
void criterion5(Shared& sh, Outcome& out) {
  const std::vector<std::array<Rational, 3>> query{{Rational(3, 5), Rational(5, 11), Rational(11, 19)}};
  const auto r = check_constrained_triples(*sh.twelve, *sh.table, query, sh.threads);
  out.require(r.associative, "associative on constrained triples");
  out.require(r.missing_keys == 0, "no missing keys");
  out.require(r.queries.size() == 1 && !r.queries[0].constrained, "query triple not constrained");
  const auto pruned = find_constrained_chain(*sh.values, Rational(3, 5), Rational(5, 11), Rational(11, 19));
  out.require(!pruned, "pruned search agrees");
  out.detail << "chains=" << r.chains;
  out.require(r.chains == 244140625 - 531441, "5^12 - 3^12 chains with u3 nonempty");
}

// Criterion 6: the functional equation.
void criterion6(Shared& sh, Outcome& out) {
  const auto r = verify_eq7(*sh.twelve, *sh.table, sh.threads);
  out.require(r.holds, "twelve-world sweep");
  out.require(r.missing_keys == 0, "no missing keys");
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20);
  std::uint64_t triples = 0;
  bool product = true;
  for (int t = 0; t < 20; ++t) {
    const auto s = testsupport::random_probability(rng, 6);
    const auto values = ValueTable::build(s);
    const auto table = ConstrainedPairTable::build(s, values, {});
    out.require(verify_eq7(s, table).holds, "random structure " + std::to_string(t));
    for (const auto& tr : enumerate_r_constrained(s, values)) {
      ++triples;
      const Rational &x = values.value(tr.x), &y = values.value(tr.y), &z = values.value(tr.z);
      const ValueId fxz = table.combine(tr.x, tr.z), fyz = table.combine(tr.y, tr.z);
      const auto sum = values.find(x + y);
      const bool keyed = fxz != kNoValue && fyz != kNoValue && sum && table.combine(*sum, tr.z) != kNoValue;
      product = product && keyed && values.value(fxz) == x * z && values.value(fyz) == y * z &&
                values.value(table.combine(*sum, tr.z)) == (x + y) * z;
    }
  }
  const double small = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.require(product, "product form on random structures");
  out.require(small < 10, "random structures under 10 s");
  out.detail << "states=" << r.states << " random_triples=" << triples << " random_seconds=" << small;
}

// Criterion 7: the comparative order.
void criterion7(Shared& sh, Outcome& out) {
  const auto& s = *sh.twelve;
  const InducedOrder order(*sh.values);
  out.require(check_qcc1_qcc2(s, order).holds(), "QCC1/QCC2");
  const auto q7 = check_qcc7(*sh.table);
  out.require(!q7.a, "QCC7 (a)");
  out.require(!q7.b, "QCC7 (b)");
  out.require(!q7.c, "QCC7 (c)");
  const auto o = agreeing_obstruction(s, *sh.values);
  out.require(o.holds(), "twelve-world obstruction");
  const auto sq = agreeing_obstruction(s, *sh.values, [](const Rational& x) { return x * x; });
  out.require(sq.holds(), "obstruction under x^2");
  sh.table.reset();
  const auto f13 = build_fine13();
  const auto r = restricted_fine_check(f13, sh.threads);
  out.require(r.filter_intersection_closed && r.filter_excludes_empty, "filter family");
  out.require(r.anchored_pattern.classes_hold(), "five-class pattern with w0 added");
  out.require(!r.witnesses.witnesses.empty(), "restricted associativity witness");
  out.detail << " restricted: keys=" << r.keys << " combinations=" << r.witnesses.combinations
             << " witnesses=" << r.witnesses.total;
  if (!r.anchored_pattern.classes_hold()) {
    for (const auto& c : r.anchored_pattern.classes) {
      if (!c.equal) {
        out.detail << " unequal class " << c.expected.str() << ": " << c.members[0].value.str()
                   << " vs " << c.members[1].value.str();
        break;
      }
    }
  }
}

// Criterion 8: the appendix claims.
void criterion8(Shared& sh, Outcome& out) {
  const auto& s = *sh.twelve;
  const auto layout = block_layout(s);
  const auto c = check_closeness(s, layout);
  out.require(c.holds && c.worst < Rational(2, 1000), "closeness");
  out.detail << "closeness worst=" << c.worst.str() << " (" << approx_decimal(c.worst) << ")"
             << " pairs=" << c.pairs;
  const auto g = characterize_not_good(s);
  out.require(g.holds, "not-good characterisation");
  out.detail << " not_good=" << g.not_good << " shapes={";
  for (const auto& [shape, n] : g.by_shape) out.detail << shape.hex() << ":" << n << " ";
  out.detail << "}";
  const auto t = verify_trichotomy(s, &layout);
  out.require(t.holds(), "trichotomy");
  out.detail << " groups=" << t.groups << " violating=" << t.violating_chains;
  if (t.identities) {
    const auto& id = *t.identities;
    out.require(id.master_failures == 0, "master identity");
    out.require(id.holds(), "profile decomposition ranges");
    out.detail << " matched=" << id.matched_pairs << " a_outside_stated=" << id.a_outside_stated
               << " master_failures=" << id.master_failures;
  } else {
    out.require(false, "identities not collected");
  }
}

// Criterion 9: seeded property suite on six worlds.
void criterion9(Shared&, Outcome& out) {
  std::mt19937_64 rng(9);
  int probability_ok = 0, perturbed_ok = 0, witnesses = 0, conflicts = 0;
  bool mono_agree = true, forced_agree = true;
  for (int t = 0; t < 100; ++t) {
    const auto p = testsupport::random_probability(rng, 6);
    const auto pv = ValueTable::build(p);
    const auto pt = ConstrainedPairTable::build(p, pv, {});
    bool product = true;
    for (const auto& e : pt.entries()) product = product && pv.value(e.w) == pv.value(e.x) * pv.value(e.y);
    const auto psys = build_system(p, pv);
    probability_ok += product && find_associativity_witnesses(pt).total == 0 &&
                      solve(psys).status == Feasibility::kFeasible;

    const Rational gap = select_delta(p);
    auto pert = p.base();
    const Rational shift = gap * pert[3] / Rational(2);
    pert[3] = pert[3] - shift;
    pert[4] = pert[4] + shift;
    const BeliefStructure s(p.labels(), p.base(), pert, EventSet::of({3, 4, 5}), gap);
    const auto sv = ValueTable::build(s);
    bool ok = check_order_preservation(s, sv, ValueTable::build(p, Valuation::kProbability)).holds;
    const auto sys = build_system(s, sv);
    const RescalingSolver solver(sys);
    auto dense = forced_pairs_dense(sys);
    auto sparse = forced_pairs(solver);
    std::sort(dense.begin(), dense.end());
    std::sort(sparse.begin(), sparse.end());
    forced_agree = forced_agree && dense == sparse;
    try {
      const auto st = ConstrainedPairTable::build(s, sv, {});
      const auto pts = key_points(st);
      const auto fast = check_monotone(pts, sv.size(), sv.zero_id());
      const auto slow = check_monotone_naive(pts, sv.zero_id());
      mono_agree = mono_agree && fast.a.has_value() == slow.a.has_value() &&
                   fast.b.has_value() == slow.b.has_value() && fast.c.has_value() == slow.c.has_value();
      for (const auto& w : find_associativity_witnesses(st).witnesses) {
        ++witnesses;
        const PairEntry* yz = st.lookup(w.y, w.z);
        const PairEntry* xyz = st.lookup(w.x, w.yz);
        const PairEntry* xy = st.lookup(w.x, w.y);
        const PairEntry* xy_z = st.lookup(w.xy, w.z);
        auto chain_ok = [&](const PairEntry* e) {
          return e && s.bel(e->witness.u3, e->witness.u2) == sv.value(e->x) &&
                 s.bel(e->witness.u2, e->witness.u1) == sv.value(e->y) &&
                 s.bel(e->witness.u3, e->witness.u1) == sv.value(e->w);
        };
        ok = ok && chain_ok(yz) && chain_ok(xyz) && chain_ok(xy) && chain_ok(xy_z) &&
             yz->w == w.yz && xyz->w == w.lhs && xy->w == w.xy && xy_z->w == w.rhs && w.lhs != w.rhs;
      }
    } catch (const PairConflictError& e) {
      ++conflicts;
      ok = ok && s.bel(e.first.u3, e.first.u1) != s.bel(e.second.u3, e.second.u1);
    }
    perturbed_ok += ok;
  }
  out.require(probability_ok == 100, "probability structures");
  out.require(perturbed_ok == 100, "perturbed structures");
  out.require(mono_agree, "fast monotonicity matches naive");
  out.require(forced_agree, "sparse forced pairs match dense");
  out.detail << "probability=" << probability_ok << "/100 perturbed=" << perturbed_ok
             << "/100 replayed_witnesses=" << witnesses << " conflicts=" << conflicts;
}

struct Criterion {
  int id;
  const char* title;
  double budget;
  std::function<void(Shared&, Outcome&)> run;
};

std::set<int> parse_ids(const char* text) {
  std::set<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expect_red, only;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::strcmp(argv[i], "--expect-red") == 0) expect_red = parse_ids(argv[i + 1]);
    else if (std::strcmp(argv[i], "--only") == 0) only = parse_ids(argv[i + 1]);
  }
  Shared sh;
  sh.threads = default_thread_count();
  const auto build_start = std::chrono::steady_clock::now();
  sh.twelve.emplace(build_halpern());
  std::printf("construction: delta=%s (%.1f s)\n", sh.twelve->delta().str().c_str(),
              std::chrono::duration<double>(std::chrono::steady_clock::now() - build_start).count());

  const std::vector<Criterion> criteria{
      {1, "equality classes", 1, criterion1},
      {2, "forced values and witness", 120, criterion2},
      {3, "well defined, monotone, closure claims", 120, criterion3},
      {4, "rescaling", 60, criterion4},
      {5, "constrained triples", 900, criterion5},
      {6, "functional equation", 900, criterion6},
      {7, "comparative order", 300, criterion7},
      {8, "appendix", 600, criterion8},
      {9, "property suite", 300, criterion9},
  };
  std::set<int> red;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id) && c.id > 4) continue;
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(sh, out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(secs < c.budget, "time budget");
    if (!only.empty() && !only.count(c.id)) continue;
    if (!out.ok) red.insert(c.id);
    std::string detail = out.detail.str();
    detail.erase(0, detail.find_first_not_of(' '));
    std::printf("[%s] criterion %d (%s): %s (%.1f s, budget %.0f s)\n", out.ok ? "PASS" : "FAIL", c.id,
                c.title, detail.c_str(), secs, c.budget);
    std::fflush(stdout);
  }
  std::string summary;
  for (int id : red) summary += (summary.empty() ? "" : ",") + std::to_string(id);
  std::printf("red criteria: %s\n", summary.empty() ? "none" : summary.c_str());
  if (!only.empty()) {
    std::erase_if(expect_red, [&](int id) { return !only.count(id); });
  }
  if (red != expect_red) {
    std::printf("expected red set differs\n");
    return 1;
  }
  return 0;
}
