#include <doctest.h>

#include <random>

#include "coxfine/belief_structure.hpp"
#include "coxfine/constructions.hpp"
#include "coxfine/cox_checker.hpp"
#include "coxfine/errors.hpp"
#include "coxfine/fine_qcc.hpp"
#include "coxfine/pair_table.hpp"
#include "coxfine/value_table.hpp"
#include "support.hpp"

using namespace coxfine;

TEST_SUITE("fine_qcc") {
  TEST_CASE("induced order basics") {
    std::mt19937_64 rng(51);
    const auto s = testsupport::random_perturbed(rng, 5);
    const auto values = ValueTable::build(s);
    const InducedOrder order(values);
    const ConditionalObject a{EventSet::of({0}), EventSet::of({0, 1})};
    const ConditionalObject b{EventSet::of({1}), EventSet::of({0, 1})};
    CHECK(order.at_least(a, a));
    CHECK((order.at_least(a, b) || order.at_least(b, a)));
    CHECK((order.compare(a, b) == (s.bel(a) <=> s.bel(b))));
    const auto r = check_qcc1_qcc2(s, order, 1000, 7);
    CHECK(r.holds());
    CHECK(r.samples == 1000);
  }

  TEST_CASE("filter family anchored at a world") {
    const FilterFamily family(6, EventSet::single(0));
    CHECK(family.member_count() == 32);
    CHECK(family.intersection_closed());
    CHECK(family.excludes_empty());
    CHECK(family.contains(EventSet::of({0, 3})));
    CHECK_FALSE(family.contains(EventSet::of({1, 3})));
    const FilterFamily empty(6, EventSet());
    CHECK(empty.member_count() == 0);
  }

  TEST_CASE("product satisfies the comparative clauses") {
    std::mt19937_64 rng(52);
    const auto s = testsupport::random_probability(rng, 6);
    const auto values = ValueTable::build(s);
    const auto table = ConstrainedPairTable::build(s, values, {});
    const auto q = check_qcc7(table);
    CHECK(q.holds());
    const auto f = fine_clauses(table, check_monotone(table), find_associativity_witnesses(table));
    CHECK(f.a2);
    CHECK(f.commutative);
    CHECK(f.increasing);
    CHECK(f.associative);
    CHECK(f.unit_law);
    CHECK(f.zero_law);
  }

  TEST_CASE("clause (a) agrees with monotonicity clause (a)") {
    std::mt19937_64 rng(53);
    int broken = 0;
    for (int t = 0; t < 30; ++t) {
      const auto s = testsupport::random_perturbed(rng, 6);
      const auto values = ValueTable::build(s);
      try {
        const auto table = ConstrainedPairTable::build(s, values, {});
        const auto mono = check_monotone(table);
        const auto q = check_qcc7(table);
        CHECK(q.a.has_value() == mono.a.has_value());
        if (q.a) {
          ++broken;
          CHECK(q.a->upper.x >= q.a->lower.x);
          CHECK(q.a->upper.y >= q.a->lower.y);
          CHECK(q.a->upper.w < q.a->lower.w);
        }
      } catch (const PairConflictError&) {
      }
    }
    MESSAGE("tables violating clause (a): " << broken);
  }

  TEST_CASE("the five-class obstruction on the twelve-world order") {
    const auto s = build_halpern();
    const auto values = ValueTable::build(s);
    const auto o = agreeing_obstruction(s, values);
    CHECK(o.classes_hold());
    CHECK(o.linked);
    CHECK(o.strict_gap);
    CHECK(o.low == (Rational(3) - s.delta()) / Rational(19));
    CHECK(o.high == Rational(3, 19));
    CHECK(o.classes.size() == 5);
    CHECK(o.classes[0].members[0].value == Rational(3, 5));
    const auto sq = agreeing_obstruction(s, values, [](const Rational& x) { return x * x; });
    CHECK(sq.holds());
    CHECK(sq.high == Rational(9, 361));
    const auto flip = agreeing_obstruction(s, values, [](const Rational& x) { return Rational(1) - x; });
    CHECK_FALSE(flip.order_preserving);
  }

  TEST_CASE("missing labels are reported") {
    const auto s = BeliefStructure::probability(default_labels(3), {Rational(1), Rational(1), Rational(1)});
    CHECK_THROWS_AS(agreeing_obstruction(s, ValueTable::build(s)), Error);
  }
}
