#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "coxfine/belief_structure.hpp"
#include "coxfine/constructions.hpp"
#include "coxfine/domain_file.hpp"
#include "coxfine/errors.hpp"
#include "coxfine/value_table.hpp"
#include "support.hpp"

using namespace coxfine;
using testsupport::oracle_bel;
using testsupport::oracle_pr;
using testsupport::q;
using testsupport::set_of;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kUsage;
}

}  // namespace

TEST_SUITE("belief_domain") {
  TEST_CASE("weights of the twelve-world table") {
    const auto s = build_halpern();
    CHECK(s.weight_sum(WeightTable::kBase, set_of(s, {"w1", "w2"})) == Rational(5));
    CHECK(s.weight_sum(WeightTable::kBase, EventSet()) == Rational(0));
    CHECK(s.weight_sum(WeightTable::kBase, s.worlds()).str() == "19000000001900190011");
    CHECK(s.weight_sum(WeightTable::kPerturbed, s.trigger()) ==
          s.weight_sum(WeightTable::kBase, s.trigger()));
  }

  TEST_CASE("conditional probabilities") {
    const auto s = build_halpern();
    CHECK(s.cond_prob(set_of(s, {"w1"}), set_of(s, {"w1", "w2"})) == Rational(3, 5));
    CHECK(s.cond_prob(set_of(s, {"w4", "w5"}), set_of(s, {"w4", "w5", "w6"})) == Rational(11, 19));
    const EventSet u = set_of(s, {"w2", "w7", "w11"});
    CHECK(s.cond_prob(u, u) == Rational(1));
    CHECK_THROWS_AS(s.cond_prob(u, EventSet()), Error);
  }

  TEST_CASE("perturbed belief on the trigger") {
    const auto s = build_halpern();
    const Rational d = s.delta();
    const EventSet top = set_of(s, {"w10", "w11", "w12"});
    CHECK(s.bel(set_of(s, {"w10"}), top) == (Rational(3) - d) / Rational(19));
    CHECK(s.bel(set_of(s, {"w10", "w11"}), top) == Rational(5, 19));
    CHECK(s.bel(set_of(s, {"w7"}), set_of(s, {"w7", "w8", "w9"})) == Rational(3, 19));
  }

  TEST_CASE("belief matches the oracle and reduces to Pr off the trigger") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 5; ++t) {
      const auto s = testsupport::random_perturbed(rng, 6);
      for (std::uint64_t u = 1; u < 64; ++u) {
        for (std::uint64_t v = 0; v < 64; ++v) {
          const Rational b = s.bel(EventSet(v), EventSet(u));
          CHECK(b.mpq() == oracle_bel(s, v, u));
          if ((s.trigger().bits() & ~u) != 0) CHECK(b.mpq() == oracle_pr(s, v, u));
        }
      }
    }
  }

  TEST_CASE("value table ranks agree with the values") {
    std::mt19937_64 rng(12);
    const auto s = testsupport::random_perturbed(rng, 5);
    const auto values = ValueTable::build(s);
    std::set<Rational> distinct;
    for (std::uint64_t u = 1; u < 32; ++u) {
      for (std::uint64_t v = 0; v < 32; ++v) {
        const ValueId id = values.id_of(EventSet(v), EventSet(u));
        CHECK(values.value(id).mpq() == oracle_bel(s, v, u));
        distinct.insert(values.value(id));
      }
    }
    CHECK(distinct.size() == values.size());
    CHECK(std::is_sorted(values.values().begin(), values.values().end()));
    CHECK(values.value(values.zero_id()) == Rational(0));
    CHECK(values.value(values.one_id()) == Rational(1));
  }

  TEST_CASE("gap selection") {
    const auto two = BeliefStructure::probability(default_labels(2), {Rational(1), Rational(1)});
    const auto values = ValueTable::build(two, Valuation::kProbability);
    CHECK(values.size() == 3);
    CHECK(select_delta(two) == Rational(1, 2));
    const auto one = BeliefStructure::probability(default_labels(1), {Rational(4)});
    CHECK(select_delta(one) == Rational(1));

    std::mt19937_64 rng(13);
    for (int t = 0; t < 10; ++t) {
      const auto s = testsupport::random_probability(rng, 5);
      std::set<mpq_class> all;
      for (std::uint64_t u = 1; u < 32; ++u) {
        for (std::uint64_t v = 0; v < 32; ++v) all.insert(oracle_pr(s, v, u));
      }
      mpq_class gap = 1;
      for (auto it = std::next(all.begin()); it != all.end(); ++it) {
        gap = std::min<mpq_class>(gap, *it - *std::prev(it));
      }
      CHECK(select_delta(s).mpq() == gap);
    }
  }

  TEST_CASE("the constructed delta preserves the probability order") {
    const auto s = build_halpern();
    CHECK(s.delta() == select_delta(s.unperturbed()));
    const auto op = check_order_preservation(s, ValueTable::build(s),
                                             ValueTable::build(s, Valuation::kProbability));
    CHECK(op.holds);
  }

  TEST_CASE("thirteen-world variant") {
    const auto s = build_fine13();
    CHECK(s.size() == 13);
    CHECK(s.base()[s.index_of("w3")] == q("599999/100000"));
    CHECK(s.base()[s.index_of("w0")] == q("1/100000"));
    const auto h = counterexample_base_weights();
    Rational moved;
    for (int i = 1; i <= 12; ++i) moved += h[i - 1] - s.base()[i];
    CHECK(moved == q("4/100000"));
    CHECK(s.trigger() == set_of(s, {"w0", "w10", "w11", "w12"}));
    CHECK(s.weight_sum(WeightTable::kPerturbed, s.trigger()) ==
          s.weight_sum(WeightTable::kBase, s.trigger()));
  }

  TEST_CASE("invariants are enforced") {
    const auto labels = default_labels(3);
    const std::vector<Rational> f{Rational(1), Rational(2), Rational(3)};
    CHECK(code_of([&] { BeliefStructure::probability(labels, {Rational(1), Rational(0), Rational(1)}); }) ==
          ErrorCode::kNonPositiveWeight);
    CHECK(code_of([&] {
            BeliefStructure(labels, f, {Rational(2), Rational(1), Rational(3)}, EventSet::of({0}),
                            Rational(0));
          }) == ErrorCode::kTriggerViolation);
    CHECK(code_of([&] {
            BeliefStructure(labels, f, {Rational(2), Rational(2), Rational(3)}, EventSet::of({0, 1}),
                            Rational(0));
          }) == ErrorCode::kTriggerViolation);
    CHECK_NOTHROW(BeliefStructure(labels, f, {Rational(2), Rational(1), Rational(3)},
                                  EventSet::of({0, 1}), Rational(0)));
    CHECK(code_of([&] {
            BeliefStructure::probability(default_labels(65), std::vector<Rational>(65, Rational(1)));
          }) == ErrorCode::kTooManyWorlds);
  }

  TEST_CASE("domain files round trip") {
    const auto s = build_halpern();
    CHECK(parse_structure(serialize_structure(s)) == s);
    const auto p = parse_structure(R"({"worlds":["a","b"],"f":{"a":"3","b":"1/100000"}})");
    CHECK(p.base()[1] == Rational(1, 100000));
    CHECK(p.is_probability());
    CHECK(p.delta() == select_delta(p));
    CHECK(code_of([] { parse_structure("{bad"); }) == ErrorCode::kParse);
    CHECK(code_of([] { parse_structure(R"({"worlds":["a"],"f":{"a":3}})"); }) == ErrorCode::kParse);
    CHECK(code_of([] { parse_structure(R"({"worlds":["a"],"f":{}})"); }) == ErrorCode::kParse);
    CHECK(code_of([] { parse_structure(R"({"worlds":["a"],"f":{"a":"0"}})"); }) ==
          ErrorCode::kNonPositiveWeight);
  }
}
