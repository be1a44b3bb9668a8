#include <doctest.h>

#include <random>

#include "coxfine/belief_structure.hpp"
#include "coxfine/constructions.hpp"
#include "coxfine/cox_checker.hpp"
#include "coxfine/pair_table.hpp"
#include "coxfine/rescaling.hpp"
#include "coxfine/value_table.hpp"
#include "support.hpp"

using namespace coxfine;

namespace {

constexpr int kTrials = 30;

}  // namespace

TEST_SUITE("property") {
  TEST_CASE("belief is a probability on each conditioning set") {
    std::mt19937_64 rng(81);
    for (int t = 0; t < kTrials; ++t) {
      const auto s = testsupport::random_perturbed(rng, 6);
      const std::uint64_t u = 1 + rng() % 63, v = rng() % 64, w = rng() % 64 & ~v;
      CHECK(s.bel(EventSet(u), EventSet(u)) == Rational(1));
      CHECK(s.bel(EventSet(), EventSet(u)) == Rational(0));
      CHECK(s.bel(EventSet(v | w), EventSet(u)) ==
            s.bel(EventSet(v), EventSet(u)) + s.bel(EventSet(w), EventSet(u)));
      CHECK(s.bel(EventSet(v).complement(6), EventSet(u)) == Rational(1) - s.bel(EventSet(v), EventSet(u)));
    }
  }

  TEST_CASE("product on probability structures") {
    std::mt19937_64 rng(82);
    for (int t = 0; t < kTrials; ++t) {
      const auto s = testsupport::random_probability(rng, 6);
      const auto values = ValueTable::build(s);
      const auto table = ConstrainedPairTable::build(s, values, {});
      bool product = true;
      for (const auto& e : table.entries()) {
        product = product && values.value(e.w) == values.value(e.x) * values.value(e.y);
      }
      CHECK(product);
      CHECK(find_associativity_witnesses(table).total == 0);
      CHECK(solve(build_system(s, values)).status == Feasibility::kFeasible);
    }
  }

  TEST_CASE("fast monotonicity matches the naive oracle on real tables") {
    std::mt19937_64 rng(83);
    int compared = 0;
    for (int t = 0; t < kTrials; ++t) {
      const auto s = t % 2 ? testsupport::random_perturbed(rng, 6) : testsupport::random_probability(rng, 6);
      const auto values = ValueTable::build(s);
      try {
        const auto table = ConstrainedPairTable::build(s, values, {});
        const auto pts = key_points(table);
        const auto fast = check_monotone(pts, values.size(), values.zero_id());
        const auto slow = check_monotone_naive(pts, values.zero_id());
        CHECK(fast.a.has_value() == slow.a.has_value());
        CHECK(fast.b.has_value() == slow.b.has_value());
        CHECK(fast.c.has_value() == slow.c.has_value());
        ++compared;
      } catch (const PairConflictError& e) {
        CHECK(e.w_first != e.w_second);
      }
    }
    CHECK(compared > kTrials / 2);
  }

  TEST_CASE("value ids preserve order under probability") {
    std::mt19937_64 rng(84);
    for (int t = 0; t < kTrials; ++t) {
      const auto s = testsupport::random_probability(rng, 6);
      const auto values = ValueTable::build(s);
      for (int k = 0; k < 50; ++k) {
        const EventSet u1(1 + rng() % 63), v1(rng() % 64), u2(1 + rng() % 63), v2(rng() % 64);
        const auto a = values.id_of(v1, u1), b = values.id_of(v2, u2);
        CHECK((a < b) == (s.cond_prob(v1, u1) < s.cond_prob(v2, u2)));
      }
    }
  }

  TEST_CASE("small offsetting perturbations keep the probability order") {
    std::mt19937_64 rng(85);
    for (int t = 0; t < 10; ++t) {
      const auto p = testsupport::random_probability(rng, 6);
      const Rational gap = select_delta(p);
      auto pert = p.base();
      const Rational shift = gap * p.base()[3] / Rational(2);
      pert[3] = pert[3] - shift;
      pert[4] = pert[4] + shift;
      const BeliefStructure s(p.labels(), p.base(), pert, EventSet::of({3, 4, 5}), gap);
      const auto op = check_order_preservation(s, ValueTable::build(s),
                                               ValueTable::build(p, Valuation::kProbability));
      CHECK(op.holds);
    }
  }
}
