#include <doctest.h>

#include <algorithm>
#include <random>

#include "coxfine/appendix.hpp"
#include "coxfine/belief_structure.hpp"
#include "coxfine/constructions.hpp"
#include "coxfine/errors.hpp"
#include "support.hpp"

using namespace coxfine;
using testsupport::set_of;

TEST_SUITE("appendix") {
  TEST_CASE("standard sets") {
    const auto s = build_halpern();
    const auto layout = block_layout(s);
    CHECK(is_standard(layout, set_of(s, {"w1", "w3"})));
    CHECK_FALSE(is_standard(layout, set_of(s, {"w1", "w4"})));
    CHECK(is_standard(layout, set_of(s, {"w10", "w11", "w12"})));
    CHECK(heaviest_standard_subset(s, layout, set_of(s, {"w1", "w2", "w4"})) == set_of(s, {"w4"}));
    CHECK_THROWS_AS(block_layout(BeliefStructure::probability(default_labels(3),
                                                             {Rational(1), Rational(1), Rational(1)})),
                    Error);
  }

  TEST_CASE("relevant numbers") {
    const auto s = build_halpern();
    const auto layout = block_layout(s);
    const auto rel = relevant_numbers(s, layout);
    for (const Rational& r : {Rational(3, 5), Rational(5, 11), Rational(11, 19), Rational(5, 19),
                              Rational(3, 11)}) {
      CHECK(std::binary_search(rel.begin(), rel.end(), r));
    }
    std::vector<Rational> oracle;
    for (const EventSet block : layout.blocks) {
      for (std::uint64_t u = 1; u < (std::uint64_t{1} << 12); ++u) {
        if ((u & ~block.bits()) != 0) continue;
        for (std::uint64_t v = 0; v <= u; ++v) {
          if ((v & ~u) == 0) oracle.push_back(Rational(testsupport::oracle_pr(s, v, u)));
        }
      }
    }
    std::sort(oracle.begin(), oracle.end());
    oracle.erase(std::unique(oracle.begin(), oracle.end()), oracle.end());
    CHECK(rel == oracle);
  }

  TEST_CASE("a nonstandard conditioning set stays close to its standard part") {
    const auto s = build_halpern();
    const EventSet u = set_of(s, {"w1", "w10"});
    const Rational pr = s.cond_prob(set_of(s, {"w1"}), u);
    CHECK(pr == Rational(3) / (Rational(3) + Rational(3) * Rational::pow10(18)));
    CHECK(pr < Rational(2, 1000));
  }

  TEST_CASE("good triples") {
    const auto s = build_halpern();
    const EventSet all = s.worlds();
    const EventSet w10 = set_of(s, {"w10"});
    CHECK(classify_good(s, all, w10, w10));
    const EventSet v = set_of(s, {"w1", "w10"});
    const Rational lhs = s.bel(w10, all);
    const Rational rhs = s.bel(w10, v) * s.bel(v, all);
    CHECK(lhs != rhs);
    CHECK_FALSE(classify_good(s, all, v, w10));
    CHECK(classify_good(s, set_of(s, {"w1", "w2", "w10", "w11"}), set_of(s, {"w1", "w10"}),
                        set_of(s, {"w10"})));
    CHECK_THROWS_AS(classify_good(s, set_of(s, {"w1"}), set_of(s, {"w2"}), set_of(s, {"w2"})), Error);
    std::mt19937_64 rng(61);
    for (int t = 0; t < 2000; ++t) {
      const EventSet u(rng() & 0xfff);
      const EventSet v(rng() & 0xfff);
      if (u.empty() || (u & v).empty() || s.trigger().subset_of(u)) continue;
      CHECK(classify_good(s, u, v, EventSet(rng() & 0xfff)));
    }
  }

  TEST_CASE("identity check on substitution") {
    ChainProfile p;
    p.a = 3;
    p.a_stated = true;
    p.b = Rational(12345);
    p.c = Rational(678);
    p.k = 18;
    p.b_primed = p.b;
    p.c_primed = p.c;
    const auto id = verify_identities(p);
    CHECK(id.master);
    CHECK(id.k_expected);
    CHECK(id.primed_in_range);
    p.k = 12;
    CHECK_FALSE(verify_identities(p).k_expected);
  }

  TEST_CASE("grouped trichotomy matches the naive cross product") {
    std::mt19937_64 rng(62);
    for (int t = 0; t < 6; ++t) {
      const int n = 4 + t % 3;
      const auto s = t % 2 ? testsupport::random_perturbed(rng, n) : testsupport::random_probability(rng, n);
      const auto fast = verify_trichotomy(s);
      const auto naive = verify_trichotomy_naive(s);
      CHECK(fast.chains == naive.chains);
      CHECK(fast.not_good_chains == naive.not_good_chains);
      CHECK(fast.violating_chains == naive.violating_chains);
      CHECK(fast.holds() == naive.holds());
      if (s.is_probability()) CHECK(fast.not_good_chains == 0);
    }
  }
}
