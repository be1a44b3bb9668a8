#include <doctest.h>

#include <random>
#include <vector>

#include "coxfine/errors.hpp"
#include "coxfine/event_set.hpp"
#include "coxfine/parallel.hpp"
#include "coxfine/rational.hpp"
#include "support.hpp"

using namespace coxfine;
using testsupport::q;

TEST_SUITE("arith") {
  TEST_CASE("rationals parse to canonical form") {
    CHECK(Rational::parse("3") == Rational(3));
    CHECK(Rational::parse("1/100000") == Rational(1, 100000));
    CHECK(Rational::parse("6/4").str() == "3/2");
    CHECK(Rational::parse("-2/4").str() == "-1/2");
    CHECK_THROWS_AS(Rational::parse("-2/-4"), Error);
    CHECK(Rational::parse("0.00001") == Rational(1, 100000));
    CHECK_THROWS_AS(Rational::parse("1/0"), Error);
    CHECK_THROWS_AS(Rational::parse("abc"), Error);
    CHECK_THROWS_AS(Rational::parse(""), Error);
  }

  TEST_CASE("arithmetic is exact beyond 64 bits") {
    const Rational total = Rational(11) + Rational(19) * Rational::pow10(4) +
                           Rational(19) * Rational::pow10(8) + Rational(19) * Rational::pow10(18);
    CHECK(total.str() == "19000000001900190011");
    CHECK(Rational::pow10(-5) == Rational(1, 100000));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK(Rational(2, 3) / Rational(4, 9) == Rational(3, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(abs(Rational(-5, 7)) == Rational(5, 7));
  }

  TEST_CASE("hash agrees with equality") {
    CHECK(Rational(2, 4).hash() == Rational(1, 2).hash());
    CHECK(q("10/20") == Rational(1, 2));
  }

  TEST_CASE("event set operations") {
    const EventSet a = EventSet::of({0, 2}), b = EventSet::of({2, 3});
    CHECK((a & b) == EventSet::single(2));
    CHECK((a | b).count() == 3);
    CHECK(a.complement(4) == EventSet::of({1, 3}));
    CHECK(a.without(b) == EventSet::single(0));
    CHECK(EventSet::single(2).subset_of(a));
    CHECK_FALSE(a.subset_of(b));
    CHECK(EventSet().empty());
    CHECK(EventSet::full(64).count() == 64);
    CHECK(EventSet::of({0, 1, 2, 3}).hex() == "f");
  }

  TEST_CASE("submasks are visited once each in ascending order") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const std::uint64_t mask = rng() & 0xfff;
      std::vector<std::uint64_t> seen;
      for_each_submask(mask, [&](std::uint64_t s) { seen.push_back(s); });
      std::vector<std::uint64_t> oracle;
      for (std::uint64_t s = 0; s <= mask; ++s) {
        if ((s & ~mask) == 0) oracle.push_back(s);
      }
      CHECK(seen == oracle);
    }
  }

  TEST_CASE("flat index keeps the first value") {
    FlatIndex index(4);
    std::mt19937_64 rng(5);
    std::vector<std::uint64_t> keys;
    for (std::uint32_t i = 0; i < 5000; ++i) {
      const std::uint64_t k = rng() % 3000;
      const std::uint32_t stored = index.insert(k, i);
      bool fresh = true;
      for (std::size_t j = 0; j < keys.size(); ++j) {
        if (keys[j] == k) {
          fresh = false;
          CHECK(stored == j);
          break;
        }
      }
      if (fresh) CHECK(stored == i);
      keys.push_back(k);
    }
    CHECK(index.find(999999) == FlatIndex::kAbsent);
  }

  TEST_CASE("partitioned runs cover the range exactly once") {
    for (int parts : {1, 2, 3, 7}) {
      std::vector<int> hits(100, 0);
      run_partitioned(0, 100, parts, [&](int, std::uint64_t lo, std::uint64_t hi) {
        for (auto i = lo; i < hi; ++i) ++hits[i];
      });
      for (int h : hits) CHECK(h == 1);
    }
  }
}
