#include <doctest.h>

#include <random>
#include <set>
#include <tuple>

#include "coxfine/belief_structure.hpp"
#include "coxfine/functional_eq.hpp"
#include "coxfine/pair_table.hpp"
#include "coxfine/value_table.hpp"
#include "support.hpp"

using namespace coxfine;

TEST_SUITE("functional_eq") {
  TEST_CASE("triples from the first block") {
    const auto s = BeliefStructure::probability(default_labels(3), {Rational(3), Rational(2), Rational(6)});
    const auto values = ValueTable::build(s);
    const auto triples = enumerate_r_constrained(s, values);
    // U = {w1,w2,w3}, V = {w1,w2}, B1 = {w1}, B2 = {w2}.
    const auto x = values.find(Rational(3, 5)), y = values.find(Rational(2, 5)),
               z = values.find(Rational(5, 11));
    REQUIRE((x && y && z));
    bool found = false;
    for (const auto& t : triples) found = found || (t.x == *x && t.y == *y && t.z == *z);
    CHECK(found);
    for (const auto& t : triples) {
      const auto& w = t.witness;
      const EventSet a = w.event & w.given;
      CHECK_FALSE(a.empty());
      CHECK((w.first & w.second).empty());
      CHECK(s.bel(w.first, a) == values.value(t.x));
      CHECK(s.bel(w.second, a) == values.value(t.y));
      CHECK(s.bel(w.event, w.given) == values.value(t.z));
    }
  }

  TEST_CASE("triples with an empty second part") {
    std::mt19937_64 rng(31);
    const auto s = testsupport::random_probability(rng, 4);
    const auto values = ValueTable::build(s);
    std::uint64_t states = 0, with_zero_y = 0;
    for_each_r_state(values, 1, 16, [&](const RTriple& t) {
      ++states;
      if (t.witness.second.empty()) {
        ++with_zero_y;
        CHECK(t.y == values.zero_id());
      }
    });
    // 5^n colourings minus the 2^n with every world outside U or in U∖V.
    CHECK(states == 625 - 16);
    CHECK(with_zero_y > 0);
  }

  TEST_CASE("distinct triples match a brute-force oracle") {
    std::mt19937_64 rng(32);
    const auto s = testsupport::random_perturbed(rng, 4);
    const auto values = ValueTable::build(s);
    std::set<std::tuple<mpq_class, mpq_class, mpq_class>> oracle;
    for (std::uint64_t u = 1; u < 16; ++u)
      for (std::uint64_t v = 0; v < 16; ++v)
        for (std::uint64_t v1 = 0; v1 < 16; ++v1)
          for (std::uint64_t v2 = 0; v2 < 16; ++v2) {
            if ((v & u) == 0 || (v1 & v2) != 0) continue;
            oracle.insert({testsupport::oracle_bel(s, v & v1, v & u),
                           testsupport::oracle_bel(s, v & v2, v & u),
                           testsupport::oracle_bel(s, v, u)});
          }
    const auto triples = enumerate_r_constrained(s, values);
    CHECK(triples.size() == oracle.size());
    for (const auto& t : triples) {
      CHECK(oracle.count({values.value(t.x).mpq(), values.value(t.y).mpq(), values.value(t.z).mpq()}));
    }
  }

  TEST_CASE("the functional equation holds for product") {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 5; ++t) {
      const auto s = testsupport::random_probability(rng, 5);
      const auto values = ValueTable::build(s);
      const auto table = ConstrainedPairTable::build(s, values, {});
      const auto r = verify_eq7(s, table, 2);
      CHECK(r.holds);
      CHECK(r.missing_keys == 0);
      CHECK(r.states == 3125 - 32);
      for (const auto& tr : enumerate_r_constrained(s, values)) {
        const Rational& x = values.value(tr.x);
        const Rational& y = values.value(tr.y);
        const Rational& z = values.value(tr.z);
        CHECK(x * z + y * z == (x + y) * z);
      }
    }
  }

  TEST_CASE("the functional equation holds under perturbation") {
    std::mt19937_64 rng(34);
    int checked = 0;
    for (int t = 0; t < 10 && checked < 3; ++t) {
      const auto s = testsupport::random_perturbed(rng, 5);
      const auto values = ValueTable::build(s);
      try {
        const auto table = ConstrainedPairTable::build(s, values, {});
        const auto r = verify_eq7(s, table, 1);
        CHECK(r.holds);
        CHECK(r.missing_keys == 0);
        ++checked;
      } catch (const PairConflictError&) {
      }
    }
    CHECK(checked > 0);
  }
}
