#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "coxfine/belief_structure.hpp"
#include "coxfine/event_set.hpp"
#include "coxfine/rational.hpp"

namespace testsupport {

using coxfine::BeliefStructure;
using coxfine::EventSet;
using coxfine::Rational;

inline Rational q(const char* text) { return Rational(mpq_class(text)); }

inline EventSet set_of(const BeliefStructure& s, std::initializer_list<const char*> labels) {
  EventSet out;
  for (const char* l : labels) out = out | EventSet::single(s.index_of(l));
  return out;
}

// Plain mpq sums over bits, independent of the library's weight tables.
inline mpq_class oracle_sum(const std::vector<Rational>& w, std::uint64_t mask) {
  mpq_class total = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if ((mask >> i) & 1U) total += w[i].mpq();
  }
  return total;
}

inline mpq_class oracle_bel(const BeliefStructure& s, std::uint64_t v, std::uint64_t u) {
  const bool triggered = (s.trigger().bits() & ~u) == 0;
  const auto& num = triggered ? s.perturbed() : s.base();
  mpq_class out = oracle_sum(num, v & u) / oracle_sum(s.base(), u);
  out.canonicalize();
  return out;
}

inline mpq_class oracle_pr(const BeliefStructure& s, std::uint64_t v, std::uint64_t u) {
  mpq_class out = oracle_sum(s.base(), v & u) / oracle_sum(s.base(), u);
  out.canonicalize();
  return out;
}

// Weights k·tier with k in [1, 9], blocks of three worlds.
inline std::vector<Rational> random_weights(std::mt19937_64& rng, int n) {
  static const long tiers[] = {1, 100, 10000};
  std::vector<Rational> w;
  for (int i = 0; i < n; ++i) {
    w.emplace_back(static_cast<long>(1 + rng() % 9) * tiers[(i / 3) % 3]);
  }
  return w;
}

inline BeliefStructure random_probability(std::mt19937_64& rng, int n) {
  return BeliefStructure::probability(coxfine::default_labels(n), random_weights(rng, n));
}

// Moves a random fraction of the first trigger world's weight to the second;
// trigger = the last three worlds.
inline BeliefStructure random_perturbed(std::mt19937_64& rng, int n) {
  auto base = random_weights(rng, n);
  auto pert = base;
  const int first = n - 3;
  const Rational shift = base[first] * Rational(static_cast<long>(1 + rng() % 7),
                                                static_cast<long>(10 + rng() % 90));
  pert[first] = base[first] - shift;
  pert[first + 1] = base[first + 1] + shift;
  EventSet trigger;
  for (int i = first; i < n; ++i) trigger = trigger | EventSet::single(i);
  return BeliefStructure(coxfine::default_labels(n), base, pert, trigger, shift / base[first]);
}

}  // namespace testsupport
