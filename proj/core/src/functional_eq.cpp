#include "coxfine/functional_eq.hpp"

#include <algorithm>
#include <array>

#include "coxfine/parallel.hpp"
#include "sum_cache.hpp"

namespace coxfine {

void for_each_r_state(const ValueTable& values, std::uint64_t u_begin, std::uint64_t u_end,
                      const std::function<void(const RTriple&)>& fn) {
  RTriple t;
  for (std::uint64_t u = std::max<std::uint64_t>(u_begin, 1); u < u_end; ++u) {
    for_each_submask(u, [&](std::uint64_t a) {
      if (a == 0) return;
      t.z = values.id(a, u);
      for_each_submask(a, [&](std::uint64_t s) {
        for_each_submask(s, [&](std::uint64_t b1) {
          t.x = values.id(b1, a);
          t.y = values.id(s & ~b1, a);
          t.witness = {EventSet(u), EventSet(a), EventSet(b1), EventSet(s & ~b1)};
          fn(t);
        });
      });
    });
  }
}

std::vector<RTriple> enumerate_r_constrained(const BeliefStructure& structure,
                                             const ValueTable& values) {
  require_enumerable(structure);
  std::vector<RTriple> all;
  FlatIndex seen;
  for_each_r_state(values, 1, std::uint64_t{1} << structure.size(), [&](const RTriple& t) {
    const std::uint64_t key = (std::uint64_t{t.x} * values.size() + t.y) * values.size() + t.z;
    const auto slot = static_cast<std::uint32_t>(all.size());
    if (seen.insert(key, slot) == slot) all.push_back(t);
  });
  std::sort(all.begin(), all.end(), [](const RTriple& a, const RTriple& b) {
    return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
  });
  return all;
}

namespace {

struct Eq7Partial {
  std::uint64_t states = 0;
  std::uint64_t missing = 0;
  std::optional<RWitness> counterexample;
  std::optional<RWitness> missing_at;
};

void sweep_eq7(const ConstrainedPairTable& table, std::uint64_t lo, std::uint64_t hi,
               Eq7Partial& out) {
  const ValueTable& values = table.values();
  detail::SumCache cache;
  for (std::uint64_t u = lo; u < hi; ++u) {
    for_each_submask(u, [&](std::uint64_t a) {
      if (a == 0) return;
      const ValueId z = values.id(a, u);
      for_each_submask(a, [&](std::uint64_t s) {
        const ValueId fs = table.combine(values.id(s, a), z);
        for_each_submask(s, [&](std::uint64_t b1) {
          ++out.states;
          const ValueId f1 = table.combine(values.id(b1, a), z);
          const ValueId f2 = table.combine(values.id(s & ~b1, a), z);
          const RWitness here{EventSet(u), EventSet(a), EventSet(b1), EventSet(s & ~b1)};
          if (fs == kNoValue || f1 == kNoValue || f2 == kNoValue) {
            ++out.missing;
            if (!out.missing_at) out.missing_at = here;
            return;
          }
          if (!out.counterexample && !cache.check(values, f1, f2, fs)) out.counterexample = here;
        });
      });
    });
  }
}

}  // namespace

Eq7Report verify_eq7(const BeliefStructure& structure, const ConstrainedPairTable& table,
                     int threads) {
  require_enumerable(structure);
  const int parts = std::max(1, threads);
  std::vector<Eq7Partial> partial(parts);
  run_partitioned(1, std::uint64_t{1} << structure.size(), parts,
                  [&](int p, std::uint64_t lo, std::uint64_t hi) {
                    sweep_eq7(table, lo, hi, partial[p]);
                  });
  Eq7Report report;
  for (const Eq7Partial& p : partial) {
    report.states += p.states;
    report.missing_keys += p.missing;
    if (!report.counterexample) report.counterexample = p.counterexample;
    if (!report.missing) report.missing = p.missing_at;
  }
  report.holds = !report.counterexample && report.missing_keys == 0;
  return report;
}

std::optional<AdditivityGap> find_additivity_gap(const TotalCombination& total) {
  const std::array<Rational, 8> xs{Rational(1, 10), Rational(1, 4), Rational(3, 10),
                                   Rational(1, 3),  Rational(2, 5), Rational(9, 20),
                                   Rational(1, 2),  Rational(1, 7)};
  const std::array<Rational, 6> zs{Rational(1, 2),  Rational(11, 19), Rational(5, 19),
                                   Rational(1, 3),  Rational(3, 4),   Rational(9, 10)};
  std::vector<std::array<Rational, 3>> candidates;
  for (const Rational& x : xs) {
    for (const Rational& y : xs) {
      if (y < x || x + y > Rational(1)) continue;
      for (const Rational& z : zs) candidates.push_back({x, y, z});
    }
  }
  std::vector<std::pair<Rational, Rational>> at;
  at.reserve(candidates.size() * 3);
  for (const auto& [x, y, z] : candidates) {
    at.emplace_back(x, z);
    at.emplace_back(y, z);
    at.emplace_back(x + y, z);
  }
  const auto g = total.evaluate(at);
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (g[3 * k] + g[3 * k + 1] != g[3 * k + 2]) {
      const auto& [x, y, z] = candidates[k];
      return AdditivityGap{x, y, z, g[3 * k], g[3 * k + 1], g[3 * k + 2]};
    }
  }
  return std::nullopt;
}

}  // namespace coxfine
