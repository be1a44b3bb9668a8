#include "coxfine/constructions.hpp"

#include "coxfine/errors.hpp"

namespace coxfine {

namespace {

Rational scaled(long multiplier, int exponent) { return Rational(multiplier) * Rational::pow10(exponent); }

}  // namespace

std::vector<Rational> counterexample_base_weights() {
  return {scaled(3, 0),  scaled(2, 0),  scaled(6, 0),  scaled(5, 4),
          scaled(6, 4),  scaled(8, 4),  scaled(3, 8),  scaled(8, 8),
          scaled(8, 8),  scaled(3, 18), scaled(2, 18), scaled(14, 18)};
}

Rational select_delta(const ValueTable& probability_values) {
  const auto values = probability_values.values();
  if (values.size() < 2) {
    throw Error(ErrorCode::kDegenerateDomain, "all conditional probabilities are equal");
  }
  Rational best = values[1] - values[0];
  for (std::size_t i = 2; i < values.size(); ++i) {
    Rational gap = values[i] - values[i - 1];
    if (gap < best) best = std::move(gap);
  }
  return best;
}

Rational select_delta(const BeliefStructure& base) {
  return select_delta(ValueTable::build(base, Valuation::kProbability));
}

BeliefStructure probability_of(const BeliefStructure& s) {
  return BeliefStructure::probability(s.labels(), s.base());
}

BeliefStructure build_halpern(std::optional<Rational> delta) {
  auto base = counterexample_base_weights();
  if (!delta) delta = select_delta(BeliefStructure::probability(default_labels(12), base));
  auto pert = base;
  const Rational e18 = Rational::pow10(18);
  pert[9] = (Rational(3) - *delta) * e18;
  pert[10] = (Rational(2) + *delta) * e18;
  return BeliefStructure(default_labels(12), std::move(base), std::move(pert),
                         EventSet::of({9, 10, 11}), std::move(*delta));
}

BeliefStructure build_fine13(std::optional<Rational> delta) {
  const Rational eps = Rational::pow10(-5);
  std::vector<Rational> base{eps};
  for (auto& w : counterexample_base_weights()) base.push_back(w);
  for (int idx : {3, 6, 9, 12}) base[idx] -= eps;
  const auto labels = default_labels(13, true);
  if (!delta) delta = select_delta(BeliefStructure::probability(labels, base));
  auto pert = base;
  const Rational e18 = Rational::pow10(18);
  pert[10] = (Rational(3) - *delta) * e18;
  pert[11] = (Rational(2) + *delta) * e18;
  return BeliefStructure(labels, std::move(base), std::move(pert),
                         EventSet::of({0, 10, 11, 12}), std::move(*delta));
}

OrderPreservation check_order_preservation(const BeliefStructure& s, const ValueTable& bel,
                                           const ValueTable& pr) {
  OrderPreservation out;
  const std::size_t classes = pr.size();
  out.probability_classes = classes;
  std::vector<ValueId> lo(classes, kNoValue), hi(classes, 0);
  std::vector<std::uint64_t> lo_at(classes), hi_at(classes);
  const std::uint64_t masks = std::uint64_t{1} << s.size();

  mpq_class diff;
  for (std::uint64_t u = 1; u < masks; ++u) {
    for_each_submask(u, [&](std::uint64_t sub) {
      const ValueId p = pr.id(sub, u);
      const ValueId b = bel.id(sub, u);
      if (lo[p] == kNoValue || b < lo[p]) { lo[p] = b; lo_at[p] = sub | (u << 32); }
      if (b > hi[p]) { hi[p] = b; hi_at[p] = sub | (u << 32); }
      diff = bel.value(b).mpq() - pr.value(p).mpq();
      if (sgn(diff) < 0) diff = -diff;
      if (diff > out.max_shift.mpq()) out.max_shift = Rational(diff);
    });
  }
  auto unpack = [](std::uint64_t packed) {
    return ConditionalObject{EventSet(packed & 0xffffffffULL), EventSet(packed >> 32)};
  };
  for (std::size_t k = 0; k + 1 < classes; ++k) {
    if (!(hi[k] < lo[k + 1])) {
      out.holds = false;
      out.lower_witness = unpack(hi_at[k]);
      out.upper_witness = unpack(lo_at[k + 1]);
      break;
    }
  }
  return out;
}

}  // namespace coxfine
