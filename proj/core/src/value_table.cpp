#include "coxfine/value_table.hpp"

#include <algorithm>
#include <numeric>

#include "coxfine/errors.hpp"

namespace coxfine {

std::vector<std::uint32_t> ternary_codes(int n) {
  std::vector<std::uint32_t> tern(std::size_t{1} << n, 0);
  std::vector<std::uint32_t> pow3(n, 1);
  for (int i = 1; i < n; ++i) pow3[i] = pow3[i - 1] * 3;
  for (std::size_t m = 1; m < tern.size(); ++m) {
    const int low = std::countr_zero(m);
    tern[m] = tern[m & (m - 1)] + pow3[low];
  }
  return tern;
}

void require_enumerable(const BeliefStructure& structure) {
  if (structure.size() > kMaxEnumerationWorlds) {
    throw Error(ErrorCode::kTooLargeToEnumerate,
                "exhaustive checks support at most " + std::to_string(kMaxEnumerationWorlds) +
                    " worlds; domain has " + std::to_string(structure.size()));
  }
}

ValueTable ValueTable::build(const BeliefStructure& structure, Valuation valuation) {
  require_enumerable(structure);
  ValueTable t;
  t.n_ = structure.size();
  const std::size_t masks = std::size_t{1} << t.n_;
  t.tern_ = ternary_codes(t.n_);

  std::vector<mpq_class> base(masks), pert(masks);
  for (std::size_t m = 1; m < masks; ++m) {
    const int low = std::countr_zero(m);
    base[m] = base[m & (m - 1)] + structure.base()[low].mpq();
    pert[m] = pert[m & (m - 1)] + structure.perturbed()[low].mpq();
  }
  const std::uint64_t trigger = structure.trigger().bits();
  const bool use_perturbed = valuation == Valuation::kBelief;

  std::size_t codes = 1;
  for (int i = 0; i < t.n_; ++i) codes *= 3;
  std::vector<mpq_class> raw(codes);
  std::vector<double> approx(codes, 0.0);
  for (std::uint64_t u = 1; u < masks; ++u) {
    const auto& sums = (use_perturbed && (trigger & ~u) == 0) ? pert : base;
    const auto& denom = base[u];
    const std::uint32_t tu = t.tern_[u];
    for_each_submask(u, [&](std::uint64_t s) {
      const std::uint32_t code = tu + t.tern_[s];
      mpq_div(raw[code].get_mpq_t(), sums[s].get_mpq_t(), denom.get_mpq_t());
      approx[code] = raw[code].get_d();
    });
  }

  std::vector<std::uint32_t> order(codes - 1);
  std::iota(order.begin(), order.end(), 1U);
  // get_d truncates, which is monotone, so distinct approximations order correctly.
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (approx[a] != approx[b]) return approx[a] < approx[b];
    return cmp(raw[a], raw[b]) < 0;
  });

  t.ids_.assign(codes, kNoValue);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::uint32_t code = order[i];
    if (t.values_.empty() || raw[code] != t.values_.back().mpq()) {
      t.values_.emplace_back(std::move(raw[code]));
    }
    t.ids_[code] = static_cast<ValueId>(t.values_.size() - 1);
  }
  t.zero_ = t.find(Rational(0)).value_or(kNoValue);
  t.one_ = t.find(Rational(1)).value_or(kNoValue);
  return t;
}

std::optional<ValueId> ValueTable::find(const Rational& v) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), v);
  if (it == values_.end() || *it != v) return std::nullopt;
  return static_cast<ValueId>(it - values_.begin());
}

}  // namespace coxfine
