#include "coxfine/belief_structure.hpp"

#include "coxfine/errors.hpp"

namespace coxfine {

BeliefStructure::BeliefStructure(std::vector<std::string> labels, std::vector<Rational> base,
                                 std::vector<Rational> perturbed, EventSet trigger,
                                 Rational delta)
    : labels_(std::move(labels)),
      base_(std::move(base)),
      perturbed_(std::move(perturbed)),
      trigger_(trigger),
      delta_(std::move(delta)) {
  const int n = static_cast<int>(labels_.size());
  if (n > kMaxWorlds) {
    throw Error(ErrorCode::kTooManyWorlds,
                "domain has " + std::to_string(n) + " worlds; at most 64 are supported");
  }
  if (n == 0) throw Error(ErrorCode::kParse, "domain has no worlds");
  if (static_cast<int>(base_.size()) != n || static_cast<int>(perturbed_.size()) != n) {
    throw Error(ErrorCode::kParse, "weight tables do not cover every world");
  }
  if (!trigger_.subset_of(EventSet::full(n))) {
    throw Error(ErrorCode::kTriggerViolation, "trigger mentions a world outside the domain");
  }
  for (int w = 0; w < n; ++w) {
    if (base_[w].sign() <= 0 || perturbed_[w].sign() <= 0) {
      throw Error(ErrorCode::kNonPositiveWeight,
                  "weight of world '" + labels_[w] + "' must be positive");
    }
    if (base_[w] != perturbed_[w] && !trigger_.contains(w)) {
      throw Error(ErrorCode::kTriggerViolation,
                  "f and f' differ at '" + labels_[w] + "', which is outside the trigger");
    }
  }
  if (weight_sum(WeightTable::kBase, trigger_) != weight_sum(WeightTable::kPerturbed, trigger_)) {
    throw Error(ErrorCode::kTriggerViolation, "f(trigger) != f'(trigger)");
  }
}

BeliefStructure BeliefStructure::probability(std::vector<std::string> labels,
                                             std::vector<Rational> base) {
  auto perturbed = base;
  return BeliefStructure(std::move(labels), std::move(base), std::move(perturbed), EventSet(),
                         Rational(0));
}

BeliefStructure BeliefStructure::unperturbed() const {
  return BeliefStructure(labels_, base_, base_, trigger_, Rational(0));
}

Rational BeliefStructure::weight_sum(WeightTable which, EventSet set) const {
  const auto& table = which == WeightTable::kBase ? base_ : perturbed_;
  Rational sum;
  for (int w = 0; w < size(); ++w) {
    if (set.contains(w)) sum += table[w];
  }
  return sum;
}

Rational BeliefStructure::cond_prob(EventSet event, EventSet given) const {
  if (given.empty()) throw Error(ErrorCode::kEmptyConditioning, "Pr(V|U) with U empty");
  return weight_sum(WeightTable::kBase, event & given) / weight_sum(WeightTable::kBase, given);
}

Rational BeliefStructure::bel(EventSet event, EventSet given) const {
  if (given.empty()) throw Error(ErrorCode::kEmptyConditioning, "Bel(V|U) with U empty");
  const auto which = trigger_.subset_of(given) ? WeightTable::kPerturbed : WeightTable::kBase;
  return weight_sum(which, event & given) / weight_sum(WeightTable::kBase, given);
}

int BeliefStructure::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return -1;
}

std::vector<std::string> default_labels(int n, bool from_zero) {
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back("w" + std::to_string(from_zero ? i : i + 1));
  return out;
}

}  // namespace coxfine
