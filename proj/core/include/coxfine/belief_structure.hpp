#pragma once

#include <string>
#include <vector>

#include "coxfine/event_set.hpp"
#include "coxfine/rational.hpp"

namespace coxfine {

enum class WeightTable { kBase, kPerturbed };

// V|U, a conditional object. `given` must be nonempty wherever it is evaluated.
struct ConditionalObject {
  EventSet event;
  EventSet given;

  friend bool operator==(const ConditionalObject&, const ConditionalObject&) = default;
};

// A finite domain with base weights f, perturbed weights f', and the trigger
// set W'. Bel(V|U) = f'(V∩U)/f(U) when W' ⊆ U, and f(V∩U)/f(U) otherwise.
//
// Immutable after construction; the constructor enforces
//   * f(w) > 0 and f'(w) > 0,
//   * f(w) != f'(w) only for w in the trigger,
//   * f(trigger) == f'(trigger).
class BeliefStructure {
 public:
  BeliefStructure(std::vector<std::string> labels, std::vector<Rational> base,
                  std::vector<Rational> perturbed, EventSet trigger, Rational delta);

  // Probability structure: f' = f, empty trigger.
  static BeliefStructure probability(std::vector<std::string> labels, std::vector<Rational> base);

  int size() const { return static_cast<int>(labels_.size()); }
  EventSet worlds() const { return EventSet::full(size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Rational>& base() const { return base_; }
  const std::vector<Rational>& perturbed() const { return perturbed_; }
  EventSet trigger() const { return trigger_; }
  const Rational& delta() const { return delta_; }
  bool is_probability() const { return base_ == perturbed_; }

  // Same worlds and base weights, f' = f.
  BeliefStructure unperturbed() const;

  Rational weight_sum(WeightTable which, EventSet set) const;
  Rational cond_prob(EventSet event, EventSet given) const;
  Rational bel(EventSet event, EventSet given) const;
  Rational bel(const ConditionalObject& o) const { return bel(o.event, o.given); }

  int index_of(const std::string& label) const;  // -1 when absent

  friend bool operator==(const BeliefStructure&, const BeliefStructure&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<Rational> base_;
  std::vector<Rational> perturbed_;
  EventSet trigger_;
  Rational delta_;
};

// Default labels w1..wn (or w0..w{n-1} when `from_zero`).
std::vector<std::string> default_labels(int n, bool from_zero = false);

}  // namespace coxfine
