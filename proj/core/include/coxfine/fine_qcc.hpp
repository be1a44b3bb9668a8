#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coxfine/belief_structure.hpp"
#include "coxfine/cox_checker.hpp"
#include "coxfine/pair_table.hpp"
#include "coxfine/value_table.hpp"

namespace coxfine {

// V|U ⪰ V'|U' iff Bel(V|U) ≥ Bel(V'|U').
class InducedOrder {
 public:
  explicit InducedOrder(const ValueTable& values) : values_(&values) {}

  const ValueTable& values() const { return *values_; }
  // `o.given` must be nonempty.
  ValueId id(const ConditionalObject& o) const { return values_->id_of(o.event, o.given); }
  std::strong_ordering compare(const ConditionalObject& a, const ConditionalObject& b) const {
    return id(a) <=> id(b);
  }
  bool at_least(const ConditionalObject& a, const ConditionalObject& b) const {
    return id(a) >= id(b);
  }

 private:
  const ValueTable* values_;
};

// All conditioning sets over `worlds` that contain `anchor`.
class FilterFamily {
 public:
  FilterFamily(int worlds, EventSet anchor) : worlds_(worlds), anchor_(anchor) {}

  int worlds() const { return worlds_; }
  EventSet anchor() const { return anchor_; }
  bool contains(EventSet u) const { return !anchor_.empty() && anchor_.subset_of(u); }
  std::uint64_t member_count() const;

  // Exhaustive over all member pairs.
  bool intersection_closed() const;
  bool excludes_empty() const;

 private:
  int worlds_;
  EventSet anchor_;
};

struct QccBasicReport {
  std::uint64_t samples = 0;
  bool total = true;
  bool reflexive = true;
  bool transitive = true;
  std::optional<std::array<ConditionalObject, 3>> counterexample;
  bool holds() const { return total && reflexive && transitive; }
};

// Totality, reflexivity and transitivity on `samples` seeded random triples.
QccBasicReport check_qcc1_qcc2(const BeliefStructure& structure, const InducedOrder& order,
                               std::uint64_t samples = 1000, std::uint64_t seed = 1);

// One violated clause: premises hold for (upper, lower) but the conclusion
// fails. `upper` is the V-side chain, `lower` the U-side chain.
struct Qcc7Violation {
  KeyPoint upper, lower;
  ChainWitness upper_chain, lower_chain;
};

struct Qcc7Report {
  std::uint64_t points = 0;
  // (a) x ≥ x', y ≥ y' ⇒ w ≥ w'
  std::optional<Qcc7Violation> a;
  // (b) x ≥ y', y ≥ x' ⇒ w ≥ w'
  std::optional<Qcc7Violation> b;
  // (c) x > x', y ≥ y', y > 0 ⇒ w > w'
  std::optional<Qcc7Violation> c;
  bool holds() const { return !a && !b && !c; }
};

// Value-level check over the chain table; x = Bel(V3|V2∩V1), y = Bel(V2|V1),
// w = Bel(V3∩V2|V1).
Qcc7Report check_qcc7(const ConstrainedPairTable& table);

// Fine's clauses for the constructed F' (A2 argument order, F(x, y) with
// x = P(V'|V∩U), y = P(V|U)). Clause 1 is the table itself and clause 4 is
// associativity.
struct FineClauses {
  bool a2 = true;
  bool commutative = true;  // F'(x,y) = F'(y,x) wherever both are keys
  bool increasing = true;   // strict in each argument for positive arguments
  bool associative = true;
  bool unit_law = true;     // F'(1,y) = y, F'(x,1) = x
  bool zero_law = true;     // F'(0,y) = F'(x,0) = 0
  bool qcc5_vacuous = true;
};

FineClauses fine_clauses(const ConstrainedPairTable& table, const MonotoneReport& monotone,
                         const WitnessSearch& witnesses);

struct ObstructionMember {
  std::string label;
  ConditionalObject object;
  Rational value;  // P(object)
};

struct ObstructionClass {
  Rational expected;  // the Pr value of the class in the 12-world domain
  std::array<ObstructionMember, 2> members;
  bool equal = false;
};

// One forced instance F(x, y) = w from the chain (u1, u2, u3).
struct ObstructionStep {
  ChainWitness chain;
  Rational x, y, w;
};

// The associativity obstruction for any P agreeing with the order, evaluated
// through `transform` (P = transform ∘ Bel).
struct AgreeingObstruction {
  bool order_preserving = true;  // transform strictly increasing on all values
  std::vector<ObstructionClass> classes;
  // F(a, F(b, c)) and F(F(a, b), c) for (a, b, c) = (3/5, 5/11, 11/19) classes.
  std::array<ObstructionStep, 4> steps;
  // Step arguments coincide with the earlier steps' values, so associativity
  // would force steps[2].w = steps[3].w.
  bool linked = false;
  // P(w10|{w10,w11,w12}) < P(w7|{w7,w8,w9})
  Rational low, high;
  bool strict_gap = false;

  bool classes_hold() const;
  bool holds() const { return order_preserving && classes_hold() && linked && strict_gap; }
};

using ValueTransform = std::function<Rational(const Rational&)>;

// The ten objects of the five-class pattern, built from labels w1..w12, with
// `extra` added to every event and conditioning set. Throws kClassMismatch
// when a label is missing.
AgreeingObstruction agreeing_obstruction(const BeliefStructure& structure, const ValueTable& values,
                                         const ValueTransform& transform = {},
                                         EventSet extra = {});

struct RestrictedReport {
  int worlds = 0;
  EventSet anchor;
  std::uint64_t filter_members = 0;
  bool filter_intersection_closed = false;
  bool filter_excludes_empty = false;
  // The five-class pattern with the anchor added to every set.
  AgreeingObstruction anchored_pattern;
  std::uint64_t chains = 0;
  std::size_t keys = 0;
  // Associativity witnesses of F' restricted to conditioning sets in the family.
  WitnessSearch witnesses;
  // (x, y, z, lhs, rhs) per kept witness, as exact values.
  std::vector<std::array<Rational, 5>> witness_values;

  bool holds() const {
    return filter_intersection_closed && filter_excludes_empty && !witnesses.witnesses.empty();
  }
};

// 13-world structure anchored at w0.
RestrictedReport restricted_fine_check(const BeliefStructure& structure, int threads = 1);

}  // namespace coxfine
