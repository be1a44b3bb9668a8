#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coxfine/belief_structure.hpp"
#include "coxfine/pair_table.hpp"
#include "coxfine/value_table.hpp"

namespace coxfine {

// ---------------------------------------------------------------------------
// Complement and disjoint-union decomposability.

struct ComplementReport {
  bool holds = true;
  std::uint64_t checked = 0;
  std::optional<ConditionalObject> counterexample;
};

// Bel(U∖V | U) = 1 − Bel(V | U) for every V ⊆ U, U nonempty.
ComplementReport verify_complement(const BeliefStructure& structure, const ValueTable& values);

struct AdditivityCounterexample {
  EventSet given, first, second;
};

struct AdditivityReport {
  bool holds = true;
  std::uint64_t checked = 0;
  std::optional<AdditivityCounterexample> counterexample;
};

// Bel(V ∪ V' | U) = Bel(V | U) + Bel(V' | U) for disjoint V, V' ⊆ U.
AdditivityReport verify_additivity(const BeliefStructure& structure, const ValueTable& values);

// ---------------------------------------------------------------------------
// Monotonicity of a finite function given as points (x, y) -> w over value ids.

struct KeyPoint {
  ValueId x = kNoValue;
  ValueId y = kNoValue;
  ValueId w = kNoValue;
};

std::vector<KeyPoint> key_points(const ConstrainedPairTable& table);

// Strict and non-strict variants of "source dominated by query implies
// source value below query value".
struct DominanceRule {
  bool strict_x = false;
  bool strict_y = false;
  bool strict_w = false;
  // Only queries with both coordinates above the zero id are constrained.
  bool positive_query = false;
};

struct DominanceViolation {
  std::size_t source = 0;
  std::size_t query = 0;
};

// Sort-and-sweep with a Fenwick max over y ids. `value_count` bounds every id.
// The reported violation is the first query in (x, y) order, paired with the
// dominated source of largest w (smallest index on ties).
std::optional<DominanceViolation> find_dominance_violation(std::span<const KeyPoint> sources,
                                                           std::span<const KeyPoint> queries,
                                                           const DominanceRule& rule,
                                                           std::size_t value_count,
                                                           ValueId zero_id);

// All-pairs version of the same test; used as the oracle on small inputs.
std::optional<DominanceViolation> find_dominance_violation_naive(std::span<const KeyPoint> sources,
                                                                 std::span<const KeyPoint> queries,
                                                                 const DominanceRule& rule,
                                                                 ValueId zero_id);

struct MonotoneReport {
  bool holds() const { return !a && !b && !c; }
  std::uint64_t points = 0;
  // (a) x ≤ x', y ≤ y' ⇒ w ≤ w'
  std::optional<DominanceViolation> a;
  // (b) x < x', y ≤ y', x' > 0, y' > 0 ⇒ w < w'
  std::optional<DominanceViolation> b;
  // (c) x ≤ x', y < y', x' > 0, y' > 0 ⇒ w < w'
  std::optional<DominanceViolation> c;
};

MonotoneReport check_monotone(std::span<const KeyPoint> points, std::size_t value_count,
                              ValueId zero_id);
MonotoneReport check_monotone_naive(std::span<const KeyPoint> points, ValueId zero_id);
MonotoneReport check_monotone(const ConstrainedPairTable& table);

// ---------------------------------------------------------------------------
// Associativity.

struct AssociativityWitness {
  ValueId x, y, z;
  ValueId yz;   // F'(y, z)
  ValueId lhs;  // F'(x, F'(y, z))
  ValueId xy;   // F'(x, y)
  ValueId rhs;  // F'(F'(x, y), z)

  friend auto operator<=>(const AssociativityWitness&, const AssociativityWitness&) = default;
};

struct WitnessSearch {
  // Sorted by (x, y, z); at most `limit` entries are kept.
  std::vector<AssociativityWitness> witnesses;
  std::uint64_t total = 0;
  std::uint64_t combinations = 0;
  // When F'(1,t) = F'(t,1) = t and F'(0,t) = F'(t,0) = 0 hold on every key,
  // middle coordinates 0 and 1 cannot produce a witness and are skipped.
  bool boundary_laws = false;
};

WitnessSearch find_associativity_witnesses(const ConstrainedPairTable& table,
                                           std::size_t limit = 1000);

// ---------------------------------------------------------------------------
// Constrained triples: chains u1 ⊇ u2 ⊇ u3 ⊇ u4 with u3 nonempty.

struct Chain4 {
  EventSet u1, u2, u3, u4;

  friend auto operator<=>(const Chain4&, const Chain4&) = default;
};

struct TripleQuery {
  std::array<Rational, 3> triple;
  bool constrained = false;
  std::optional<Chain4> chain;  // smallest (u1, u2, u3, u4)
};

struct ConstrainedTripleReport {
  bool associative = true;
  std::uint64_t chains = 0;
  std::uint64_t missing_keys = 0;
  std::optional<Chain4> counterexample;
  std::vector<TripleQuery> queries;
};

// Exhaustive 5^n sweep. Both association orders are evaluated through table
// lookups; `queries` are answered from the same sweep.
ConstrainedTripleReport check_constrained_triples(
    const BeliefStructure& structure, const ConstrainedPairTable& table,
    std::span<const std::array<Rational, 3>> queries = {}, int threads = 1);

struct ConstrainedTriple {
  ValueId x = kNoValue, y = kNoValue, z = kNoValue;
  Chain4 chain;  // smallest (u1, u2, u3, u4)
};

// Distinct (Bel(u4|u3), Bel(u3|u2), Bel(u2|u1)) over all chains, sorted by
// (x, y, z).
std::vector<ConstrainedTriple> enumerate_constrained_triples(const ValueTable& values);

// Pruned search for a single triple.
std::optional<Chain4> find_constrained_chain(const ValueTable& values, const Rational& x,
                                             const Rational& y, const Rational& z);

// ---------------------------------------------------------------------------
// Commutative closure and total extension.

struct ClosureReport {
  // F'' on D ∪ swap(D), sorted by (x, y).
  std::vector<KeyPoint> points;
  // Off-diagonal keys whose swap is also a key.
  std::uint64_t symmetric_pairs = 0;
  // Keys (x, x) with x ≠ 1.
  std::uint64_t diagonal_keys = 0;
  // (x, y) and (y, x) both keys with x ≠ y and 1 ∉ {x, y}.
  std::optional<std::pair<ValueId, ValueId>> symmetric_violation;
  bool one_law = true;  // F'(x, 1) = F'(1, x) = x wherever defined

  std::uint64_t trigger_free_keys = 0;
  std::uint64_t trigger_keys = 0;
  std::uint64_t keys_with_both = 0;
  std::uint64_t stored_witness_trigger_free = 0;
  // A key with some chain avoiding the trigger where F'(x, y) ≠ x·y.
  std::optional<PairEntry> product_violation;

  MonotoneReport monotone;

  bool claim_symmetric() const { return !symmetric_violation && one_law; }
  bool claim_product() const { return !product_violation; }
};

// Throws kClosureConflict if (x, y) and (y, x) carry different values.
ClosureReport commutative_closure(const ConstrainedPairTable& table);

// A continuous, symmetric, monotone function on [0,1]^2 built from F''.
// Nodes are the coordinate grid C × C with C = every value in the table;
// node values are 0 on the axes and otherwise
//   G(i, j) = max(0, max_{q ≤ (i,j)} F''(q) − ε(i_q + j_q)) + ε(i + j).
// Between nodes G is bilinear. With ε = 0 (weak mode) G is the monotone
// envelope of F'': it agrees with F'' wherever F'' is monotone but is only
// nondecreasing. With ε = β / (4m) (strict mode; β the least gap between
// values, m the largest id) G is strictly increasing on (0,1]^2 and agrees
// with F'' exactly when F'' is itself strictly increasing.
class TotalCombination {
 public:
  TotalCombination(const ValueTable& values, std::vector<KeyPoint> closure, bool strict);

  const ValueTable& values() const { return *values_; }
  const Rational& epsilon() const { return epsilon_; }
  bool strict() const { return strict_; }
  std::span<const KeyPoint> data() const { return data_; }

  // Node values for a batch of (i, j) id pairs.
  std::vector<Rational> nodes(std::span<const std::pair<ValueId, ValueId>> at) const;
  // First data point whose node value differs from F'' there.
  std::optional<std::pair<ValueId, ValueId>> first_disagreement() const;
  // Bilinear evaluation at arbitrary points of [0,1]^2.
  std::vector<Rational> evaluate(std::span<const std::pair<Rational, Rational>> at) const;

 private:
  // Largest (w, −s) over data dominated by each node, as a data index.
  std::vector<std::size_t> dominating_data(std::span<const std::pair<ValueId, ValueId>> at) const;

  const ValueTable* values_;
  std::vector<KeyPoint> data_;
  Rational epsilon_;
  bool strict_;
};

struct ExtensionReport {
  bool strict_mode = false;
  std::size_t grid_size = 0;
  std::uint64_t data_points = 0;
  std::uint64_t evaluated_points = 0;
  bool agrees_with_data = true;
  bool commutative = true;
  bool monotone_rows = true;
  bool monotone_columns = true;
  bool strict_interior = true;
  bool boundary_one = true;
  bool boundary_zero = true;
  bool interpolation_monotone = true;
  std::optional<std::pair<ValueId, ValueId>> first_failure;
  std::optional<std::pair<ValueId, ValueId>> first_strict_failure;

  // Everything except strict increase on (0,1]^2.
  bool holds_weak() const {
    return agrees_with_data && commutative && monotone_rows && monotone_columns && boundary_one &&
           boundary_zero && interpolation_monotone;
  }
  bool holds() const { return holds_weak() && strict_interior; }
};

// Checks the extension on every data point, on a resolution × resolution
// sub-grid of coordinates (always containing 0 and 1), and at cell midpoints
// along that sub-grid. Strict increase is always measured, in either mode.
ExtensionReport extend_total(const TotalCombination& total, std::size_t resolution);

}  // namespace coxfine
