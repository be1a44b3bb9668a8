#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "coxfine/belief_structure.hpp"
#include "coxfine/value_table.hpp"

namespace coxfine {

struct InjectivityReport {
  bool holds = true;
  std::uint64_t checked = 0;
  // (V, U) with V ⊊ U and Bel(V) ≥ Bel(U).
  std::optional<std::pair<EventSet, EventSet>> counterexample;
};

// V ⊊ U ⇒ Bel(V | W) < Bel(U | W).
InjectivityReport check_unconditional_injectivity(const BeliefStructure& structure,
                                                  const ValueTable& values);

// L_a + L_b − L_c = 0 with L_v = −log g(v), from
// g(Bel(V|U)) · g(Bel(U)) = g(Bel(V∩U)), a = Bel(V|U), b = Bel(U), c = Bel(V∩U).
struct RescaleEquation {
  ValueId a = kNoValue, b = kNoValue, c = kNoValue;
  ConditionalObject witness;  // first (V, U) producing the value triple
};

struct LogLinearSystem {
  const ValueTable* values = nullptr;
  std::vector<RescaleEquation> equations;
  // Instances of the multiplicative law with all three values nonzero,
  // before deduplication.
  std::uint64_t instances = 0;
  // Instances where some value is zero, discharged by g(0) = 0.
  std::uint64_t zero_instances = 0;
  // Per value id: appears as some Bel(U), U nonempty.
  std::vector<bool> unconditional;
  // Nonzero value ids that occur in some equation, ascending.
  std::vector<ValueId> variables;
};

LogLinearSystem build_system(const BeliefStructure& structure, const ValueTable& values);

struct CertificateTerm {
  std::size_t equation = 0;
  Rational coefficient;
};

// Σ coefficient · (L_a + L_b − L_c) over the cited equations equals L_u − L_v
// identically, so g(u) = g(v) for every solution.
struct Certificate {
  ValueId u = kNoValue, v = kNoValue;
  std::vector<CertificateTerm> terms;
};

bool replay(const LogLinearSystem& system, const Certificate& certificate);

struct ZeroBranch {
  // g(0) ≠ 0 forces g(Bel(U)) = 1 for every nonempty U; refuted when two
  // distinct unconditional values exist.
  bool refuted = false;
  std::optional<std::pair<ValueId, ValueId>> collision;
};

enum class Feasibility { kFeasible, kInfeasible };

struct FeasibilityVerdict {
  Feasibility status = Feasibility::kFeasible;
  std::size_t variables = 0;
  std::size_t equations = 0;
  std::size_t unconditional_variables = 0;
  std::size_t constraint_rows = 0;
  std::size_t rank = 0;
  ZeroBranch zero_branch;

  // Infeasible: number of classes of distinct values sharing a canonical
  // form, and a certificate for the smallest colliding pair.
  std::size_t collision_classes = 0;
  std::optional<Certificate> certificate;

  // Feasible: g on every variable, with g(0) = 0 and g(1) = 1.
  bool identity = false;
  // g(v) = (1/2)^{exponent}; exponents are integers. Empty when identity.
  std::vector<std::pair<ValueId, Rational>> exponents;
  bool in_unit_interval = true;
};

// Exact elimination over the unconditional variables; every other variable
// is pinned by its first equation.
class RescalingSolver {
 public:
  explicit RescalingSolver(const LogLinearSystem& system);

  const LogLinearSystem& system() const { return *system_; }
  std::size_t rank() const { return pivots_.size(); }
  std::size_t constraint_rows() const { return rows_; }

  // Canonical linear form of L_v over free unconditional variables, as
  // (variable value id, coefficient) sorted by id.
  using Form = std::vector<std::pair<ValueId, Rational>>;
  Form canonical(ValueId v) const;

  // A certificate forcing g(u) = g(v), when the system implies it.
  std::optional<Certificate> certificate_for(ValueId u, ValueId v) const;

  // Classes of two or more distinct variables with identical canonical
  // forms, each sorted, ordered by their smallest member.
  std::vector<std::vector<ValueId>> collision_classes() const;

  FeasibilityVerdict solve() const;

 private:
  using Combination = std::vector<std::pair<std::size_t, Rational>>;
  struct Pivot {
    std::uint32_t column;
    std::vector<std::pair<std::uint32_t, Rational>> row;  // includes the pivot, coefficient 1
    Combination provenance;
  };

  Combination provenance(ValueId v) const;

  const LogLinearSystem* system_;
  std::vector<std::uint32_t> column_of_;  // value id -> Q column or npos
  std::vector<ValueId> value_of_column_;
  std::vector<std::uint32_t> pivot_of_column_;
  std::vector<Pivot> pivots_;
  std::vector<std::size_t> defining_;  // value id -> defining equation for non-Q variables
  std::size_t rows_ = 0;
};

FeasibilityVerdict solve(const LogLinearSystem& system);

// Small-instance oracle: dense elimination over every variable; returns all
// pairs u < v with L_u − L_v in the row space.
std::vector<std::pair<ValueId, ValueId>> forced_pairs_dense(const LogLinearSystem& system);

// Same pairs from the canonical-form classes.
std::vector<std::pair<ValueId, ValueId>> forced_pairs(const RescalingSolver& solver);

}  // namespace coxfine
