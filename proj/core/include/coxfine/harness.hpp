#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coxfine/belief_structure.hpp"

namespace coxfine {

using Json = nlohmann::ordered_json;

struct PipelineFlags {
  int threads = 1;
  // The 5^n constrained-triple and R-constrained sweeps.
  bool exhaustive = false;
  bool qcc = false;
  bool appendix = false;
  // Pair table, witness search and rescaling, plus any requested suites.
  bool fast = false;
  // Per-check seconds; reports are then no longer byte-identical.
  bool timings = false;
  std::size_t witness_limit = 16;
  // Grid resolution for the total extension checks; 0 skips them.
  std::size_t extension_resolution = 48;
};

enum class CheckStatus { kPass, kFail, kSkipped, kInfo };

std::string to_string(CheckStatus status);

struct CheckRecord {
  std::string name;
  CheckStatus status = CheckStatus::kInfo;
  double seconds = 0;
  Json payload = Json::object();
};

enum class Verdict {
  kCounterexampleConfirmed,  // axioms hold, F' well defined and monotone, witness, Infeasible
  kProbabilityConsistent,    // no witness and a rescaling exists
  kViolationFound,           // witness or Infeasible without the full axiom set
  kInconclusive,
};

std::string to_string(Verdict verdict);

struct PipelineReport {
  std::string digest;  // FNV-1a of the canonical domain serialisation
  int worlds = 0;
  Rational delta;
  std::optional<Rational> min_gap;
  std::vector<CheckRecord> checks;
  Verdict verdict = Verdict::kInconclusive;
  // Shorthand for the fast search filter.
  bool has_witness = false;
  bool infeasible = false;

  const CheckRecord* find(const std::string& name) const;
  bool violates() const { return has_witness || infeasible; }
};

// Stages in order: invariants, delta, complement, additivity, pair table,
// monotonicity, closure, extension, constrained triples, witness search,
// functional equation, rescaling, then the optional suites. Only structural
// errors propagate; failing checks are recorded.
PipelineReport run_pipeline(const BeliefStructure& structure, const PipelineFlags& flags);

Json to_json(const PipelineReport& report, const BeliefStructure& structure);
std::string render_text(const Json& report);

// Exact rationals as strings, event sets as label lists.
Json labels_json(const BeliefStructure& structure, EventSet set);

struct SearchConfig {
  int worlds = 6;
  std::uint64_t trials = 10;
  std::uint64_t seed = 1;
  // Block magnitudes, cycled over blocks of three worlds.
  std::vector<Rational> tiers{Rational(1), Rational(10000), Rational(100000000)};
  // Base weights used verbatim instead of random multiples of the tiers.
  std::vector<Rational> pinned_weights;
  bool perturb = true;
  int threads = 1;
};

// The trial's structure: blocks of three worlds (the last takes the
// remainder), weights tier · k with k in [1, 9], and, when perturbing, the
// least Pr gap times the last block's tier moved from its first world to its
// second, with the last block as trigger.
BeliefStructure generate_structure(const SearchConfig& config, std::uint64_t trial);

struct SearchFinding {
  std::uint64_t trial = 0;
  BeliefStructure structure;
  PipelineReport report;
};

struct SearchResult {
  std::uint64_t trials = 0;
  std::uint64_t conflicts = 0;  // F' not well defined
  std::vector<SearchFinding> findings;  // ascending trial
};

SearchResult search(const SearchConfig& config);

struct ShrinkResult {
  BeliefStructure structure;
  std::vector<std::string> steps;
  // Full (non-exhaustive) pipeline on the output.
  PipelineReport verified;
};

// Structures one removal or one merge of two non-trigger worlds away.
std::vector<std::pair<std::string, BeliefStructure>> one_step_neighbours(
    const BeliefStructure& structure);

// Greedy removals then merges while the fast pipeline still violates.
ShrinkResult shrink(const BeliefStructure& structure, int threads = 1);

}  // namespace coxfine
