#include <benchmark/benchmark.h>

#include "coxfine/cox_checker.hpp"
#include "coxfine/functional_eq.hpp"
#include "coxfine/harness.hpp"
#include "coxfine/pair_table.hpp"
#include "coxfine/rescaling.hpp"
#include "coxfine/value_table.hpp"

using namespace coxfine;

namespace {

BeliefStructure structure(int worlds, bool perturb) {
  SearchConfig config;
  config.worlds = worlds;
  config.perturb = perturb;
  return generate_structure(config, 0);
}

void BM_ValueTable(benchmark::State& state) {
  const auto s = structure(static_cast<int>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(ValueTable::build(s).size());
}
BENCHMARK(BM_ValueTable)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_PairTable(benchmark::State& state) {
  const auto s = structure(static_cast<int>(state.range(0)), false);
  const auto values = ValueTable::build(s);
  for (auto _ : state) benchmark::DoNotOptimize(ConstrainedPairTable::build(s, values, {}).size());
}
BENCHMARK(BM_PairTable)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_WitnessSearch(benchmark::State& state) {
  const auto s = structure(static_cast<int>(state.range(0)), false);
  const auto values = ValueTable::build(s);
  const auto table = ConstrainedPairTable::build(s, values, {});
  for (auto _ : state) benchmark::DoNotOptimize(find_associativity_witnesses(table).total);
}
BENCHMARK(BM_WitnessSearch)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_Monotone(benchmark::State& state) {
  const auto s = structure(static_cast<int>(state.range(0)), false);
  const auto values = ValueTable::build(s);
  const auto table = ConstrainedPairTable::build(s, values, {});
  for (auto _ : state) benchmark::DoNotOptimize(check_monotone(table).a.has_value());
}
BENCHMARK(BM_Monotone)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_RescalingSolve(benchmark::State& state) {
  const auto s = structure(static_cast<int>(state.range(0)), true);
  const auto values = ValueTable::build(s);
  const auto sys = build_system(s, values);
  for (auto _ : state) benchmark::DoNotOptimize(solve(sys).rank);
}
BENCHMARK(BM_RescalingSolve)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_FunctionalEquation(benchmark::State& state) {
  const auto s = structure(static_cast<int>(state.range(0)), false);
  const auto values = ValueTable::build(s);
  const auto table = ConstrainedPairTable::build(s, values, {});
  for (auto _ : state) benchmark::DoNotOptimize(verify_eq7(s, table, 1).holds);
}
BENCHMARK(BM_FunctionalEquation)->DenseRange(6, 8, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
