#include <benchmark/benchmark.h>

#include "sobolab/bootstrap.hpp"
#include "sobolab/constants.hpp"
#include "sobolab/ensemble.hpp"
#include "sobolab/manifold.hpp"
#include "sobolab/semigroup_riesz.hpp"
#include "sobolab/spectral.hpp"

#include <string>

using namespace sobolab;

namespace {

DiscreteManifold torus3(int res) {
  return build(parse_model_spec("torus:n=3,res=" + std::to_string(res) + ",L=1"));
}

Ensemble members(const DiscreteManifold& m, int size) {
  EnsembleSpec spec;
  spec.seed = 1;
  spec.size = size;
  return generate_ensemble(m, spec);
}

void BM_Build(benchmark::State& state) {
  const auto spec = parse_model_spec("sphere:r=1,subdiv=" + std::to_string(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build(spec));
}
BENCHMARK(BM_Build)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  const auto m = torus3(static_cast<int>(state.range(0)));
  const auto psi = PotentialField::constant(m, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(m, psi));
  state.counters["nodes"] = static_cast<double>(m.num_nodes());
}
BENCHMARK(BM_Decompose)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ApplyHeat(benchmark::State& state) {
  const auto m = torus3(10);
  const auto d = decompose(m, PotentialField::constant(m, 1.0));
  const auto e = members(m, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(apply_function(d, heat_function(0.1), e.members));
}
BENCHMARK(BM_ApplyHeat)->Arg(1)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_EstimateSobolev(benchmark::State& state) {
  const auto m = torus3(8);
  const auto e = members(m, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_sobolev_AB(m, 2.0, e));
}
BENCHMARK(BM_EstimateSobolev)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_MappingNorm(benchmark::State& state) {
  const auto m = torus3(8);
  const auto d = decompose(m, PotentialField::constant(m, 1.0));
  const auto e = members(m, 100);
  const auto op = parse_operator("H^{-1/2}");
  for (auto _ : state) benchmark::DoNotOptimize(mapping_norm(m, d, op, 1.5, 3.0, e));
}
BENCHMARK(BM_MappingNorm)->Unit(benchmark::kMillisecond);

void BM_ChainConstants(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(chain_constants(3.0, 2.0, 1.0, 1.0, 2.999));
}
BENCHMARK(BM_ChainConstants);

}  // namespace

BENCHMARK_MAIN();
