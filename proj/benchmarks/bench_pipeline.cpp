#include <benchmark/benchmark.h>

#include <random>

#include "pherm/frw.hpp"
#include "pherm/jordan.hpp"
#include "pherm/pseudoherm.hpp"
#include "pherm/two_by_two.hpp"
#include "support/instances.hpp"

namespace {

void BM_JordanChains(benchmark::State& state) {
  // 4-blocks at distinct integer eigenvalues
  std::mt19937_64 rng(static_cast<std::uint64_t>(state.range(0)));
  std::vector<pherm::testing::BlockSpec> blocks;
  for (int k = 0; k < state.range(0) / 4; ++k) blocks.push_back({static_cast<double>(k), 4});
  const auto inst = pherm::testing::similar_instance(blocks, 50.0, rng);
  const pherm::Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(pherm::jordan_chains(inst.h, tol));
}
BENCHMARK(BM_JordanChains)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_CheckPseudoHermiticity(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const auto inst = pherm::testing::random_pseudo_hermitian_instance(rng);
  const pherm::Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(pherm::check_pseudo_hermiticity(inst.h, tol));
}
BENCHMARK(BM_CheckPseudoHermiticity);

void BM_AnalyzeFrw(benchmark::State& state) {
  const pherm::FrwParams p{1.0, 3.0, static_cast<int>(state.range(0))};
  const pherm::Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(pherm::analyze_frw(p, tol));
}
BENCHMARK(BM_AnalyzeFrw)->Arg(3)->Arg(10)->Arg(30);

void BM_Classify2(benchmark::State& state) {
  const pherm::Traceless2 m{{0.3, 0.1}, {1.0, 0.0}, {0.2, -0.4}};
  const pherm::Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(pherm::classify(m, tol));
}
BENCHMARK(BM_Classify2);

}  // namespace

BENCHMARK_MAIN();
