#include <benchmark/benchmark.h>

#include "gaussdist/dense.hpp"
#include "gaussdist/fidelity.hpp"
#include "gaussdist/ising.hpp"
#include "gaussdist/random_ensemble.hpp"

namespace gd = gaussdist;

namespace {

// Two random pure states restricted to ell sites: the generic (mixed) branch.
void BM_GaussianFidelity(benchmark::State& state) {
  const int ell = static_cast<int>(state.range(0));
  gd::Rng rng(1);
  const auto a = gd::random_pure_gamma(ell + 1, rng).leading_block(ell);
  const auto b = gd::random_pure_gamma(ell + 1, rng).leading_block(ell);
  for (auto _ : state) benchmark::DoNotOptimize(gd::fidelity(a, b));
  state.SetComplexityN(ell);
}
BENCHMARK(BM_GaussianFidelity)->DenseRange(4, 28, 4)->Complexity();

void BM_IsingEigenstatePair(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const gd::ising::IsingChain chain(L, 1.0);
  const gd::ising::SubsystemCorrelations corr(chain, L - 1);
  const auto a = chain.label(gd::ising::Sector::NS, 0b11);
  const auto b = chain.label(gd::ising::Sector::NS, 0b101);
  for (auto _ : state) benchmark::DoNotOptimize(gd::bures_distance(corr(a), corr(b)));
}
BENCHMARK(BM_IsingEigenstatePair)->Arg(12)->Arg(20)->Arg(29)->Unit(benchmark::kMillisecond);

void BM_DenseFidelity(benchmark::State& state) {
  const int ell = static_cast<int>(state.range(0));
  gd::Rng rng(2);
  const auto a = gd::dense::density_from_gamma(gd::random_pure_gamma(ell + 1, rng).leading_block(ell));
  const auto b = gd::dense::density_from_gamma(gd::random_pure_gamma(ell + 1, rng).leading_block(ell));
  for (auto _ : state) benchmark::DoNotOptimize(gd::dense::fidelity_dense(a, b));
}
BENCHMARK(BM_DenseFidelity)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_EigenstateCorrelation(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const gd::ising::IsingChain chain(L, 1.0);
  const gd::ising::SubsystemCorrelations corr(chain, L / 2);
  const auto s = chain.label(gd::ising::Sector::R, 0b1);
  for (auto _ : state) benchmark::DoNotOptimize(corr(s));
}
BENCHMARK(BM_EigenstateCorrelation)->Arg(8)->Arg(16)->Arg(29);

}  // namespace

BENCHMARK_MAIN();
