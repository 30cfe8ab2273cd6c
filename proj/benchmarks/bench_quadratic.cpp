#include <benchmark/benchmark.h>

#include "gpbog/quadratic.hpp"

namespace {

void BM_GroundEnergyExact(benchmark::State& state) {
  const auto qh = gpbog::random_instance(7, static_cast<int>(state.range(0)), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(gpbog::ground_energy_exact(qh));
}
BENCHMARK(BM_GroundEnergyExact)->Arg(8)->Arg(64)->Arg(256);

void BM_FockExactDiag(benchmark::State& state) {
  const auto qh = gpbog::random_instance(7, 3, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gpbog::fock_exact_diag(qh, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_FockExactDiag)->Arg(8)->Arg(16);

void BM_VerifySweep(benchmark::State& state) {
  gpbog::SweepOptions opt;
  opt.n_instances = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gpbog::verify_theorem(opt).fitted_c_eps);
}
BENCHMARK(BM_VerifySweep)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
