#include <benchmark/benchmark.h>

#include <memory>

#include "gpbog/homogeneous.hpp"
#include "gpbog/scattering.hpp"

namespace {

void BM_SolveScattering(benchmark::State& state) {
  const auto v = gpbog::RadialPotential::square_well(10.0, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(gpbog::solve_scattering(v, 6.0, static_cast<std::size_t>(state.range(0))).a);
}
BENCHMARK(BM_SolveScattering)->Arg(1001)->Arg(3001);

void BM_LatticeSum(benchmark::State& state) {
  const auto sol = std::make_shared<const gpbog::ScatteringSolution>(
      gpbog::solve_scattering(gpbog::RadialPotential::square_well(2.0, 1.0), 6.0, 3001));
  const auto spec = gpbog::TorusSumSpec::make(sol, static_cast<double>(state.range(0)));
  gpbog::bogoliubov_lattice_sum(spec);  // fill the shell cache outside the timed loop
  for (auto _ : state) benchmark::DoNotOptimize(gpbog::bogoliubov_lattice_sum(spec).sum);
}
BENCHMARK(BM_LatticeSum)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
