#include <benchmark/benchmark.h>

#include "gpbog/many_body.hpp"

namespace {

void BM_HamiltonianApply(benchmark::State& state) {
  const auto p = gpbog::torus_1d_problem(7, static_cast<int>(state.range(0)), 1.0);
  const gpbog::HamiltonianOperator H(p);
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(H.dim())).normalized();
  Eigen::VectorXd y;
  for (auto _ : state) {
    H.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["dim"] = static_cast<double>(H.dim());
}
BENCHMARK(BM_HamiltonianApply)->Arg(4)->Arg(8)->Arg(12);

void BM_ExactDiagonalize(benchmark::State& state) {
  const auto p = gpbog::torus_1d_problem(5, static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gpbog::exact_diagonalize(p).energy);
}
BENCHMARK(BM_ExactDiagonalize)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ExcitationMap(benchmark::State& state) {
  const auto p = gpbog::oscillator_problem(4, 6, 1.0);
  const Eigen::VectorXd psi = gpbog::exact_diagonalize(p).ground;
  for (auto _ : state) benchmark::DoNotOptimize(gpbog::excitation_map(p, psi).data.data());
}
BENCHMARK(BM_ExcitationMap);

}  // namespace
