#include <benchmark/benchmark.h>

#include "siv/stopping/scattering.hpp"
#include "siv/stopping/stopping.hpp"

namespace {

void BM_ScatteringQuadrature(benchmark::State& state) {
  double b = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(siv::stopping::scattering_angle_quadrature(1.0, b));
    b = b < 5.0 ? b * 1.01 : 0.1;
  }
}
BENCHMARK(BM_ScatteringQuadrature);

void BM_ScatteringTable(benchmark::State& state) {
  double b = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(siv::stopping::scattering_angle_cm(1.0, b));
    b = b < 5.0 ? b * 1.01 : 0.1;
  }
}
BENCHMARK(BM_ScatteringTable);

void BM_CsdaRange(benchmark::State& state) {
  const auto si = siv::stopping::IonSpecies::silicon();
  const auto c = siv::stopping::TargetMaterial::diamond();
  for (auto _ : state) benchmark::DoNotOptimize(siv::stopping::csda_range(si, c, 2.9e6));
}
BENCHMARK(BM_CsdaRange)->Unit(benchmark::kMicrosecond);

}  // namespace
