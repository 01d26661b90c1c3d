#include <benchmark/benchmark.h>

#include "siv/pinhole/simulate.hpp"
#include "siv/rng.hpp"
#include "siv/stopping/transport.hpp"

namespace {

void BM_DiamondHistory(benchmark::State& state) {
  const double energy_ev = static_cast<double>(state.range(0)) * 1e3;
  const siv::stopping::SlabStack slab({{0.0, 1e5, siv::stopping::TargetMaterial::diamond()}});
  const siv::stopping::Transporter t(siv::stopping::IonSpecies::silicon(), slab);
  siv::stopping::IonState start;
  start.position_nm = siv::Vec3(0, 0, -1);
  start.energy_ev = energy_ev;
  std::uint64_t i = 0;
  for (auto _ : state) {
    auto rng = siv::rng::substream(1, siv::rng::Stage::kTransport, i++);
    benchmark::DoNotOptimize(t.run(start, rng));
  }
}
BENCHMARK(BM_DiamondHistory)->Arg(400)->Arg(2900)->Unit(benchmark::kMicrosecond);

void BM_PinholeHistories(benchmark::State& state) {
  siv::pinhole::BeamSpec beam;
  beam.energy_mev = static_cast<double>(state.range(0)) / 1000.0;
  siv::pinhole::PinholeGeometry geom;
  siv::pinhole::SimulationOptions opt;
  opt.threads = 1;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(siv::pinhole::simulate_pinhole(beam, geom, 1.0, 1000, seed++, opt));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_PinholeHistories)->Arg(400)->Arg(2900)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
