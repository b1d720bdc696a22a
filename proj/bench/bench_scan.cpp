#include <benchmark/benchmark.h>

#include <omp.h>

#include "rydberg/spectra.hpp"

using namespace rydberg;

namespace {

struct Fig3Setup {
  ScanModel model;
  VelocityGrid grid = make_grid(-10.0, 10.0, 0.5, GridScheme::kUniform);
  std::vector<double> axis;

  explicit Fig3Setup(std::size_t points) : axis(linear_axis(-3.0, 3.0, points)) {
    DriveConfig d;
    d.omega21 = 0.02;
    d.omega32 = 0.2;
    d.omega43 = 0.8;
    d.omega54 = 0.8;
    model = five_level_model(LevelScheme(780.24, 480.0, 26), d, DecayModel::five_level(1.0, 0.01, 0.00635),
                             Convention::kLiteral);
  }
};

void BM_ScanSerial(benchmark::State& state) {
  Fig3Setup s(static_cast<std::size_t>(state.range(0)));
  ScanOptions o;
  o.parallel = false;
  for (auto _ : state) {
    auto r = scan_grid_serial(s.model, s.grid, s.axis, Observable::kImSigma21, o);
    benchmark::DoNotOptimize(r.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.grid.size() * s.axis.size()));
}

void BM_ScanParallel(benchmark::State& state) {
  Fig3Setup s(static_cast<std::size_t>(state.range(0)));
  const int saved = omp_get_max_threads();
  omp_set_num_threads(static_cast<int>(state.range(1)));
  ScanOptions o;
  for (auto _ : state) {
    auto r = scan_grid_parallel(s.model, s.grid, s.axis, Observable::kImSigma21, o);
    benchmark::DoNotOptimize(r.values.data());
  }
  omp_set_num_threads(saved);
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.grid.size() * s.axis.size()));
}

}  // namespace

BENCHMARK(BM_ScanSerial)->Arg(61)->Arg(601)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanParallel)
    ->ArgsProduct({{61, 601}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
