// Parallel vs serial grid-coverage kernel on the center-center region.
#include <benchmark/benchmark.h>

#include "filippov/limitset.hpp"
#include "filippov/models.hpp"

using namespace filippov;

namespace {

struct Fixture {
  HybridModel model{linear_center_center()};
  LambdaRegion region = construct_lambda(model, -1.0);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_CoverageParallel(benchmark::State& st) {
  const Fixture& f = fixture();
  const double h = 1.0 / double(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(coverage_grid(f.model, f.region, h));
}

void BM_CoverageSerial(benchmark::State& st) {
  const Fixture& f = fixture();
  const double h = 1.0 / double(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(coverage_grid_serial(f.model, f.region, h));
}

}  // namespace

BENCHMARK(BM_CoverageParallel)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoverageSerial)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
