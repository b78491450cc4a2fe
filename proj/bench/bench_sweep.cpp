// Serial vs OpenMP batch drivers.
//
//   bench_sweep --benchmark_counters_tabular=true
//
// The runs are shortened to 5 s so one iteration stays well under a second.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

#include "enclose/sweep.hpp"

using namespace enclose;

namespace {

std::vector<ScenarioConfig> make_grid(int copies) {
  std::vector<ScenarioConfig> out;
  for (int k = 0; k < copies; ++k) {
    for (int n = 1; n <= 4; ++n) {
      auto c = builtin_case(n);
      c.horizon = 5.0;
      c.gains.alpha1 = 8.0 + k;
      out.push_back(c);
    }
  }
  return out;
}

void BM_BatchSerial(benchmark::State& st) {
  const auto grid = make_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(run_batch_serial(grid));
  st.counters["runs"] = static_cast<double>(grid.size());
}

void BM_BatchParallel(benchmark::State& st) {
  const auto grid = make_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(run_batch(grid));
  st.counters["runs"] = static_cast<double>(grid.size());
  st.counters["threads"] = omp_get_max_threads();
}

void BM_RankScanSerial(benchmark::State& st) {
  RankScanSettings s;
  s.samples = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(rank_scan_serial(s));
}

void BM_RankScanParallel(benchmark::State& st) {
  RankScanSettings s;
  s.samples = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(rank_scan(s));
  st.counters["threads"] = omp_get_max_threads();
}

}  // namespace

BENCHMARK(BM_BatchSerial)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchParallel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankScanSerial)->Arg(3600)->Arg(36000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankScanParallel)->Arg(3600)->Arg(36000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
