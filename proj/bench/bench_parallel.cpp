// OpenMP kernels against their serial references.
#include <benchmark/benchmark.h>

#include <vector>

#include "fracbd/paths.hpp"
#include "fracbd/spectral.hpp"

using namespace fracbd;

namespace {

const RateSchedule kRates = RateSchedule::linear(0.5, 1.0);

void BM_EstimatePmfParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto pmf = estimate_pmf(SimMethod::renewal, kRates, FracOrder(0.7), 1, 2.0, n, 1);
    benchmark::DoNotOptimize(pmf.mass.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EstimatePmfSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto pmf = estimate_pmf_serial(SimMethod::renewal, kRates, FracOrder(0.7), 1, 2.0, n, 1);
    benchmark::DoNotOptimize(pmf.mass.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

std::vector<double> time_grid(std::size_t n) {
  std::vector<double> ts(n);
  for (std::size_t k = 0; k < n; ++k) ts[k] = 0.01 * static_cast<double>(k + 1);
  return ts;
}

void BM_SurvivalCurveParallel(benchmark::State& state) {
  const auto dec = decompose(kRates, 200);
  const auto ts = time_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto c = survival_curve(dec, FracOrder(0.6), 1, ts);
    benchmark::DoNotOptimize(c.data());
  }
}

void BM_SurvivalCurveSerial(benchmark::State& state) {
  const auto dec = decompose(kRates, 200);
  const auto ts = time_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    std::vector<double> c;
    c.reserve(ts.size());
    for (double t : ts) c.push_back(survival_prob(dec, FracOrder(0.6), 1, t));
    benchmark::DoNotOptimize(c.data());
  }
}

}  // namespace

BENCHMARK(BM_EstimatePmfParallel)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimatePmfSerial)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SurvivalCurveParallel)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SurvivalCurveSerial)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
