#include <benchmark/benchmark.h>

#include "fibcert/constants.hpp"
#include "fibcert/fibkit.hpp"
#include "fibcert/matveev.hpp"
#include "fibcert/reduction.hpp"
#include "fibcert/search.hpp"

using namespace fibcert;

static void BM_Fib(benchmark::State& state) {
  const auto n = static_cast<FibIndex>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fib(n));
}
BENCHMARK(BM_Fib)->Arg(100)->Arg(869)->Arg(61622);

static void BM_BallLog(benchmark::State& state) {
  const Precision p{static_cast<std::uint32_t>(state.range(0)), 1600};
  const BallReal x = BallReal::exact(fib(154), p);
  for (auto _ : state) benchmark::DoNotOptimize(log(x));
}
BENCHMARK(BM_BallLog)->Arg(50)->Arg(200)->Arg(800);

static void BM_AnalyticStage(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(analytic_stage());
}
BENCHMARK(BM_AnalyticStage)->Unit(benchmark::kMillisecond);

static void BM_ReduceOneL154(benchmark::State& state) {
  const ReductionInstance inst = fibonacci_instance(154, BigInt("131000000000167"));
  for (auto _ : state) benchmark::DoNotOptimize(reduce_one(inst, 154));
}
BENCHMARK(BM_ReduceOneL154)->Unit(benchmark::kMillisecond);

static void BM_SearchFinalBox(benchmark::State& state) {
  const SearchBox box{{9, 869}, {3, 18}, {3, 24}, {2, 27}};
  SearchOptions opts;
  opts.jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(search_box(box, opts));
}
BENCHMARK(BM_SearchFinalBox)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
