#include <benchmark/benchmark.h>

#include "curvlab/frame_search.hpp"
#include "curvlab/model_spaces.hpp"
#include "curvlab/rng.hpp"

namespace {

using namespace curvlab;

void BM_Project(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SplitMix64 rng(7);
  std::vector<double> raw(static_cast<std::size_t>(n) * n * n * n);
  for (auto& x : raw) x = rng.uniform(-1.0, 1.0);
  for (auto _ : state) {
    auto r = project_to_curvature_space(raw, n);
    benchmark::DoNotOptimize(r.components().data());
  }
}
BENCHMARK(BM_Project)->Arg(4)->Arg(6)->Arg(8)->Arg(12);

void BM_FourFrameValue(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto r = random_curvature_tensor(n, 11, 1.0);
  auto f = Frame::random(n, 4, 12);
  std::vector<double> rows(f.rows().begin(), f.rows().end());
  EvalWorkspace ws;
  const auto fun = FrameFunctional::condition(0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(eval_rows(r, fun, rows, 0.0, ws));
}
BENCHMARK(BM_FourFrameValue)->Arg(4)->Arg(6)->Arg(8)->Arg(12);

void BM_FourFrameGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto r = random_curvature_tensor(n, 13, 1.0);
  auto f = Frame::random(n, 4, 14);
  std::vector<double> rows(f.rows().begin(), f.rows().end());
  std::vector<double> grad(rows.size());
  double gtheta = 0.0;
  EvalWorkspace ws;
  const auto fun = FrameFunctional::isotropic();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        eval_rows_gradient(r, fun, rows, 0.0, grad, gtheta, ws));
}
BENCHMARK(BM_FourFrameGradient)->Arg(4)->Arg(6)->Arg(8)->Arg(12);

void BM_MinimizeCondition(benchmark::State& state) {
  auto r = fubini_study(2).tensor;
  SearchConfig cfg;
  cfg.restarts = static_cast<int>(state.range(0));
  cfg.seed = 3;
  for (auto _ : state) {
    auto res = minimize_over_four_frames(r, FrameFunctional::condition(0.5), cfg);
    benchmark::DoNotOptimize(res.value);
  }
}
BENCHMARK(BM_MinimizeCondition)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BruteForceOracle(benchmark::State& state) {
  auto r = random_curvature_tensor(6, 15, 1.0);
  const auto fun = FrameFunctional::condition(0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        brute_force_extremum(r, fun, state.range(0), 5, true));
}
BENCHMARK(BM_BruteForceOracle)->Arg(10000)->Arg(100000)
    ->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
