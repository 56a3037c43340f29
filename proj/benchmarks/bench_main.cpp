#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "homsim/config.hpp"
#include "homsim/correlation.hpp"
#include "homsim/fftcorr.hpp"
#include "homsim/fit.hpp"
#include "homsim/sampler.hpp"
#include "homsim/simulate.hpp"

namespace {

homsim::StackPair make_stacks(int frames) {
  homsim::ExperimentConfig cfg = homsim::config_from_json_text("");
  cfg.frames = frames;
  cfg.pairs_per_frame_mean = 500.0;
  return homsim::simulate_stack_pair(cfg, cfg.setting, frames,
                                     homsim::StreamTag::Adhoc, 0, 1);
}

void BM_SampleAndRoute(benchmark::State& state) {
  const homsim::ExperimentConfig cfg = homsim::config_from_json_text("");
  homsim::Rng rng(42);
  for (auto _ : state) {
    const homsim::BiphotonSample s = homsim::sample_pair(rng, cfg.joint, cfg.pump);
    benchmark::DoNotOptimize(
        homsim::route_pair(rng, s, cfg.setting, cfg.beamsplitter, cfg.overlap));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleAndRoute);

void BM_InterImageCorrelation(benchmark::State& state) {
  const homsim::StackPair stacks = make_stacks(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        homsim::inter_image_correlation(stacks.camera1, stacks.camera2));
}
BENCHMARK(BM_InterImageCorrelation)->Arg(16)->Arg(64);

void BM_WindowSums(benchmark::State& state) {
  const homsim::StackPair stacks = make_stacks(64);
  const homsim::WindowNu window{-4.5, 4.5, -4.5, 4.5};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        homsim::inter_window_sums(stacks.camera1, stacks.camera2, window));
}
BENCHMARK(BM_WindowSums);

void BM_GaussianDipFit(benchmark::State& state) {
  std::vector<double> x, y;
  for (int i = -12; i <= 12; ++i) {
    const double xi = 30.0 * i;
    x.push_back(xi);
    y.push_back(0.41 - 0.39 * std::exp(-xi * xi / (133.1 * 133.1)));
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(
        homsim::fit_dip(x, y, {}, homsim::FitShape::GaussianDip));
}
BENCHMARK(BM_GaussianDipFit);

}  // namespace

BENCHMARK_MAIN();
