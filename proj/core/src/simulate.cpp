#include "homsim/simulate.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>
#include <vector>

namespace homsim {

namespace {

struct FrameResult {
  Frame f1;
  Frame f2;
  std::uint64_t pairs = 0;
};

FrameResult simulate_frame(const ExperimentConfig& cfg,
                           const InterferometerSetting& setting,
                           const AberrationField& field, RoutingMode mode,
                           std::uint64_t seed) {
  Rng rng(seed);
  const std::uint64_t n_pairs = rng.poisson(cfg.pairs_per_frame_mean);

  std::vector<RoutedPhoton> photons;
  photons.reserve(2 * n_pairs);
  for (std::uint64_t i = 0; i < n_pairs; ++i) {
    const BiphotonSample sample = sample_pair(rng, cfg.joint, cfg.pump);
    if (mode == RoutingMode::Reference) {
      photons.push_back({1, Path::Transmitted, sample.nu_signal, true});
      photons.push_back({2, Path::Transmitted, sample.nu_idler, true});
      continue;
    }
    // Aberration degradation sampled at the pair's common-mode position,
    // i.e. where its correlation contribution lands on the sensor.
    double scale = 1.0;
    if (!field.is_identity()) {
      const Vec2 common{0.5 * (sample.nu_signal.x - sample.nu_idler.x),
                        0.5 * (sample.nu_signal.y - sample.nu_idler.y)};
      if (auto px = project_to_pixel(common, cfg.camera1))
        scale = field.at(*px);
      else
        scale = field.at(PixelIndex{
            static_cast<int>(cfg.camera1.center_x + common.x / cfg.camera1.nu_per_pixel),
            static_cast<int>(cfg.camera1.center_y + common.y / cfg.camera1.nu_per_pixel)});
    }
    const PairOutcome outcome = route_pair(rng, sample, setting,
                                           cfg.beamsplitter, cfg.overlap, scale);
    photons.push_back(outcome.photons[0]);
    photons.push_back(outcome.photons[1]);
  }

  auto [f1, f2] = expose_frame(photons, cfg.camera1, cfg.camera2, rng);
  return {std::move(f1), std::move(f2), n_pairs};
}

}  // namespace

StackPair simulate_stack_pair(const ExperimentConfig& config,
                              const InterferometerSetting& setting,
                              int n_frames, StreamTag tag,
                              std::uint64_t point_index, int workers,
                              RoutingMode mode) {
  if (n_frames <= 0) throw std::invalid_argument("n_frames must be positive");
  if (workers <= 0) workers = 1;

  const AberrationField field = config.aberration.build(config.camera1);

  std::vector<FrameResult> results(static_cast<std::size_t>(n_frames));
  std::atomic<int> next{0};
  auto work = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_frames) break;
      const std::uint64_t seed =
          hash_seed(config.master_seed, static_cast<std::uint64_t>(tag),
                    point_index, static_cast<std::uint64_t>(i));
      results[static_cast<std::size_t>(i)] =
          simulate_frame(config, setting, field, mode, seed);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) threads.emplace_back(work);
    for (std::thread& t : threads) t.join();
  }

  StackPair out;
  out.camera1.camera = config.camera1;
  out.camera2.camera = config.camera2;
  out.camera1.seed = config.master_seed;
  out.camera2.seed = config.master_seed;
  out.camera1.frames.reserve(results.size());
  out.camera2.frames.reserve(results.size());
  for (FrameResult& r : results) {
    out.camera1.frames.push_back(std::move(r.f1));
    out.camera2.frames.push_back(std::move(r.f2));
    out.generated_pairs += r.pairs;
  }
  return out;
}

}  // namespace homsim
