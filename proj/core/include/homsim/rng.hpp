#pragma once
// Deterministic per-frame random streams. Every frame of every scan point
// owns an independent generator seeded by hashing
// (master_seed, stream_tag, point_index, frame_index), so results are
// bitwise identical for any worker count and any resume order.

#include <cstdint>
#include <random>

namespace homsim {

// splitmix64 finalizer, used as the mixing step of the seed hash.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_seed(std::uint64_t master, std::uint64_t stream_tag,
                               std::uint64_t point_index, std::uint64_t frame_index) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ stream_tag);
  h = mix64(h ^ point_index);
  h = mix64(h ^ frame_index);
  return h;
}

// Stream tags for seed derivation; names match the CLI scan variables.
enum class StreamTag : std::uint64_t {
  Reference = 0,
  DeltaT = 1,
  PolAngle = 2,
  DeltaNuX = 3,
  DeltaNuY = 4,
  QualityHV = 5,
  QualityVV = 6,
  Adhoc = 7,
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return uniform_(engine_); }
  double gaussian(double mean, double stddev) {
    return mean + stddev * normal_(engine_);
  }
  std::uint64_t poisson(double mean) {
    std::poisson_distribution<std::uint64_t> dist(mean);
    return dist(engine_);
  }
  bool bernoulli(double p) { return uniform_(engine_) < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace homsim
