#pragma once
// End-to-end stack simulation: Poisson pair generation, beamsplitter
// routing and camera exposure, parallel over frames with per-frame seeds so
// any worker count produces bitwise identical stacks.

#include <cstdint>
#include <utility>

#include "homsim/config.hpp"

namespace homsim {

struct StackPair {
  FrameStack camera1;
  FrameStack camera2;
  std::uint64_t generated_pairs = 0;  // across all frames
};

enum class RoutingMode {
  Beamsplitter,  // full interferometer
  Reference,     // beamsplitter removed: signal -> camera 1, idler -> camera 2
};

StackPair simulate_stack_pair(const ExperimentConfig& config,
                              const InterferometerSetting& setting,
                              int n_frames, StreamTag tag,
                              std::uint64_t point_index, int workers,
                              RoutingMode mode = RoutingMode::Beamsplitter);

}  // namespace homsim
