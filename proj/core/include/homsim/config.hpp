#pragma once
// One virtual experiment: all physical and acquisition parameters, loaded
// from a JSON file with defaults matching the reference bench (355 nm pump,
// 0.8 mm BBO, R=50% / T=40% beamsplitter, 709 nm filters, EMCCDs in the
// photon-counting regime).

#include <cstdint>
#include <filesystem>
#include <string>

#include "homsim/camera.hpp"
#include "homsim/model.hpp"
#include "homsim/sampler.hpp"

namespace homsim {

struct AberrationSpec {
  enum class Kind { Identity, Radial };
  Kind kind = Kind::Identity;
  double min_value = 0.3;  // degradation floor at the field edge
  double sigma_px = 40.0;  // radial scale in pixels

  AberrationField build(const CameraSpec& cam) const;
};

struct ExperimentConfig {
  PumpSpec pump;
  FilterSpec filter;
  PhaseMatchingSpec phase_matching;
  BeamSplitterSpec beamsplitter;
  OverlapParams overlap;
  JointMomentumSpec joint;
  CameraSpec camera1;
  CameraSpec camera2;
  AberrationSpec aberration;
  InterferometerSetting setting;  // base setting; scans override one field
  int frames = 500;
  double pairs_per_frame_mean = 2000.0;
  std::uint64_t master_seed = 20260826;

  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses and fully validates a config file. An empty file (or empty JSON
// object) yields the default configuration; unknown keys are rejected and
// every validation failure is reported, not just the first.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig config_from_json_text(const std::string& text);

std::string config_to_json_text(const ExperimentConfig& config);

}  // namespace homsim
