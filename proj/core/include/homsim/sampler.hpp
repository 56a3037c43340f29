#pragma once
// Monte Carlo generation of photon pairs from the Gaussian joint momentum
// model and stochastic routing through the lossy beamsplitter with
// two-photon interference.

#include <array>
#include <cstdint>

#include "homsim/model.hpp"
#include "homsim/rng.hpp"

namespace homsim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Joint statistics of the signal/idler spatial frequencies. Per axis the
// sum nu_s + nu_i is Normal(0, sigma_sum) and the difference
// nu_s - nu_i is Normal(0, sigma_diff); the EPR regime has
// sigma_diff >> sigma_sum.
struct JointMomentumSpec {
  double sigma_sum_x = 0.8;   // mm^-1
  double sigma_sum_y = 0.6;   // mm^-1
  double sigma_diff_x = 68.0; // mm^-1
  double sigma_diff_y = 68.0; // mm^-1
  Vec2 center_signal{};       // beam center offsets, mm^-1
  Vec2 center_idler{};

  void validate() const;
};

struct BiphotonSample {
  Vec2 nu_signal;
  Vec2 nu_idler;
  double emission_time_ps = 0.0;
  double pol_signal_deg = 0.0;
  double pol_idler_deg = 0.0;
};

enum class Path : std::uint8_t { Transmitted, Reflected };

struct RoutedPhoton {
  int camera_id = 1;  // 1 or 2
  Path path = Path::Transmitted;
  Vec2 nu;            // after flip/shift camera mapping
  bool alive = true;
};

enum class OutcomeKind : std::uint8_t {
  CoincidenceAcross,
  BunchedPort1,
  BunchedPort2,
  OneLost,
  BothLost,
};

struct PairOutcome {
  OutcomeKind kind = OutcomeKind::BothLost;
  std::array<RoutedPhoton, 2> photons;  // [signal, idler]
};

BiphotonSample sample_pair(Rng& rng, const JointMomentumSpec& spec,
                           const PumpSpec& pump);

// Reflected beams are flipped left-right and shifted by (+dnx, +dny) on
// camera 1 and (+dnx, -dny) on camera 2; transmitted beams are unchanged.
Vec2 apply_camera_mapping(Vec2 nu, Path path, int camera_id,
                          const InterferometerSetting& setting);

// Routes one pair through the beamsplitter. Each photon survives
// independently with probability R+T; conditional on both surviving the
// outcome is drawn from the renormalized interference weights:
//   across = (R^2 + T^2 - 2RT O) / (R+T)^2  (tt with weight T^2, rr R^2)
//   bunched in each port = RT (1 + O) / (R+T)^2.
// overlap_scale multiplies O and carries the position-dependent
// aberration degradation (1 = ideal).
PairOutcome route_pair(Rng& rng, const BiphotonSample& sample,
                       const InterferometerSetting& setting,
                       const BeamSplitterSpec& bs, const OverlapParams& params,
                       double overlap_scale = 1.0);

// Outcome probabilities conditional on both photons surviving; used by the
// router and directly testable against the closed-form ratios.
struct RoutingProbabilities {
  double across = 0.0;
  double bunched_port1 = 0.0;
  double bunched_port2 = 0.0;
};
RoutingProbabilities routing_probabilities(double overlap_value,
                                           const BeamSplitterSpec& bs);

}  // namespace homsim
