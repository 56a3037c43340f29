#include "homsim/sampler.hpp"

#include <stdexcept>

namespace homsim {

void JointMomentumSpec::validate() const {
  if (!(sigma_sum_x > 0.0 && sigma_sum_y > 0.0 && sigma_diff_x > 0.0 &&
        sigma_diff_y > 0.0))
    throw std::invalid_argument("joint momentum sigmas must be positive");
}

BiphotonSample sample_pair(Rng& rng, const JointMomentumSpec& spec,
                           const PumpSpec& pump) {
  const double sx = rng.gaussian(0.0, spec.sigma_sum_x);
  const double dx = rng.gaussian(0.0, spec.sigma_diff_x);
  const double sy = rng.gaussian(0.0, spec.sigma_sum_y);
  const double dy = rng.gaussian(0.0, spec.sigma_diff_y);

  BiphotonSample sample;
  sample.nu_signal = {spec.center_signal.x + 0.5 * (sx + dx),
                      spec.center_signal.y + 0.5 * (sy + dy)};
  sample.nu_idler = {spec.center_idler.x + 0.5 * (sx - dx),
                     spec.center_idler.y + 0.5 * (sy - dy)};
  sample.emission_time_ps = rng.gaussian(0.0, pump.sigma_t_ps);
  return sample;
}

Vec2 apply_camera_mapping(Vec2 nu, Path path, int camera_id,
                          const InterferometerSetting& setting) {
  if (path == Path::Transmitted) return nu;
  // Reflected: left-right flip, then the tilt-induced shift. The vertical
  // shift has opposite signs on the two cameras.
  Vec2 out{-nu.x + setting.delta_nu_x,
           nu.y + (camera_id == 1 ? setting.delta_nu_y : -setting.delta_nu_y)};
  return out;
}

RoutingProbabilities routing_probabilities(double overlap_value,
                                           const BeamSplitterSpec& bs) {
  const double r = bs.reflectance;
  const double t = bs.transmittance;
  const double norm = (r + t) * (r + t);
  RoutingProbabilities p;
  p.across = (r * r + t * t - 2.0 * r * t * overlap_value) / norm;
  p.bunched_port1 = r * t * (1.0 + overlap_value) / norm;
  p.bunched_port2 = p.bunched_port1;
  return p;
}

namespace {

RoutedPhoton make_routed(bool is_signal, Path path,
                         const BiphotonSample& sample,
                         const InterferometerSetting& setting) {
  RoutedPhoton ph;
  ph.path = path;
  // Transmitted signal and reflected idler exit toward camera 1; the
  // mirrored combinations exit toward camera 2.
  if (is_signal)
    ph.camera_id = (path == Path::Transmitted) ? 1 : 2;
  else
    ph.camera_id = (path == Path::Transmitted) ? 2 : 1;
  const Vec2 nu = is_signal ? sample.nu_signal : sample.nu_idler;
  ph.nu = apply_camera_mapping(nu, path, ph.camera_id, setting);
  ph.alive = true;
  return ph;
}

}  // namespace

PairOutcome route_pair(Rng& rng, const BiphotonSample& sample,
                       const InterferometerSetting& setting,
                       const BeamSplitterSpec& bs, const OverlapParams& params,
                       double overlap_scale) {
  InterferometerSetting eff = setting;
  eff.pol_angle_deg = sample.pol_idler_deg - sample.pol_signal_deg +
                      setting.pol_angle_deg;
  const double o = overlap(eff, params) * overlap_scale;

  const double survive = bs.reflectance + bs.transmittance;
  const bool signal_alive = rng.bernoulli(survive);
  const bool idler_alive = rng.bernoulli(survive);

  PairOutcome out;
  if (!signal_alive && !idler_alive) {
    out.kind = OutcomeKind::BothLost;
    out.photons[0].alive = false;
    out.photons[1].alive = false;
    return out;
  }
  if (signal_alive != idler_alive) {
    // Single survivor: no interference partner, conditional T/R routing.
    out.kind = OutcomeKind::OneLost;
    const bool is_signal = signal_alive;
    const Path path = rng.bernoulli(bs.transmittance / survive)
                          ? Path::Transmitted
                          : Path::Reflected;
    out.photons[0] = make_routed(true, path, sample, setting);
    out.photons[1] = make_routed(false, path, sample, setting);
    out.photons[is_signal ? 1 : 0].alive = false;
    return out;
  }

  const RoutingProbabilities p = routing_probabilities(o, bs);
  const double u = rng.uniform();
  const double r = bs.reflectance;
  const double t = bs.transmittance;
  if (u < p.across) {
    out.kind = OutcomeKind::CoincidenceAcross;
    // Within the across class the tt/rr split follows the map structure
    // of the shifted reference peaks: weights T^2 and R^2.
    const bool tt = rng.bernoulli(t * t / (r * r + t * t));
    const Path path = tt ? Path::Transmitted : Path::Reflected;
    out.photons[0] = make_routed(true, path, sample, setting);
    out.photons[1] = make_routed(false, path, sample, setting);
  } else if (u < p.across + p.bunched_port1) {
    out.kind = OutcomeKind::BunchedPort1;
    out.photons[0] = make_routed(true, Path::Transmitted, sample, setting);
    out.photons[1] = make_routed(false, Path::Reflected, sample, setting);
  } else {
    out.kind = OutcomeKind::BunchedPort2;
    out.photons[0] = make_routed(true, Path::Reflected, sample, setting);
    out.photons[1] = make_routed(false, Path::Transmitted, sample, setting);
  }
  return out;
}

}  // namespace homsim
