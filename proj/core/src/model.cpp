#include "homsim/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace homsim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSpeedOfLight = 299792458.0;  // m/s

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
}
}  // namespace

void PumpSpec::validate() const {
  require_positive(sigma_x_mm, "pump.sigma_x_mm");
  require_positive(sigma_y_mm, "pump.sigma_y_mm");
  require_positive(sigma_t_ps, "pump.sigma_t_ps");
  require_positive(wavelength_nm, "pump.wavelength_nm");
}

void FilterSpec::validate() const {
  require_positive(center_wavelength_nm, "filter.center_wavelength_nm");
  require_positive(sigma_nu_t_THz, "filter.sigma_nu_t_THz");
}

void PhaseMatchingSpec::validate() const {
  require_positive(sigma_nu_x, "phase_matching.sigma_nu_x");
  require_positive(sigma_nu_y, "phase_matching.sigma_nu_y");
}

void BeamSplitterSpec::validate() const {
  if (reflectance < 0.0 || transmittance < 0.0 || loss < 0.0)
    throw std::invalid_argument("beamsplitter: R, T, L must be non-negative");
  const double sum = reflectance + transmittance + loss;
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("beamsplitter: R + T + L must equal 1");
}

void InterferometerSetting::validate() const {
  if (focal_mm > 0.0) {
    // When tilt angles are given, the spatial shifts must be consistent
    // with delta_nu = 2 f * dangle.
    const double ex = 2.0 * focal_mm * theta_bs_rad;
    const double ey = 2.0 * focal_mm * phi_bs_rad;
    if (std::abs(delta_nu_x - ex) > 1e-9 || std::abs(delta_nu_y - ey) > 1e-9)
      throw std::invalid_argument(
          "interferometer: delta_nu inconsistent with 2*f*tilt");
  }
}

void OverlapParams::validate() const {
  require_positive(sigma_q, "overlap.sigma_q");
  require_positive(sigma_spdc, "overlap.sigma_spdc");
  require_positive(sigma_t_fs, "overlap.sigma_t_fs");
  require_positive(defocus_factor, "overlap.defocus_factor");
  if (defocus_factor > 1.0)
    throw std::invalid_argument("overlap.defocus_factor must be <= 1");
}

double schmidt_number(double sigma_pump, double sigma_nu) {
  require_positive(sigma_pump, "sigma_pump");
  require_positive(sigma_nu, "sigma_nu");
  const double u = kTwoPi * sigma_pump * sigma_nu;
  return 0.5 * (u + 1.0 / u);
}

double total_dimensionality(const SchmidtReport& report) {
  return report.total();
}

double overlap(const InterferometerSetting& setting, const OverlapParams& params) {
  params.validate();
  const double sx = setting.delta_nu_x / params.sigma_q;
  const double sy = setting.delta_nu_y / (params.defocus_factor * params.sigma_spdc);
  const double st = setting.delta_t_fs / params.sigma_t_fs;
  const double pol = std::cos(setting.pol_angle_deg * std::numbers::pi / 180.0);
  return std::exp(-sx * sx) * std::exp(-sy * sy) * std::exp(-st * st) * pol * pol;
}

RatioPair analytic_ratios(double overlap_value, const BeamSplitterSpec& bs) {
  if (overlap_value < 0.0 || overlap_value > 1.0)
    throw std::domain_error("overlap value must lie in [0, 1]");
  const double r = bs.reflectance;
  const double t = bs.transmittance;
  return {r * r + t * t - 2.0 * r * t * overlap_value,
          2.0 * r * t * (1.0 + overlap_value)};
}

VisibilityPair analytic_visibilities(const BeamSplitterSpec& bs) {
  const double r = bs.reflectance;
  const double t = bs.transmittance;
  require_positive(r, "reflectance");
  require_positive(t, "transmittance");
  // The bunching maximum is 4RT at O=1 and 2RT at O=0: visibility 1/2.
  return {2.0 * r * t / (r * r + t * t), 0.5};
}

AnalyticMaps analytic_correlation_map(const Grid2D& c0,
                                      const InterferometerSetting& setting,
                                      const BeamSplitterSpec& bs,
                                      const OverlapParams& params) {
  const double shift = setting.delta_nu_x;
  const double half_extent_x =
      0.5 * static_cast<double>(c0.nx() - 1) * c0.step();
  if (2.0 * std::abs(shift) > half_extent_x)
    throw std::domain_error("analytic_correlation_map: shift exceeds lattice");

  const double o = overlap(setting, params);
  const double r = bs.reflectance;
  const double t = bs.transmittance;
  const double interference12 = 1.0 - 2.0 * r * t / (r * r + t * t) * o;
  const double interference11 = 1.0 + o;

  // Shifted copies of c0; outside the lattice the reference distribution is
  // treated as zero. In the sum coordinate the transmitted-transmitted
  // coincidence lobe stays at 0 while the reflected-reflected lobe moves by
  // twice the shift (both reflections add the same tilt); within one image
  // the bunched lobes sit symmetrically at -+ shift.
  auto sample = [&](double x, double y) {
    const double xmin = c0.x0();
    const double xmax = c0.x(c0.nx() - 1);
    if (x < xmin || x > xmax) return 0.0;
    return c0.interpolate(x, y);
  };

  AnalyticMaps out{Grid2D(c0.nx(), c0.ny(), c0.x0(), c0.y0(), c0.step()),
                   Grid2D(c0.nx(), c0.ny(), c0.x0(), c0.y0(), c0.step())};
  for (std::size_t iy = 0; iy < c0.ny(); ++iy) {
    const double y = c0.y(iy);
    for (std::size_t ix = 0; ix < c0.nx(); ++ix) {
      const double x = c0.x(ix);
      const double tt = sample(x, y);
      const double rr = sample(x - 2.0 * shift, y);
      const double plus = sample(x + shift, y);
      const double minus = sample(x - shift, y);
      out.c12.at(ix, iy) = (t * t * tt + r * r * rr) * interference12;
      out.c11_plus_22.at(ix, iy) = r * t * (plus + minus) * interference11;
    }
  }
  return out;
}

double coherence_time_to_bandwidth(double sigma_t_fs, double lambda_nm) {
  require_positive(sigma_t_fs, "sigma_t_fs");
  require_positive(lambda_nm, "lambda_nm");
  const double lambda_m = lambda_nm * 1e-9;
  const double sigma_t_s = sigma_t_fs * 1e-15;
  const double sigma_lambda_m =
      lambda_m * lambda_m / (kTwoPi * kSpeedOfLight * sigma_t_s);
  return sigma_lambda_m * 1e9;
}

double temporal_schmidt(double sigma_t_pump_ps, double sigma_t_coh_fs) {
  require_positive(sigma_t_pump_ps, "sigma_t_pump_ps");
  require_positive(sigma_t_coh_fs, "sigma_t_coh_fs");
  return 0.5 * (sigma_t_pump_ps * 1e3) / sigma_t_coh_fs;
}

double spatial_dimensionality(const PhaseMatchingSpec& pm,
                              double peak_sigma_x, double peak_sigma_y) {
  pm.validate();
  require_positive(peak_sigma_x, "peak_sigma_x");
  require_positive(peak_sigma_y, "peak_sigma_y");
  return (pm.sigma_nu_x * pm.sigma_nu_y) / (peak_sigma_x * peak_sigma_y);
}

}  // namespace homsim
