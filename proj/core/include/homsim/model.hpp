#pragma once
// Closed-form physics of the two-photon interferometer: Schmidt numbers,
// indistinguishability overlap, predicted coincidence ratios and visibilities.
// Everything here is a pure function over value types and serves as the
// oracle the Monte Carlo pipeline is tested against.

#include <utility>

#include "homsim/grid.hpp"

namespace homsim {

// Pump beam, sigma values are standard deviations.
struct PumpSpec {
  double sigma_x_mm = 0.35;
  double sigma_y_mm = 0.37;
  double sigma_t_ps = 400.0;
  double wavelength_nm = 355.0;

  void validate() const;
};

// Interference filter selecting the down-converted photons.
struct FilterSpec {
  double center_wavelength_nm = 709.0;
  double sigma_nu_t_THz = 1.8;

  void validate() const;
};

// Far-field spatial-frequency bandwidth of the down-conversion emission.
struct PhaseMatchingSpec {
  double sigma_nu_x = 34.0;  // mm^-1
  double sigma_nu_y = 34.0;  // mm^-1

  void validate() const;
};

// Lossy beamsplitter; R + T + L must equal 1.
struct BeamSplitterSpec {
  double reflectance = 0.5;
  double transmittance = 0.4;
  double loss = 0.1;

  void validate() const;
};

// One interferometer configuration: path delay, tilt-induced spatial
// frequency shifts and the relative polarization angle. The tilt angles
// are optional inputs; when given they must satisfy delta_nu = 2 f dangle.
struct InterferometerSetting {
  double delta_t_fs = 0.0;
  double delta_nu_x = 0.0;  // mm^-1
  double delta_nu_y = 0.0;  // mm^-1
  double pol_angle_deg = 0.0;

  double focal_mm = 0.0;     // 0 means "tilts not specified"
  double theta_bs_rad = 0.0; // horizontal tilt
  double phi_bs_rad = 0.0;   // vertical tilt

  void validate() const;
};

// Widths of the overlap (indistinguishability) factor. Spatial widths are
// stored in spatial-frequency units (mm^-1); ratios delta_nu/sigma are
// identical to the momentum-space ratios since q = 2 pi nu.
struct OverlapParams {
  double sigma_q = 0.7;        // horizontal coherence width, mm^-1
  double sigma_spdc = 34.0;    // vertical phase-matching bandwidth, mm^-1
  double sigma_t_fs = 133.1;   // temporal dip standard deviation
  double defocus_factor = 0.08; // scales the effective vertical width

  void validate() const;
};

struct SchmidtReport {
  double k_x = 1.0;
  double k_y = 1.0;
  double k_t = 1.0;

  double total() const { return k_x * k_y * k_t; }
};

// K = (u + 1/u)/2 with u = 2 pi sigma_pump sigma_nu. Arguments must be
// unit-consistent so that their product is dimensionless.
double schmidt_number(double sigma_pump, double sigma_nu);

double total_dimensionality(const SchmidtReport& report);

// Indistinguishability factor in [0,1]; 1 iff all shifts vanish and the
// polarizations are parallel.
double overlap(const InterferometerSetting& setting, const OverlapParams& params);

struct RatioPair {
  double r12 = 0.0;
  double r11_plus_22 = 0.0;
};

// R12 = R^2 + T^2 - 2RT O ; R11+R22 = 2RT (1 + O). Their sum is (R+T)^2
// for every overlap value.
RatioPair analytic_ratios(double overlap_value, const BeamSplitterSpec& bs);

struct VisibilityPair {
  double v12 = 0.0;
  double v11_plus_22 = 0.0;
};

// V12 = 2RT/(R^2+T^2); the bunching maximum visibility is exactly 1/2.
VisibilityPair analytic_visibilities(const BeamSplitterSpec& bs);

// Predicted correlation maps given a reference (no-beamsplitter) map c0.
// Shifted copies of c0 are sampled with linear interpolation; a shift
// exceeding the lattice extent is a domain error.
struct AnalyticMaps {
  Grid2D c12;
  Grid2D c11_plus_22;
};
AnalyticMaps analytic_correlation_map(const Grid2D& c0,
                                      const InterferometerSetting& setting,
                                      const BeamSplitterSpec& bs,
                                      const OverlapParams& params);

// sigma_lambda = lambda^2 / (2 pi c sigma_t), returned in nm.
double coherence_time_to_bandwidth(double sigma_t_fs, double lambda_nm);

// K_t = sigma_t_pump / (2 sigma_t_coherence).
double temporal_schmidt(double sigma_t_pump_ps, double sigma_t_coh_fs);

// (sigma_nu_x sigma_nu_y) / (peak_sigma_x peak_sigma_y).
double spatial_dimensionality(const PhaseMatchingSpec& pm,
                              double peak_sigma_x, double peak_sigma_y);

}  // namespace homsim
