#pragma once
// Noise budget of the covariance estimator for thresholded photon-counting
// frames: Bernoulli pixel statistics, twin-photon signal and the
// signal-to-noise ratio after binning.

namespace homsim {

struct SNRBudget {
  double mean_photons_per_pixel = 0.0;  // m
  double n_frames = 0.0;                // N
  double pixels_per_cell = 0.0;         // P
  double peak_integral_pixels = 0.0;    // P'
  double pair_ratio = 0.0;              // e.g. 0.13 for the C12 peak
  double signal_multiplier = 10.0;      // empirical binning gain on the signal
  double noise_multiplier = 4.0;        // binning gain on the noise std
  double noise_std = 0.0;               // sqrt(m^2 (1 - m^2) / (N P))
  double twin_signal = 0.0;             // m * pair_ratio / P'
  double snr = 0.0;
};

// The binning multipliers reflect partial correlation between neighboring
// pixels and default to the empirical values for 4x4 binning.
SNRBudget snr_budget(double m, double n_frames, double pixels_per_cell,
                     double peak_integral_pixels, double pair_ratio,
                     double signal_multiplier = 10.0,
                     double noise_multiplier = 4.0);

}  // namespace homsim
