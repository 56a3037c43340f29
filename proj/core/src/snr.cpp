#include "homsim/snr.hpp"

#include <cmath>
#include <stdexcept>

namespace homsim {

SNRBudget snr_budget(double m, double n_frames, double pixels_per_cell,
                     double peak_integral_pixels, double pair_ratio,
                     double signal_multiplier, double noise_multiplier) {
  if (!(m > 0.0 && n_frames > 0.0 && pixels_per_cell > 0.0 &&
        peak_integral_pixels > 0.0 && pair_ratio > 0.0 &&
        signal_multiplier > 0.0 && noise_multiplier > 0.0))
    throw std::invalid_argument("snr_budget: all inputs must be positive");

  SNRBudget b;
  b.mean_photons_per_pixel = m;
  b.n_frames = n_frames;
  b.pixels_per_cell = pixels_per_cell;
  b.peak_integral_pixels = peak_integral_pixels;
  b.pair_ratio = pair_ratio;
  b.signal_multiplier = signal_multiplier;
  b.noise_multiplier = noise_multiplier;
  b.noise_std = std::sqrt(m * m * (1.0 - m * m) / (n_frames * pixels_per_cell));
  b.twin_signal = m * pair_ratio / peak_integral_pixels;
  b.snr = (b.twin_signal * signal_multiplier) / (b.noise_std * noise_multiplier);
  return b;
}

}  // namespace homsim
