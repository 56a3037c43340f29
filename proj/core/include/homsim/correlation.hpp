#pragma once
// Fluctuation-covariance correlation maps between and within photon-counting
// image stacks, peak integration and relative coincidence ratios.
//
// Maps are expressed over the momentum-uncertainty lattice (delta-nu,
// mm^-1). Between images the twin of a photon at nu sits near -nu, so
// image 2 is flipped along both axes before correlating; within an image
// the twin sits mirrored across the horizontal axis, so the lower half is
// flipped up-down and correlated against the upper half.

#include <cstdint>
#include <string>
#include <vector>

#include "homsim/camera.hpp"
#include "homsim/grid.hpp"

namespace homsim {

enum class MapNormalization {
  Counts,    // frame-averaged raw covariance sums (coincidence counts)
  PerPixel,  // Counts divided by the pixel count of the correlated image
};

struct CorrelationMap {
  Grid2D grid;  // value vs delta-nu
  int n_frames = 0;
  MapNormalization normalization = MapNormalization::Counts;
};

// Rectangular window in delta-nu coordinates, inclusive bounds.
struct WindowNu {
  double x_lo = 0.0, x_hi = 0.0;
  double y_lo = 0.0, y_hi = 0.0;
};

struct PeakStats {
  double centroid_x = 0.0, centroid_y = 0.0;  // mm^-1
  double sigma_x = 0.0, sigma_y = 0.0;        // mm^-1
  double integral = 0.0;  // in the map's normalization units
};

// C12: covariance map of image 1 against the both-axes-flipped image 2.
// Each frame has the per-pixel temporal mean image of its stack subtracted
// before correlating; the result is averaged over frames with the
// N/(N - 1) small-sample covariance correction applied.
CorrelationMap inter_image_correlation(
    const FrameStack& stack1, const FrameStack& stack2,
    MapNormalization norm = MapNormalization::Counts);

// C11 / C22: upper half against the up-down-flipped lower half of the same
// stack; requires an even frame height.
CorrelationMap intra_image_correlation(
    const FrameStack& stack, MapNormalization norm = MapNormalization::Counts);

// Per-frame covariance sums over a delta-nu window (Counts units); the
// mean over frames equals the same window integrated on the averaged map.
std::vector<double> inter_window_sums(const FrameStack& stack1,
                                      const FrameStack& stack2,
                                      const WindowNu& window);
std::vector<double> intra_window_sums(const FrameStack& stack,
                                      const WindowNu& window);

// Integral, centroid and second moments of the map inside a window.
// Moments are computed over the positive part of the map; an empty window
// is an error.
PeakStats integrate_peak(const CorrelationMap& map, const WindowNu& window);

// Ratio of peak integrals relative to the no-beamsplitter reference.
double relative_ratio(const PeakStats& peak, const PeakStats& reference_c0);

// Standard error of the mean estimated by bootstrap resampling over frames.
double bootstrap_standard_error(const std::vector<double>& per_frame_values,
                                int n_resamples, std::uint64_t seed);

}  // namespace homsim
