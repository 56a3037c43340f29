#include "homsim/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "homsim/fftcorr.hpp"
#include "homsim/rng.hpp"

namespace homsim {

namespace {

// Dense copy of a frame region. flip_x / flip_y reverse the pixel axes
// (applied to image 2 or to the lower half).
std::vector<double> dense_region(const Frame& frame, int y_begin, int y_end,
                                 bool flip_x, bool flip_y) {
  const int w = frame.width();
  const int h = y_end - y_begin;
  std::vector<double> out(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    const int sy = flip_y ? (y_end - 1 - y) : (y_begin + y);
    for (int x = 0; x < w; ++x) {
      const int sx = flip_x ? (w - 1 - x) : x;
      out[static_cast<std::size_t>(y) * w + x] = frame.get(sx, sy) ? 1.0 : 0.0;
    }
  }
  return out;
}

// Per-pixel temporal mean image of a stack region. Subtracting it from each
// frame removes the accidental background shaped by the beam profile; the
// scalar per-frame mean would leave most of it behind.
std::vector<double> mean_region(const std::vector<Frame>& frames, int y_begin,
                                int y_end, bool flip_x, bool flip_y) {
  std::vector<double> mean;
  for (const Frame& frame : frames) {
    const std::vector<double> img = dense_region(frame, y_begin, y_end, flip_x, flip_y);
    if (mean.empty()) mean.assign(img.size(), 0.0);
    for (std::size_t i = 0; i < img.size(); ++i) mean[i] += img[i];
  }
  const double inv = 1.0 / static_cast<double>(frames.size());
  for (double& v : mean) v *= inv;
  return mean;
}

std::vector<double> residual_region(const Frame& frame,
                                    const std::vector<double>& mean,
                                    int y_begin, int y_end, bool flip_x,
                                    bool flip_y) {
  std::vector<double> img = dense_region(frame, y_begin, y_end, flip_x, flip_y);
  for (std::size_t i = 0; i < img.size(); ++i) img[i] -= mean[i];
  return img;
}

// Estimating the mean from the same N frames shrinks the covariance by
// (N - 1)/N; this restores an unbiased estimate.
double bias_correction(std::size_t n_frames) {
  return n_frames > 1
             ? static_cast<double>(n_frames) / static_cast<double>(n_frames - 1)
             : 1.0;
}

// Axis descriptors translating correlation displacements t into delta-nu.
// For an unflipped axis  delta_nu = t * step (sum-coordinate handled by the
// flip of the second image); for a flipped axis of extent n with the nu
// origin at pixel c, t = (n - 1 - 2c) - delta_nu/step, so the axis is
// reversed when re-indexed into the output grid.
struct AxisMap {
  bool reversed = false;
  double origin = 0.0;  // delta-nu at output grid index 0
  double step = 1.0;
};

AxisMap direct_axis(int n, double step) {
  return {false, -(n - 1) * step, step};
}
AxisMap flipped_axis(int n, double center, double step) {
  // After reversal, grid index i corresponds to t = (n-1) - i and
  // delta_nu = (i - (2c - ...)) * step; origin derived from t bounds.
  AxisMap m;
  m.reversed = true;
  m.step = step;
  // delta_nu(t) = ((n - 1 - 2c) - t) * step, with t from -(n-1) to n-1.
  m.origin = ((n - 1 - 2.0 * center) - (n - 1)) * step;
  return m;
}

Grid2D correlation_to_grid(const std::vector<double>& corr, int out_w,
                           int out_h, const AxisMap& ax, const AxisMap& ay,
                           double scale) {
  Grid2D grid(static_cast<std::size_t>(out_w), static_cast<std::size_t>(out_h),
              ax.origin, ay.origin, ax.step);
  for (int j = 0; j < out_h; ++j) {
    const int src_j = ay.reversed ? (out_h - 1 - j) : j;
    for (int i = 0; i < out_w; ++i) {
      const int src_i = ax.reversed ? (out_w - 1 - i) : i;
      grid.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          corr[static_cast<std::size_t>(src_j) * out_w + src_i] * scale;
    }
  }
  return grid;
}

void check_pair(const FrameStack& s1, const FrameStack& s2) {
  if (s1.camera.width != s2.camera.width ||
      s1.camera.height != s2.camera.height)
    throw std::invalid_argument("correlation: stack dimensions differ");
  if (s1.frames.size() != s2.frames.size())
    throw std::invalid_argument("correlation: frame counts differ");
  if (s1.frames.empty())
    throw std::invalid_argument("correlation: empty stacks");
  if (s1.camera.nu_per_pixel != s2.camera.nu_per_pixel)
    throw std::invalid_argument("correlation: calibration differs");
}

// Window in delta-nu converted to displacement bounds for the inter-image
// estimator (both axes flipped).
struct TBounds {
  int tx_lo, tx_hi, ty_lo, ty_hi;
};

TBounds inter_bounds(const WindowNu& w, const CameraSpec& cam) {
  const double d = cam.nu_per_pixel;
  // t = (n - 1 - 2c) - delta_nu/d on both axes.
  const double kx = cam.width - 1 - 2.0 * cam.center_x;
  const double ky = cam.height - 1 - 2.0 * cam.center_y;
  TBounds b;
  b.tx_lo = static_cast<int>(std::ceil(kx - w.x_hi / d - 1e-9));
  b.tx_hi = static_cast<int>(std::floor(kx - w.x_lo / d + 1e-9));
  b.ty_lo = static_cast<int>(std::ceil(ky - w.y_hi / d - 1e-9));
  b.ty_hi = static_cast<int>(std::floor(ky - w.y_lo / d + 1e-9));
  return b;
}

TBounds intra_bounds(const WindowNu& w, const CameraSpec& cam) {
  const double d = cam.nu_per_pixel;
  const double ky = cam.height - 1 - 2.0 * cam.center_y;
  TBounds b;
  b.tx_lo = static_cast<int>(std::ceil(w.x_lo / d - 1e-9));
  b.tx_hi = static_cast<int>(std::floor(w.x_hi / d + 1e-9));
  b.ty_lo = static_cast<int>(std::ceil(ky - w.y_hi / d - 1e-9));
  b.ty_hi = static_cast<int>(std::floor(ky - w.y_lo / d + 1e-9));
  return b;
}

}  // namespace

CorrelationMap inter_image_correlation(const FrameStack& stack1,
                                       const FrameStack& stack2,
                                       MapNormalization norm) {
  check_pair(stack1, stack2);
  const CameraSpec& cam = stack1.camera;
  FftCorrelator corr(cam.width, cam.height);
  const auto mean1 = mean_region(stack1.frames, 0, cam.height, false, false);
  const auto mean2 = mean_region(stack2.frames, 0, cam.height, true, true);
  for (std::size_t f = 0; f < stack1.frames.size(); ++f) {
    const auto a = residual_region(stack1.frames[f], mean1, 0, cam.height, false, false);
    const auto b = residual_region(stack2.frames[f], mean2, 0, cam.height, true, true);
    corr.accumulate(a, b);
  }
  double scale = bias_correction(stack1.frames.size());
  if (norm == MapNormalization::PerPixel)
    scale /= static_cast<double>(cam.width) * cam.height;
  CorrelationMap map;
  map.grid = correlation_to_grid(
      corr.average(), corr.out_width(), corr.out_height(),
      flipped_axis(cam.width, cam.center_x, cam.nu_per_pixel),
      flipped_axis(cam.height, cam.center_y, cam.nu_per_pixel), scale);
  map.n_frames = static_cast<int>(stack1.frames.size());
  map.normalization = norm;
  return map;
}

CorrelationMap intra_image_correlation(const FrameStack& stack,
                                       MapNormalization norm) {
  const CameraSpec& cam = stack.camera;
  if (cam.height % 2 != 0)
    throw std::invalid_argument("intra_image_correlation: odd frame height");
  if (stack.frames.empty())
    throw std::invalid_argument("intra_image_correlation: empty stack");
  const int half = cam.height / 2;
  FftCorrelator corr(cam.width, half);
  const auto mean_upper = mean_region(stack.frames, 0, half, false, false);
  const auto mean_lower = mean_region(stack.frames, half, cam.height, false, true);
  for (const Frame& frame : stack.frames) {
    const auto upper = residual_region(frame, mean_upper, 0, half, false, false);
    const auto lower = residual_region(frame, mean_lower, half, cam.height, false, true);
    corr.accumulate(upper, lower);
  }
  double scale = bias_correction(stack.frames.size());
  if (norm == MapNormalization::PerPixel)
    scale /= static_cast<double>(cam.width) * half;
  // The correlator runs over half-height regions, so the vertical
  // displacement t spans [-(half-1), half-1] while the sum coordinate obeys
  // delta_nu = ((h - 1 - 2c) - t) * step; grid index 0 (after reversal,
  // t = half - 1) therefore sits at (half - 2c) * step.
  AxisMap ay;
  ay.reversed = true;
  ay.step = cam.nu_per_pixel;
  ay.origin = (half - 2.0 * cam.center_y) * cam.nu_per_pixel;
  CorrelationMap map;
  map.grid = correlation_to_grid(corr.average(), corr.out_width(),
                                 corr.out_height(),
                                 direct_axis(cam.width, cam.nu_per_pixel), ay,
                                 scale);
  map.n_frames = static_cast<int>(stack.frames.size());
  map.normalization = norm;
  return map;
}

std::vector<double> inter_window_sums(const FrameStack& stack1,
                                      const FrameStack& stack2,
                                      const WindowNu& window) {
  check_pair(stack1, stack2);
  const CameraSpec& cam = stack1.camera;
  const TBounds b = inter_bounds(window, cam);
  const auto mean1 = mean_region(stack1.frames, 0, cam.height, false, false);
  const auto mean2 = mean_region(stack2.frames, 0, cam.height, true, true);
  const double corr = bias_correction(stack1.frames.size());
  std::vector<double> sums;
  sums.reserve(stack1.frames.size());
  for (std::size_t f = 0; f < stack1.frames.size(); ++f) {
    const auto a = residual_region(stack1.frames[f], mean1, 0, cam.height, false, false);
    const auto bb = residual_region(stack2.frames[f], mean2, 0, cam.height, true, true);
    sums.push_back(corr * window_correlation_sum(a, bb, cam.width, cam.height,
                                                 b.tx_lo, b.tx_hi, b.ty_lo,
                                                 b.ty_hi));
  }
  return sums;
}

std::vector<double> intra_window_sums(const FrameStack& stack,
                                      const WindowNu& window) {
  const CameraSpec& cam = stack.camera;
  if (cam.height % 2 != 0)
    throw std::invalid_argument("intra_window_sums: odd frame height");
  const int half = cam.height / 2;
  const TBounds b = intra_bounds(window, cam);
  const auto mean_upper = mean_region(stack.frames, 0, half, false, false);
  const auto mean_lower = mean_region(stack.frames, half, cam.height, false, true);
  const double corr = bias_correction(stack.frames.size());
  std::vector<double> sums;
  sums.reserve(stack.frames.size());
  for (const Frame& frame : stack.frames) {
    const auto upper = residual_region(frame, mean_upper, 0, half, false, false);
    const auto lower = residual_region(frame, mean_lower, half, cam.height, false, true);
    sums.push_back(corr * window_correlation_sum(upper, lower, cam.width, half,
                                                 b.tx_lo, b.tx_hi, b.ty_lo,
                                                 b.ty_hi));
  }
  return sums;
}

PeakStats integrate_peak(const CorrelationMap& map, const WindowNu& window) {
  const Grid2D& g = map.grid;
  double total = 0.0;
  double wsum = 0.0, wx = 0.0, wy = 0.0, wxx = 0.0, wyy = 0.0;
  std::size_t points = 0;
  const double eps = 1e-9 * g.step();
  for (std::size_t j = 0; j < g.ny(); ++j) {
    const double y = g.y(j);
    if (y < window.y_lo - eps || y > window.y_hi + eps) continue;
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double x = g.x(i);
      if (x < window.x_lo - eps || x > window.x_hi + eps) continue;
      ++points;
      const double v = g.at(i, j);
      total += v;
      const double w = std::max(v, 0.0);
      wsum += w;
      wx += w * x;
      wy += w * y;
      wxx += w * x * x;
      wyy += w * y * y;
    }
  }
  if (points == 0)
    throw std::invalid_argument("integrate_peak: window contains no lattice points");

  PeakStats stats;
  stats.integral = total;
  if (wsum > 0.0) {
    stats.centroid_x = wx / wsum;
    stats.centroid_y = wy / wsum;
    stats.sigma_x = std::sqrt(std::max(0.0, wxx / wsum - stats.centroid_x * stats.centroid_x));
    stats.sigma_y = std::sqrt(std::max(0.0, wyy / wsum - stats.centroid_y * stats.centroid_y));
  }
  return stats;
}

double relative_ratio(const PeakStats& peak, const PeakStats& reference_c0) {
  if (!(reference_c0.integral > 0.0))
    throw std::domain_error("relative_ratio: non-positive reference integral");
  return peak.integral / reference_c0.integral;
}

double bootstrap_standard_error(const std::vector<double>& per_frame_values,
                                int n_resamples, std::uint64_t seed) {
  const std::size_t n = per_frame_values.size();
  if (n < 2 || n_resamples < 2)
    throw std::invalid_argument("bootstrap: need >= 2 values and resamples");
  Rng rng(mix64(seed));
  double sum = 0.0, sum_sq = 0.0;
  for (int b = 0; b < n_resamples; ++b) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k =
          static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)) % n;
      mean += per_frame_values[k];
    }
    mean /= static_cast<double>(n);
    sum += mean;
    sum_sq += mean * mean;
  }
  const double m = sum / n_resamples;
  return std::sqrt(std::max(0.0, sum_sq / n_resamples - m * m));
}

}  // namespace homsim
