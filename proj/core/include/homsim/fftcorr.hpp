#pragma once
// FFT-backed linear (zero-padded) cross-correlation of equally sized dense
// images, with per-frame accumulation so a whole stack needs only one
// inverse transform.
//
//   X(t) = sum_p A(p) * B(p + t),  t in [-(w-1), w-1] x [-(h-1), h-1]

#include <cstddef>
#include <vector>

namespace homsim {

class FftCorrelator {
 public:
  FftCorrelator(int width, int height);
  ~FftCorrelator();

  FftCorrelator(const FftCorrelator&) = delete;
  FftCorrelator& operator=(const FftCorrelator&) = delete;

  // Adds one frame pair's correlation to the accumulator. Inputs are
  // row-major width*height doubles.
  void accumulate(const std::vector<double>& a, const std::vector<double>& b);

  int frames_accumulated() const { return frames_; }

  // Frame-averaged correlation, size (2h-1) x (2w-1), row-major, index
  // [(ty + h - 1) * (2w - 1) + (tx + w - 1)].
  std::vector<double> average() const;

  int out_width() const { return 2 * width_ - 1; }
  int out_height() const { return 2 * height_ - 1; }

 private:
  int width_, height_;
  int pad_x_, pad_y_;
  int frames_ = 0;
  struct Impl;
  Impl* impl_;
};

// O(P) exact window sum of the zero-padded cross-correlation,
//   sum over tx in [tx_lo, tx_hi], ty in [ty_lo, ty_hi] of X(t),
// computed with a summed-area table; equals summing FftCorrelator output
// over the same window up to rounding.
double window_correlation_sum(const std::vector<double>& a,
                              const std::vector<double>& b, int width,
                              int height, int tx_lo, int tx_hi, int ty_lo,
                              int ty_hi);

}  // namespace homsim
