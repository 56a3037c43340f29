#include "homsim/fftcorr.hpp"

#include <algorithm>
#include <complex>
#include <stdexcept>

#include <fftw3.h>

namespace homsim {

namespace {
int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}
}  // namespace

struct FftCorrelator::Impl {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  double* real = nullptr;             // pad_y x pad_x scratch
  fftw_complex* spec_a = nullptr;     // pad_y x (pad_x/2+1)
  fftw_complex* spec_b = nullptr;
  fftw_complex* accum = nullptr;
  std::size_t spec_size = 0;
};

FftCorrelator::FftCorrelator(int width, int height)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("FftCorrelator: non-positive dimensions");
  pad_x_ = next_pow2(2 * width);
  pad_y_ = next_pow2(2 * height);
  impl_ = new Impl;
  impl_->spec_size = static_cast<std::size_t>(pad_y_) * (pad_x_ / 2 + 1);
  impl_->real = fftw_alloc_real(static_cast<std::size_t>(pad_y_) * pad_x_);
  impl_->spec_a = fftw_alloc_complex(impl_->spec_size);
  impl_->spec_b = fftw_alloc_complex(impl_->spec_size);
  impl_->accum = fftw_alloc_complex(impl_->spec_size);
  std::fill_n(reinterpret_cast<double*>(impl_->accum), 2 * impl_->spec_size, 0.0);
  impl_->forward = fftw_plan_dft_r2c_2d(pad_y_, pad_x_, impl_->real,
                                        impl_->spec_a, FFTW_ESTIMATE);
  impl_->inverse = fftw_plan_dft_c2r_2d(pad_y_, pad_x_, impl_->spec_a,
                                        impl_->real, FFTW_ESTIMATE);
}

FftCorrelator::~FftCorrelator() {
  fftw_destroy_plan(impl_->forward);
  fftw_destroy_plan(impl_->inverse);
  fftw_free(impl_->real);
  fftw_free(impl_->spec_a);
  fftw_free(impl_->spec_b);
  fftw_free(impl_->accum);
  delete impl_;
}

void FftCorrelator::accumulate(const std::vector<double>& a,
                               const std::vector<double>& b) {
  const std::size_t n = static_cast<std::size_t>(width_) * height_;
  if (a.size() != n || b.size() != n)
    throw std::invalid_argument("FftCorrelator::accumulate: size mismatch");

  auto load = [&](const std::vector<double>& img, fftw_complex* spec) {
    std::fill_n(impl_->real, static_cast<std::size_t>(pad_y_) * pad_x_, 0.0);
    for (int y = 0; y < height_; ++y)
      std::copy_n(img.data() + static_cast<std::size_t>(y) * width_, width_,
                  impl_->real + static_cast<std::size_t>(y) * pad_x_);
    fftw_execute_dft_r2c(impl_->forward, impl_->real, spec);
  };
  load(a, impl_->spec_a);
  load(b, impl_->spec_b);

  // conj(FA) * FB accumulates the correlation X(t) = sum A(p) B(p+t).
  for (std::size_t i = 0; i < impl_->spec_size; ++i) {
    const double ar = impl_->spec_a[i][0], ai = impl_->spec_a[i][1];
    const double br = impl_->spec_b[i][0], bi = impl_->spec_b[i][1];
    impl_->accum[i][0] += ar * br + ai * bi;
    impl_->accum[i][1] += ar * bi - ai * br;
  }
  ++frames_;
}

std::vector<double> FftCorrelator::average() const {
  if (frames_ == 0)
    throw std::logic_error("FftCorrelator::average: no frames accumulated");
  std::copy_n(reinterpret_cast<const double*>(impl_->accum),
              2 * impl_->spec_size, reinterpret_cast<double*>(impl_->spec_a));
  fftw_execute_dft_c2r(impl_->inverse, impl_->spec_a, impl_->real);

  const double norm = 1.0 / (static_cast<double>(pad_x_) * pad_y_ * frames_);
  std::vector<double> out(static_cast<std::size_t>(out_width()) * out_height());
  for (int ty = -(height_ - 1); ty <= height_ - 1; ++ty) {
    const int sy = (ty + pad_y_) % pad_y_;
    for (int tx = -(width_ - 1); tx <= width_ - 1; ++tx) {
      const int sx = (tx + pad_x_) % pad_x_;
      out[static_cast<std::size_t>(ty + height_ - 1) * out_width() +
          (tx + width_ - 1)] =
          impl_->real[static_cast<std::size_t>(sy) * pad_x_ + sx] * norm;
    }
  }
  return out;
}

double window_correlation_sum(const std::vector<double>& a,
                              const std::vector<double>& b, int width,
                              int height, int tx_lo, int tx_hi, int ty_lo,
                              int ty_hi) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (a.size() != n || b.size() != n)
    throw std::invalid_argument("window_correlation_sum: size mismatch");
  if (tx_lo > tx_hi || ty_lo > ty_hi)
    throw std::invalid_argument("window_correlation_sum: empty window");

  // Summed-area table over b with zero padding outside the frame.
  std::vector<double> sat(static_cast<std::size_t>(width + 1) * (height + 1), 0.0);
  const auto sat_at = [&](int x, int y) -> double {
    // Rectangle sum over b[0..x) x [0..y), clamped to the frame.
    const int cx = std::clamp(x, 0, width);
    const int cy = std::clamp(y, 0, height);
    return sat[static_cast<std::size_t>(cy) * (width + 1) + cx];
  };
  for (int y = 0; y < height; ++y) {
    double row = 0.0;
    for (int x = 0; x < width; ++x) {
      row += b[static_cast<std::size_t>(y) * width + x];
      sat[static_cast<std::size_t>(y + 1) * (width + 1) + (x + 1)] =
          sat[static_cast<std::size_t>(y) * (width + 1) + (x + 1)] + row;
    }
  }

  double total = 0.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double av = a[static_cast<std::size_t>(y) * width + x];
      if (av == 0.0) continue;
      // Box sum of b over [x+tx_lo, x+tx_hi] x [y+ty_lo, y+ty_hi].
      const double box = sat_at(x + tx_hi + 1, y + ty_hi + 1) -
                         sat_at(x + tx_lo, y + ty_hi + 1) -
                         sat_at(x + tx_hi + 1, y + ty_lo) +
                         sat_at(x + tx_lo, y + ty_lo);
      total += av * box;
    }
  }
  return total;
}

}  // namespace homsim
