#include "homsim/covmap.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homsim {

SmoothingKernel make_cov_kernel(double effective_area) {
  if (!(effective_area >= 1.0))
    throw std::invalid_argument("kernel area must be >= 1");
  const double sigma = std::sqrt(effective_area / (4.0 * std::numbers::pi));
  const int half = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  const int n = 2 * half + 1;
  SmoothingKernel kernel;
  kernel.half = half;
  kernel.weights.resize(static_cast<std::size_t>(n) * n);
  double sum = 0.0;
  for (int y = -half; y <= half; ++y)
    for (int x = -half; x <= half; ++x) {
      const double v = std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
      kernel.weights[static_cast<std::size_t>(y + half) * n + (x + half)] = v;
      sum += v;
    }
  for (double& v : kernel.weights) v /= sum;
  for (double v : kernel.weights) kernel.sum_sq += v * v;
  return kernel;
}

Grid2D covariance_map_2d(const FrameStack& stack1, const FrameStack& stack2,
                         int bin, double kernel_area, int frame_offset) {
  const CameraSpec& cam = stack1.camera;
  if (cam.width != stack2.camera.width || cam.height != stack2.camera.height)
    throw std::invalid_argument("covariance_map_2d: stack dimensions differ");
  if (stack1.frames.size() != stack2.frames.size() || stack1.frames.empty())
    throw std::invalid_argument("covariance_map_2d: bad frame counts");
  if (bin <= 0 || cam.width % bin != 0 || cam.height % bin != 0)
    throw std::invalid_argument(
        "covariance_map_2d: dimensions not divisible by bin");

  const int w = cam.width;
  const int h = cam.height;
  const std::size_t npix = static_cast<std::size_t>(w) * h;
  const std::size_t nframes = stack1.frames.size();

  // Temporal means and cross moment per pixel, image 2 flipped both axes.
  std::vector<double> mean1(npix, 0.0), mean2(npix, 0.0), cross(npix, 0.0);
  for (std::size_t f = 0; f < nframes; ++f) {
    const Frame& f1 = stack1.frames[f];
    const Frame& f2 = stack2.frames[(f + static_cast<std::size_t>(frame_offset)) % nframes];
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double v1 = f1.get(x, y) ? 1.0 : 0.0;
        const double v2 = f2.get(w - 1 - x, h - 1 - y) ? 1.0 : 0.0;
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        mean1[i] += v1;
        mean2[i] += v2;
        cross[i] += v1 * v2;
      }
  }
  const double inv_n = 1.0 / static_cast<double>(nframes);
  std::vector<double> cov(npix);
  for (std::size_t i = 0; i < npix; ++i)
    cov[i] = cross[i] * inv_n - (mean1[i] * inv_n) * (mean2[i] * inv_n);

  // Sum-binning.
  const int bw = w / bin;
  const int bh = h / bin;
  std::vector<double> binned(static_cast<std::size_t>(bw) * bh, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      binned[static_cast<std::size_t>(y / bin) * bw + (x / bin)] +=
          cov[static_cast<std::size_t>(y) * w + x];

  // Gaussian smoothing, zero-padded.
  const SmoothingKernel kernel = make_cov_kernel(kernel_area);
  const int half = kernel.half;
  const int kn = 2 * half + 1;
  const double step = bin * cam.nu_per_pixel;
  const double x0 = ((bin - 1) * 0.5 - cam.center_x) * cam.nu_per_pixel;
  const double y0 = ((bin - 1) * 0.5 - cam.center_y) * cam.nu_per_pixel;
  Grid2D out(static_cast<std::size_t>(bw), static_cast<std::size_t>(bh), x0, y0, step);
  for (int y = 0; y < bh; ++y)
    for (int x = 0; x < bw; ++x) {
      double acc = 0.0;
      for (int ky = -half; ky <= half; ++ky) {
        const int sy = y + ky;
        if (sy < 0 || sy >= bh) continue;
        for (int kx = -half; kx <= half; ++kx) {
          const int sx = x + kx;
          if (sx < 0 || sx >= bw) continue;
          acc += binned[static_cast<std::size_t>(sy) * bw + sx] *
                 kernel.weights[static_cast<std::size_t>(ky + half) * kn + (kx + half)];
        }
      }
      out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
    }
  return out;
}

Grid2D map_difference(const Grid2D& a, const Grid2D& b) {
  if (!a.same_lattice(b))
    throw std::invalid_argument("map_difference: lattice mismatch");
  Grid2D out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i)
    out.data()[i] -= b.data()[i];
  return out;
}

}  // namespace homsim
