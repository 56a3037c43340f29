#include "homsim/camera.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace homsim {

void CameraSpec::validate() const {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("camera dimensions must be positive");
  if (qe < 0.0 || qe > 1.0)
    throw std::invalid_argument("camera.qe must lie in [0, 1]");
  if (!(nu_per_pixel > 0.0))
    throw std::invalid_argument("camera.nu_per_pixel must be positive");
  if (noise_prob < 0.0 || noise_prob >= 1.0)
    throw std::invalid_argument("camera.noise_prob must lie in [0, 1)");
}

std::uint64_t Frame::count_lit() const {
  std::uint64_t n = 0;
  for (std::uint8_t b : bytes_) n += std::popcount(b);
  return n;
}

AberrationField::AberrationField(int width, int height,
                                 std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("aberration field: size mismatch");
  for (double v : values_)
    if (v < 0.0 || v > 1.0)
      throw std::domain_error("aberration field values must lie in [0, 1]");
}

AberrationField AberrationField::radial(int width, int height, double center_x,
                                        double center_y, double min_value,
                                        double sigma_px) {
  std::vector<double> values(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double dx = x - center_x;
      const double dy = y - center_y;
      const double r2 = dx * dx + dy * dy;
      values[static_cast<std::size_t>(y) * width + x] =
          min_value + (1.0 - min_value) * std::exp(-r2 / (2.0 * sigma_px * sigma_px));
    }
  }
  return AberrationField(width, height, std::move(values));
}

double AberrationField::at(PixelIndex p) const {
  if (is_identity()) return 1.0;
  const int x = std::clamp(p.x, 0, width_ - 1);
  const int y = std::clamp(p.y, 0, height_ - 1);
  return values_[static_cast<std::size_t>(y) * width_ + x];
}

std::optional<PixelIndex> project_to_pixel(Vec2 nu, const CameraSpec& cam) {
  const double fx = cam.center_x + nu.x / cam.nu_per_pixel;
  const double fy = cam.center_y + nu.y / cam.nu_per_pixel;
  const int px = static_cast<int>(std::lround(fx));
  const int py = static_cast<int>(std::lround(fy));
  if (px < 0 || py < 0 || px >= cam.width || py >= cam.height)
    return std::nullopt;
  return PixelIndex{px, py};
}

namespace {

// Spurious counts by geometric skip sampling over the pixel raster.
void add_noise(Frame& frame, const CameraSpec& cam, Rng& rng) {
  if (cam.noise_prob <= 0.0) return;
  const double log1mp = std::log1p(-cam.noise_prob);
  const std::int64_t npix =
      static_cast<std::int64_t>(cam.width) * cam.height;
  std::int64_t i = -1;
  for (;;) {
    const double u = rng.uniform();
    i += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-u) / log1mp));
    if (i >= npix) break;
    frame.set(static_cast<int>(i % cam.width), static_cast<int>(i / cam.width));
  }
}

}  // namespace

std::pair<Frame, Frame> expose_frame(const std::vector<RoutedPhoton>& photons,
                                     const CameraSpec& cam1,
                                     const CameraSpec& cam2, Rng& rng) {
  Frame f1(cam1.width, cam1.height);
  Frame f2(cam2.width, cam2.height);
  for (const RoutedPhoton& ph : photons) {
    if (!ph.alive) continue;
    const CameraSpec& cam = (ph.camera_id == 1) ? cam1 : cam2;
    if (!rng.bernoulli(cam.qe)) continue;
    if (auto px = project_to_pixel(ph.nu, cam)) {
      Frame& f = (ph.camera_id == 1) ? f1 : f2;
      f.set(px->x, px->y);
    }
  }
  add_noise(f1, cam1, rng);
  add_noise(f2, cam2, rng);
  return {std::move(f1), std::move(f2)};
}

}  // namespace homsim
