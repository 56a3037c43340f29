#pragma once
// Pixelated photon-counting cameras: projection of spatial frequencies to
// pixels, Bernoulli detection with spurious counts, and bit-packed binary
// frames grouped into stacks.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homsim/rng.hpp"
#include "homsim/sampler.hpp"

namespace homsim {

struct PixelIndex {
  int x = 0;
  int y = 0;
};

struct CameraSpec {
  int width = 128;
  int height = 128;
  double nu_per_pixel = 1.5;  // mm^-1 per pixel
  double qe = 0.5;            // detection probability per photon
  double noise_prob = 0.01;   // spurious count probability per pixel per frame
  double center_x = 64.0;     // pixel coordinates of nu = 0
  double center_y = 64.0;

  void validate() const;
};

// Binary frame, one bit per pixel, row-major, MSB = leftmost pixel of the
// row, each row padded to a byte boundary.
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height)
      : width_(width), height_(height),
        bytes_(static_cast<std::size_t>(height) * row_bytes(width), 0) {}

  static std::size_t row_bytes(int width) {
    return (static_cast<std::size_t>(width) + 7) / 8;
  }

  int width() const { return width_; }
  int height() const { return height_; }

  bool get(int x, int y) const {
    const std::size_t i = static_cast<std::size_t>(y) * row_bytes(width_) +
                          static_cast<std::size_t>(x) / 8;
    return (bytes_[i] >> (7 - (x & 7))) & 1;
  }
  void set(int x, int y) {
    const std::size_t i = static_cast<std::size_t>(y) * row_bytes(width_) +
                          static_cast<std::size_t>(x) / 8;
    bytes_[i] |= static_cast<std::uint8_t>(1u << (7 - (x & 7)));
  }

  std::uint64_t count_lit() const;

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

  bool operator==(const Frame&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bytes_;
};

struct FrameStack {
  CameraSpec camera;
  std::vector<Frame> frames;
  std::uint64_t seed = 0;
  std::string settings_text;  // acquisition metadata, JSON

  bool operator==(const FrameStack&) const = default;
};

// Phenomenological per-pixel overlap-degradation map in [0, 1]; identity
// (all ones) means no degradation.
class AberrationField {
 public:
  AberrationField() = default;  // identity
  AberrationField(int width, int height, std::vector<double> values);

  static AberrationField radial(int width, int height, double center_x,
                                double center_y, double min_value,
                                double sigma_px);

  bool is_identity() const { return values_.empty(); }
  // Sampled at a pixel; out-of-field positions degrade like the nearest edge.
  double at(PixelIndex p) const;

  int width() const { return width_; }
  int height() const { return height_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

// Pixel hit by a spatial frequency, or nullopt when outside the sensor.
std::optional<PixelIndex> project_to_pixel(Vec2 nu, const CameraSpec& cam);

// Exposes one frame per camera: every alive photon is detected with
// probability qe, every pixel additionally fires with noise_prob, and
// multiple events on a pixel saturate to 1.
std::pair<Frame, Frame> expose_frame(const std::vector<RoutedPhoton>& photons,
                                     const CameraSpec& cam1,
                                     const CameraSpec& cam2, Rng& rng);

}  // namespace homsim
