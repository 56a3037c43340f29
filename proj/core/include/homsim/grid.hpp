#pragma once
// Dense 2D grid over a uniformly sampled spatial-frequency lattice.
// Index (ix, iy) maps to coordinates (x0 + ix*step, y0 + iy*step).

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace homsim {

class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(std::size_t nx, std::size_t ny, double x0, double y0, double step)
      : nx_(nx), ny_(ny), x0_(x0), y0_(y0), step_(step), data_(nx * ny, 0.0) {
    if (nx == 0 || ny == 0 || step <= 0.0)
      throw std::invalid_argument("Grid2D: empty lattice or non-positive step");
  }

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  double step() const { return step_; }

  double x(std::size_t ix) const { return x0_ + static_cast<double>(ix) * step_; }
  double y(std::size_t iy) const { return y0_ + static_cast<double>(iy) * step_; }

  double& at(std::size_t ix, std::size_t iy) { return data_[iy * nx_ + ix]; }
  double at(std::size_t ix, std::size_t iy) const { return data_[iy * nx_ + ix]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool same_lattice(const Grid2D& other) const {
    return nx_ == other.nx_ && ny_ == other.ny_ && x0_ == other.x0_ &&
           y0_ == other.y0_ && step_ == other.step_;
  }

  // Bilinear sample at physical coordinates; out-of-lattice is a domain error.
  double interpolate(double x, double y) const {
    const double fx = (x - x0_) / step_;
    const double fy = (y - y0_) / step_;
    if (fx < 0.0 || fy < 0.0 || fx > static_cast<double>(nx_ - 1) ||
        fy > static_cast<double>(ny_ - 1))
      throw std::domain_error("Grid2D::interpolate: point outside lattice");
    std::size_t ix = static_cast<std::size_t>(fx);
    std::size_t iy = static_cast<std::size_t>(fy);
    if (ix == nx_ - 1) --ix;
    if (iy == ny_ - 1) --iy;
    const double tx = fx - static_cast<double>(ix);
    const double ty = fy - static_cast<double>(iy);
    return (1 - tx) * (1 - ty) * at(ix, iy) + tx * (1 - ty) * at(ix + 1, iy) +
           (1 - tx) * ty * at(ix, iy + 1) + tx * ty * at(ix + 1, iy + 1);
  }

  // Plain Riemann integral: sum * step^2.
  double integral() const {
    double s = 0.0;
    for (double v : data_) s += v;
    return s * step_ * step_;
  }

 private:
  std::size_t nx_ = 0, ny_ = 0;
  double x0_ = 0.0, y0_ = 0.0, step_ = 1.0;
  std::vector<double> data_;
};

}  // namespace homsim
