#pragma once
// Spatially resolved covariance quality maps: per-pixel temporal covariance
// between pixel q of image 1 and -q of image 2, denoised by pixel binning
// and Gaussian-kernel smoothing.

#include <vector>

#include "homsim/camera.hpp"
#include "homsim/grid.hpp"

namespace homsim {

// Unit-integral Gaussian smoothing kernel. The effective averaging area of
// a unit-integral kernel is 1 / sum(k^2); the kernel sigma is chosen so
// this area matches the requested value.
struct SmoothingKernel {
  std::vector<double> weights;  // (2*half+1)^2, row-major
  int half = 0;
  double sum_sq = 0.0;
};
SmoothingKernel make_cov_kernel(double effective_area);

// Covariance map between stack1 frame f and stack2 frame (f + frame_offset)
// mod N; a nonzero offset pairs images from different shots and yields the
// pure-noise reference map. Binning sums bin x bin pixels; dimensions must
// be divisible by bin. Map coordinates are in delta-nu units of the binned
// lattice.
Grid2D covariance_map_2d(const FrameStack& stack1, const FrameStack& stack2,
                         int bin, double kernel_area, int frame_offset = 0);

Grid2D map_difference(const Grid2D& a, const Grid2D& b);

}  // namespace homsim
