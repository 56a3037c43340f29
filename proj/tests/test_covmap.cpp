#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "homsim/covmap.hpp"
#include "homsim/rng.hpp"
#include "homsim/snr.hpp"

using namespace homsim;

namespace {

// Frames of pure Bernoulli noise, one stack per camera, no correlation.
FrameStack noise_stack(int w, int h, int n_frames, double m, std::uint64_t seed) {
  FrameStack stack;
  stack.camera.width = w;
  stack.camera.height = h;
  stack.camera.nu_per_pixel = 1.0;
  stack.camera.center_x = w / 2.0;
  stack.camera.center_y = h / 2.0;
  Rng rng(seed);
  for (int f = 0; f < n_frames; ++f) {
    Frame frame(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (rng.bernoulli(m)) frame.set(x, y);
    stack.frames.push_back(frame);
  }
  return stack;
}

}  // namespace

TEST_CASE("smoothing kernel has unit integral and the requested area") {
  for (double area : {10.0, 44.0, 120.0}) {
    const SmoothingKernel k = make_cov_kernel(area);
    double sum = 0.0, sum_sq = 0.0;
    for (double w : k.weights) {
      sum += w;
      sum_sq += w * w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    // Effective averaging area of a unit-integral kernel is 1 / sum(k^2).
    CHECK(1.0 / sum_sq == doctest::Approx(area).epsilon(0.1));
    CHECK(k.sum_sq == doctest::Approx(sum_sq).epsilon(1e-12));
  }
}

TEST_CASE("noise budget formulas, evaluated longhand") {
  // Oracle arithmetic: m = 0.12, N = 500, P = 529 (23 x 23 average),
  // P' = 27 effective pixels under the peak, pair ratio 0.13.
  const double m = 0.12, N = 500.0, P = 529.0, Pp = 27.0, ratio = 0.13;
  const SNRBudget b = snr_budget(m, N, P, Pp, ratio);

  const double expected_std = std::sqrt(m * m * (1.0 - m * m) / (N * P));
  CHECK(b.noise_std == doctest::Approx(expected_std).epsilon(1e-12));
  CHECK(b.noise_std == doctest::Approx(2.31e-4).epsilon(0.01));

  const double expected_twin = m * ratio / Pp;
  CHECK(b.twin_signal == doctest::Approx(expected_twin).epsilon(1e-12));
  CHECK(b.twin_signal == doctest::Approx(5.8e-4).epsilon(0.01));

  CHECK(b.snr ==
        doctest::Approx(expected_twin * 10.0 / (expected_std * 4.0))
            .epsilon(1e-12));
  CHECK(b.snr == doctest::Approx(6.2).epsilon(0.02));
}

TEST_CASE("empirical covariance noise matches the formula") {
  // Two independent Bernoulli stacks: every map pixel is pure estimator
  // noise with variance m^2 (1 - m^2) / N before averaging; the smoothing
  // kernel of effective area P divides the variance by P.
  // Small occupancy: the closed-form variance neglects the estimation of
  // the mean image, an approximation accurate to sqrt((1+m)/(1-m)).
  const double m = 0.04;
  const int n_frames = 500;
  const FrameStack s1 = noise_stack(96, 96, n_frames, m, 101);
  const FrameStack s2 = noise_stack(96, 96, n_frames, m, 202);

  const double area = 100.0;
  const Grid2D map = covariance_map_2d(s1, s2, 1, area);

  // Sample std over the central region (edges see partial kernels).
  double sum = 0.0, sum_sq = 0.0;
  int count = 0;
  for (std::size_t j = 16; j < map.ny() - 16; ++j)
    for (std::size_t i = 16; i < map.nx() - 16; ++i) {
      sum += map.at(i, j);
      sum_sq += map.at(i, j) * map.at(i, j);
      ++count;
    }
  const double mean = sum / count;
  const double std_dev = std::sqrt(sum_sq / count - mean * mean);
  const double expected =
      std::sqrt(m * m * (1.0 - m * m) / (n_frames * area));
  CHECK(std_dev == doctest::Approx(expected).epsilon(0.10));
  CHECK(std::abs(mean) < expected);
}

TEST_CASE("covariance map geometry and binning") {
  // Perfectly correlated pixel pair: camera 1 pixel (40, 30) fires exactly
  // when camera 2 pixel (flipped position of the same delta-nu cell) fires.
  CameraSpec cam;
  cam.width = 64;
  cam.height = 64;
  cam.nu_per_pixel = 1.0;
  cam.center_x = 32.0;
  cam.center_y = 32.0;
  FrameStack s1, s2;
  s1.camera = s2.camera = cam;
  Rng rng(9);
  for (int f = 0; f < 400; ++f) {
    Frame f1(64, 64), f2(64, 64);
    if (rng.bernoulli(0.3)) {
      f1.set(40, 30);
      f2.set(63 - 40, 63 - 30);
    }
    s1.frames.push_back(f1);
    s2.frames.push_back(f2);
  }

  SUBCASE("unbinned, unsmoothed map puts the covariance at the pixel") {
    const Grid2D map = covariance_map_2d(s1, s2, 1, 1.0);
    CHECK(map.nx() == 64);
    // Locate the maximum.
    std::size_t bi = 0, bj = 0;
    double best = -1e300;
    for (std::size_t j = 0; j < map.ny(); ++j)
      for (std::size_t i = 0; i < map.nx(); ++i)
        if (map.at(i, j) > best) {
          best = map.at(i, j);
          bi = i;
          bj = j;
        }
    CHECK(bi == 40);
    CHECK(bj == 30);
    // Bernoulli covariance p (1 - p) = 0.21 with p = 0.3.
    CHECK(best == doctest::Approx(0.21).epsilon(0.2));
    // Grid coordinate of pixel 40 is (40 - center) * step.
    CHECK(map.x(bi) == doctest::Approx(8.0));
    CHECK(map.y(bj) == doctest::Approx(-2.0));
  }

  SUBCASE("binning sums and shrinks the lattice") {
    const Grid2D map = covariance_map_2d(s1, s2, 4, 1.0);
    CHECK(map.nx() == 16);
    CHECK(map.step() == doctest::Approx(4.0));
    std::size_t bi = 0, bj = 0;
    double best = -1e300;
    for (std::size_t j = 0; j < map.ny(); ++j)
      for (std::size_t i = 0; i < map.nx(); ++i)
        if (map.at(i, j) > best) {
          best = map.at(i, j);
          bi = i;
          bj = j;
        }
    CHECK(bi == 10);  // pixel 40 -> bin 10
    CHECK(bj == 7);   // pixel 30 -> bin 7
  }

  SUBCASE("offset pairing removes the covariance") {
    const Grid2D map = covariance_map_2d(s1, s2, 1, 1.0, 1);
    CHECK(std::abs(map.at(40, 30)) < 0.05);
  }

  SUBCASE("dimension not divisible by bin is rejected") {
    CHECK_THROWS_AS(covariance_map_2d(s1, s2, 7, 1.0), std::invalid_argument);
  }
}

TEST_CASE("map difference requires matching lattices") {
  Grid2D a(8, 8, 0.0, 0.0, 1.0);
  Grid2D b(8, 8, 0.0, 0.0, 1.0);
  a.at(2, 3) = 5.0;
  b.at(2, 3) = 2.0;
  const Grid2D d = map_difference(a, b);
  CHECK(d.at(2, 3) == doctest::Approx(3.0));
  CHECK(d.at(0, 0) == doctest::Approx(0.0));

  Grid2D c(8, 8, 1.0, 0.0, 1.0);
  CHECK_THROWS_AS(map_difference(a, c), std::invalid_argument);
}

TEST_CASE("snr budget input validation") {
  CHECK_THROWS_AS(snr_budget(-0.1, 500, 529, 27, 0.13), std::invalid_argument);
  CHECK_THROWS_AS(snr_budget(0.12, 0, 529, 27, 0.13), std::invalid_argument);
  CHECK_THROWS_AS(snr_budget(0.12, 500, 529, 0, 0.13), std::invalid_argument);
}
