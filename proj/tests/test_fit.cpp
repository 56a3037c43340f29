#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "homsim/fit.hpp"
#include "homsim/model.hpp"
#include "homsim/rng.hpp"

using namespace homsim;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("noiseless gaussian dip is recovered to high precision") {
  const double a = 0.41, b = 0.39, sigma = 133.1;
  const std::vector<double> x = linspace(-450.0, 450.0, 17);
  std::vector<double> y;
  for (double xi : x) y.push_back(a - b * std::exp(-xi * xi / (sigma * sigma)));

  const FitResult fit = fit_dip(x, y, {}, FitShape::GaussianDip);
  CHECK(fit.converged);
  CHECK(fit.baseline == doctest::Approx(a).epsilon(1e-6));
  CHECK(fit.depth == doctest::Approx(b).epsilon(1e-6));
  CHECK(fit.sigma == doctest::Approx(sigma).epsilon(1e-6));
  CHECK(fit.visibility == doctest::Approx(b / a).epsilon(1e-6));
}

TEST_CASE("noiseless gaussian peak is recovered") {
  const double a = 0.4, b = 0.4, sigma = 120.0;
  const std::vector<double> x = linspace(-400.0, 400.0, 21);
  std::vector<double> y;
  for (double xi : x) y.push_back(a + b * std::exp(-xi * xi / (sigma * sigma)));

  const FitResult fit = fit_dip(x, y, {}, FitShape::GaussianPeak);
  CHECK(fit.converged);
  CHECK(fit.baseline == doctest::Approx(a).epsilon(1e-6));
  CHECK(fit.depth == doctest::Approx(b).epsilon(1e-6));
  CHECK(fit.sigma == doctest::Approx(sigma).epsilon(1e-6));
  // Peak visibility: height over maximum, 0.4 / 0.8 = 1/2 for these values.
  CHECK(fit.visibility == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("dip curve generated by the analytic ratios round-trips") {
  // End-to-end oracle: generate R12(delta_t) from the closed-form model
  // and confirm the fit reports the model's own visibility and width.
  BeamSplitterSpec bs;
  OverlapParams params;
  const std::vector<double> x = linspace(-400.0, 400.0, 17);
  std::vector<double> y12, y11;
  for (double dt : x) {
    InterferometerSetting s;
    s.delta_t_fs = dt;
    const RatioPair r = analytic_ratios(overlap(s, params), bs);
    y12.push_back(r.r12);
    y11.push_back(r.r11_plus_22);
  }

  const FitResult dip = fit_dip(x, y12, {}, FitShape::GaussianDip);
  CHECK(dip.sigma == doctest::Approx(params.sigma_t_fs).epsilon(1e-6));
  CHECK(dip.visibility ==
        doctest::Approx(analytic_visibilities(bs).v12).epsilon(1e-6));

  const FitResult peak = fit_dip(x, y11, {}, FitShape::GaussianPeak);
  CHECK(peak.sigma == doctest::Approx(params.sigma_t_fs).epsilon(1e-6));
  CHECK(peak.visibility == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("cos^2 polarization curves") {
  const std::vector<double> x = linspace(0.0, 90.0, 10);

  SUBCASE("falling modulation (coincidence dip at parallel polarization)") {
    // y = 0.41 - 0.40 cos^2(theta).
    std::vector<double> y;
    for (double deg : x) {
      const double c = std::cos(deg * std::numbers::pi / 180.0);
      y.push_back(0.41 - 0.40 * c * c);
    }
    const FitResult fit = fit_dip(x, y, {}, FitShape::Cos2);
    CHECK(fit.converged);
    CHECK(fit.baseline == doctest::Approx(0.41).epsilon(1e-9));
    CHECK(fit.depth == doctest::Approx(0.40).epsilon(1e-9));
    CHECK(fit.visibility == doctest::Approx(0.40 / 0.41).epsilon(1e-9));
  }

  SUBCASE("rising modulation (bunching grows at parallel polarization)") {
    // y = 0.4 + 0.4 cos^2(theta) = a - b cos^2 with b = -0.4; visibility
    // is modulation over maximum: 0.4 / 0.8 = 1/2.
    std::vector<double> y;
    for (double deg : x) {
      const double c = std::cos(deg * std::numbers::pi / 180.0);
      y.push_back(0.4 + 0.4 * c * c);
    }
    const FitResult fit = fit_dip(x, y, {}, FitShape::Cos2);
    CHECK(fit.converged);
    CHECK(fit.depth == doctest::Approx(-0.4).epsilon(1e-9));
    CHECK(fit.visibility == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("noisy curve with supplied errors") {
  const double a = 0.41, b = 0.39, sigma = 133.1;
  const std::vector<double> x = linspace(-450.0, 450.0, 33);
  Rng rng(8);
  std::vector<double> y, yerr;
  for (double xi : x) {
    const double clean = a - b * std::exp(-xi * xi / (sigma * sigma));
    y.push_back(clean + rng.gaussian(0.0, 0.004));
    yerr.push_back(0.004);
  }
  const FitResult fit = fit_dip(x, y, yerr, FitShape::GaussianDip);
  CHECK(fit.converged);
  CHECK(fit.sigma == doctest::Approx(sigma).epsilon(0.1));
  CHECK(fit.visibility == doctest::Approx(b / a).epsilon(0.05));
  // Reported parameter errors must cover the true values within 4 sigma.
  CHECK(std::abs(fit.baseline - a) < 4.0 * fit.baseline_err);
  CHECK(std::abs(fit.depth - b) < 4.0 * fit.depth_err);
  CHECK(std::abs(fit.sigma - sigma) < 4.0 * fit.sigma_err);
  CHECK(fit.visibility_err > 0.0);
}

TEST_CASE("constant curve fits with zero depth") {
  const std::vector<double> x = linspace(-100.0, 100.0, 11);
  const std::vector<double> y(x.size(), 0.37);
  const FitResult fit = fit_dip(x, y, {}, FitShape::GaussianDip);
  CHECK(fit.converged);
  CHECK(fit.depth == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK(fit.visibility == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(fit_dip({1.0, 2.0}, {1.0, 2.0}, {}, FitShape::GaussianDip),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      fit_dip({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}, {1, 1}, FitShape::GaussianDip),
      std::invalid_argument);
  CHECK_THROWS_AS(fit_dip({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5},
                          {1, 1, 1, 1, -1}, FitShape::GaussianDip),
                  std::invalid_argument);
}
