#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "homsim/model.hpp"

using namespace homsim;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("schmidt number matches the closed form computed independently") {
  // Oracle: K = (u + 1/u)/2 evaluated longhand for sigma_pump = 0.35 mm and
  // sigma_nu = 34 mm^-1: u = 2 pi * 0.35 * 34 = 74.7699...
  const double u = 2.0 * kPi * 0.35 * 34.0;
  const double expected = 0.5 * (u + 1.0 / u);
  CHECK(schmidt_number(0.35, 34.0) == doctest::Approx(expected).epsilon(1e-12));

  SUBCASE("bench values") {
    CHECK(schmidt_number(0.35, 34.0) == doctest::Approx(37.0).epsilon(0.03));
    CHECK(schmidt_number(0.37, 34.0) == doctest::Approx(40.0).epsilon(0.03));
    // Temporal: 400 ps pump against 1.8 THz filter bandwidth,
    // u = 2 pi * 400e-12 * 1.8e12.
    const double kt = schmidt_number(400e-12, 1.8e12);
    CHECK(kt == doctest::Approx(2300.0).epsilon(0.05));
  }

  SUBCASE("symmetry u <-> 1/u") {
    const double a = schmidt_number(2.0, 3.0);
    const double b = schmidt_number(1.0 / (4.0 * kPi * kPi * 2.0), 1.0 / 3.0);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }

  SUBCASE("minimum at u = 1 is exactly 1") {
    CHECK(schmidt_number(1.0 / (2.0 * kPi), 1.0) == doctest::Approx(1.0));
  }
}

TEST_CASE("temporal dimensionality from the pump/coherence time ratio") {
  // K_t = sigma_pump / (2 sigma_coh) with explicit unit conversion:
  // 400 ps / (2 * 133.1 fs) = 400e3 fs / 266.2 fs.
  CHECK(temporal_schmidt(400.0, 133.1) ==
        doctest::Approx(400.0e3 / (2.0 * 133.1)).epsilon(1e-12));
  CHECK(temporal_schmidt(400.0, 133.0) == doctest::Approx(1500.0).epsilon(0.03));
}

TEST_CASE("coherence-time to wavelength-bandwidth conversion") {
  // sigma_lambda = lambda^2 / (2 pi c sigma_t); at 709 nm and 133.1 fs this
  // is 0.709^2 um^2 / (2 pi * 0.2998 um/fs * 133.1 fs) ~ 2.0e-3 um = 2 nm.
  const double c_um_per_fs = 0.299792458;
  const double expected_nm =
      0.709 * 0.709 / (2.0 * kPi * c_um_per_fs * 133.1) * 1e3;
  CHECK(coherence_time_to_bandwidth(133.1, 709.0) ==
        doctest::Approx(expected_nm).epsilon(1e-9));
  CHECK(coherence_time_to_bandwidth(133.1, 709.0) ==
        doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("total dimensionality of the bench state") {
  SchmidtReport r;
  r.k_x = schmidt_number(0.35, 34.0);
  r.k_y = schmidt_number(0.37, 34.0);
  r.k_t = schmidt_number(400e-12, 1.8e12);
  CHECK(total_dimensionality(r) == doctest::Approx(3.4e6).epsilon(0.1));
  CHECK(total_dimensionality(r) == doctest::Approx(r.k_x * r.k_y * r.k_t));
}

TEST_CASE("spatial dimensionality from bandwidth over peak width") {
  PhaseMatchingSpec pm;
  CHECK(spatial_dimensionality(pm, 1.0, 2.0) ==
        doctest::Approx(34.0 * 34.0 / 2.0).epsilon(1e-12));
}

TEST_CASE("overlap factor") {
  OverlapParams params;
  InterferometerSetting s;

  SUBCASE("unity at the origin") {
    CHECK(overlap(s, params) == doctest::Approx(1.0));
  }

  SUBCASE("separable Gaussian factors, evaluated independently") {
    s.delta_t_fs = 100.0;
    s.delta_nu_x = 0.5;
    s.delta_nu_y = 1.0;
    s.pol_angle_deg = 30.0;
    const double sig_y_eff = params.defocus_factor * params.sigma_spdc;
    const double expected =
        std::exp(-0.5 * 0.5 / (params.sigma_q * params.sigma_q)) *
        std::exp(-1.0 / (sig_y_eff * sig_y_eff)) *
        std::exp(-100.0 * 100.0 / (params.sigma_t_fs * params.sigma_t_fs)) *
        std::cos(30.0 * kPi / 180.0) * std::cos(30.0 * kPi / 180.0);
    CHECK(overlap(s, params) == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("even in every shift") {
    for (double v : {30.0, 75.0, 140.0}) {
      InterferometerSetting plus, minus;
      plus.delta_t_fs = v;
      minus.delta_t_fs = -v;
      CHECK(overlap(plus, params) == doctest::Approx(overlap(minus, params)));
      plus = minus = InterferometerSetting{};
      plus.delta_nu_x = v / 100.0;
      minus.delta_nu_x = -v / 100.0;
      CHECK(overlap(plus, params) == doctest::Approx(overlap(minus, params)));
    }
  }

  SUBCASE("monotonically decreasing in |delta_t|") {
    double prev = 1.1;
    for (double dt = 0.0; dt < 500.0; dt += 25.0) {
      InterferometerSetting st;
      st.delta_t_fs = dt;
      const double o = overlap(st, params);
      CHECK(o < prev);
      CHECK(o >= 0.0);
      CHECK(o <= 1.0);
      prev = o;
    }
  }

  SUBCASE("crossed polarizations kill the overlap") {
    s.pol_angle_deg = 90.0;
    CHECK(overlap(s, params) == doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("temporal width is the configured dip standard deviation") {
    // At delta_t = sigma_t the Gaussian factor must be exp(-1).
    s = InterferometerSetting{};
    s.delta_t_fs = params.sigma_t_fs;
    CHECK(overlap(s, params) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
}

TEST_CASE("coincidence and bunching ratios") {
  BeamSplitterSpec bs;  // R = 0.5, T = 0.4, L = 0.1

  SUBCASE("spot values computed longhand") {
    const RatioPair at1 = analytic_ratios(1.0, bs);
    CHECK(at1.r12 == doctest::Approx(0.25 + 0.16 - 2.0 * 0.2).epsilon(1e-12));
    CHECK(at1.r11_plus_22 == doctest::Approx(2.0 * 0.2 * 2.0).epsilon(1e-12));
    const RatioPair at0 = analytic_ratios(0.0, bs);
    CHECK(at0.r12 == doctest::Approx(0.41).epsilon(1e-12));
    CHECK(at0.r11_plus_22 == doctest::Approx(0.4).epsilon(1e-12));
  }

  SUBCASE("energy bookkeeping: the sum is (R+T)^2 for every overlap") {
    for (int i = 0; i <= 1000; ++i) {
      const double o = static_cast<double>(i) / 1000.0;
      const RatioPair r = analytic_ratios(o, bs);
      CHECK(r.r12 + r.r11_plus_22 == doctest::Approx(0.81).epsilon(1e-12));
      CHECK(r.r12 >= 0.0);
      CHECK(r.r11_plus_22 >= 0.0);
    }
  }

  SUBCASE("r12 decreasing, bunching increasing in the overlap") {
    RatioPair prev = analytic_ratios(0.0, bs);
    for (double o = 0.05; o <= 1.0; o += 0.05) {
      const RatioPair r = analytic_ratios(o, bs);
      CHECK(r.r12 < prev.r12);
      CHECK(r.r11_plus_22 > prev.r11_plus_22);
      prev = r;
    }
  }
}

TEST_CASE("visibilities") {
  BeamSplitterSpec bs;
  const VisibilityPair v = analytic_visibilities(bs);
  // Oracle: V12 = 2 * 0.5 * 0.4 / (0.25 + 0.16) = 0.4 / 0.41.
  CHECK(v.v12 == doctest::Approx(0.4 / 0.41).epsilon(1e-12));
  CHECK(v.v11_plus_22 == 0.5);

  SUBCASE("balanced lossless splitter reaches unit visibility") {
    BeamSplitterSpec ideal;
    ideal.reflectance = 0.5;
    ideal.transmittance = 0.5;
    ideal.loss = 0.0;
    CHECK(analytic_visibilities(ideal).v12 == doctest::Approx(1.0));
  }

  SUBCASE("visibility equals dip depth over baseline of the ratio curve") {
    const RatioPair deep = analytic_ratios(1.0, bs);
    const RatioPair base = analytic_ratios(0.0, bs);
    CHECK(v.v12 == doctest::Approx((base.r12 - deep.r12) / base.r12));
    CHECK(v.v11_plus_22 ==
          doctest::Approx((deep.r11_plus_22 - base.r11_plus_22) /
                          deep.r11_plus_22));
  }
}

TEST_CASE("predicted correlation maps") {
  // Reference map: isotropic Gaussian peak of width 1 on a fine lattice.
  const double step = 0.25;
  const std::size_t n = 161;
  Grid2D c0(n, n, -20.0, -20.0, step);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const double x = c0.x(i), y = c0.y(j);
      c0.at(i, j) = std::exp(-(x * x + y * y) / 2.0);
    }

  BeamSplitterSpec bs;
  OverlapParams params;

  SUBCASE("map integrals reproduce the closed-form ratios") {
    for (double dt : {0.0, 80.0, 200.0, 1000.0}) {
      InterferometerSetting s;
      s.delta_t_fs = dt;
      const AnalyticMaps maps = analytic_correlation_map(c0, s, bs, params);
      const RatioPair r = analytic_ratios(overlap(s, params), bs);
      const double ref = c0.integral();
      CHECK(maps.c12.integral() / ref == doctest::Approx(r.r12).epsilon(1e-6));
      CHECK(maps.c11_plus_22.integral() / ref ==
            doctest::Approx(r.r11_plus_22).epsilon(1e-6));
    }
  }

  SUBCASE("horizontal shift splits the coincidence peak by twice the shift") {
    InterferometerSetting s;
    s.delta_nu_x = 3.0;
    const AnalyticMaps maps = analytic_correlation_map(c0, s, bs, params);
    // The transmitted-transmitted copy stays at 0, the reflected-reflected
    // copy moves to +2 delta_nu_x; compare against directly constructed lobes.
    const double at0 = maps.c12.interpolate(0.0, 0.0);
    const double at2 = maps.c12.interpolate(6.0, 0.0);
    const double between = maps.c12.interpolate(3.0, 0.0);
    CHECK(at0 > between);
    CHECK(at2 > between);
    // Lobe amplitude ratio R^2 : T^2 (overlap is negligible at 3 mm^-1
    // horizontal shift with sigma_q = 0.7).
    CHECK(at2 / at0 == doctest::Approx(0.25 / 0.16).epsilon(1e-3));
  }

  SUBCASE("shift beyond the lattice is a domain error") {
    InterferometerSetting s;
    s.delta_nu_x = 25.0;
    CHECK_THROWS_AS(analytic_correlation_map(c0, s, bs, params),
                    std::domain_error);
  }
}

TEST_CASE("spec validation") {
  CHECK_NOTHROW(PumpSpec{}.validate());
  CHECK_NOTHROW(BeamSplitterSpec{}.validate());

  SUBCASE("beamsplitter bookkeeping") {
    BeamSplitterSpec bs;
    bs.loss = 0.2;  // R + T + L = 1.1
    CHECK_THROWS_AS(bs.validate(), std::invalid_argument);
  }

  SUBCASE("tilt consistency") {
    InterferometerSetting s;
    s.delta_nu_x = 3.0;
    s.focal_mm = 50.0;
    s.theta_bs_rad = 3.0 / (2.0 * 50.0);
    CHECK_NOTHROW(s.validate());
    s.theta_bs_rad *= 1.5;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  }
}
