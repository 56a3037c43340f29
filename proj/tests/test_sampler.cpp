#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "homsim/sampler.hpp"

using namespace homsim;

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

Moments moments(const std::vector<double>& v) {
  double s = 0.0, sq = 0.0;
  for (double x : v) {
    s += x;
    sq += x * x;
  }
  const double n = static_cast<double>(v.size());
  Moments m;
  m.mean = s / n;
  m.var = sq / n - m.mean * m.mean;
  return m;
}

}  // namespace

TEST_CASE("biphoton samples reproduce the configured joint statistics") {
  JointMomentumSpec spec;
  PumpSpec pump;
  Rng rng(123);

  const int n = 1'000'000;
  std::vector<double> sum_x(n), diff_x(n), sum_y(n), diff_y(n), times(n);
  for (int i = 0; i < n; ++i) {
    const BiphotonSample s = sample_pair(rng, spec, pump);
    sum_x[i] = s.nu_signal.x + s.nu_idler.x;
    diff_x[i] = s.nu_signal.x - s.nu_idler.x;
    sum_y[i] = s.nu_signal.y + s.nu_idler.y;
    diff_y[i] = s.nu_signal.y - s.nu_idler.y;
    times[i] = s.emission_time_ps;
  }

  // Sample-moment oracle: with 1e6 draws the standard error of a Gaussian
  // mean is sigma/1000 and of a variance is sigma^2 sqrt(2)/1000; the 1%
  // tolerances below are > 5 standard errors.
  const Moments msx = moments(sum_x);
  CHECK(msx.mean == doctest::Approx(0.0).scale(spec.sigma_sum_x).epsilon(0.01));
  CHECK(std::sqrt(msx.var) == doctest::Approx(spec.sigma_sum_x).epsilon(0.01));
  const Moments mdx = moments(diff_x);
  CHECK(std::sqrt(mdx.var) == doctest::Approx(spec.sigma_diff_x).epsilon(0.01));
  const Moments msy = moments(sum_y);
  CHECK(std::sqrt(msy.var) == doctest::Approx(spec.sigma_sum_y).epsilon(0.01));
  const Moments mdy = moments(diff_y);
  CHECK(std::sqrt(mdy.var) == doctest::Approx(spec.sigma_diff_y).epsilon(0.01));
  const Moments mt = moments(times);
  CHECK(std::sqrt(mt.var) == doctest::Approx(pump.sigma_t_ps).epsilon(0.01));

  SUBCASE("sum and difference coordinates are uncorrelated") {
    double cov = 0.0;
    for (int i = 0; i < n; ++i)
      cov += (sum_x[i] - msx.mean) * (diff_x[i] - mdx.mean);
    cov /= n;
    const double corr = cov / std::sqrt(msx.var * mdx.var);
    CHECK(std::abs(corr) < 0.005);
  }
}

TEST_CASE("beam center offsets displace the marginals") {
  JointMomentumSpec spec;
  spec.center_signal = {4.0, -2.0};
  spec.center_idler = {-4.0, 2.0};
  PumpSpec pump;
  Rng rng(7);
  double sx = 0.0, ix = 0.0;
  const int n = 200'000;
  for (int i = 0; i < n; ++i) {
    const BiphotonSample s = sample_pair(rng, spec, pump);
    sx += s.nu_signal.x;
    ix += s.nu_idler.x;
  }
  CHECK(sx / n == doctest::Approx(4.0).epsilon(0.05));
  CHECK(ix / n == doctest::Approx(-4.0).epsilon(0.05));
}

TEST_CASE("camera mapping of reflected beams") {
  InterferometerSetting s;
  s.delta_nu_x = 3.0;
  s.delta_nu_y = 1.5;

  SUBCASE("transmission is the identity") {
    const Vec2 out = apply_camera_mapping({5.0, -2.0}, Path::Transmitted, 1, s);
    CHECK(out.x == 5.0);
    CHECK(out.y == -2.0);
  }

  SUBCASE("reflection flips left-right and applies the tilt shifts") {
    const Vec2 on1 = apply_camera_mapping({5.0, -2.0}, Path::Reflected, 1, s);
    CHECK(on1.x == doctest::Approx(-5.0 + 3.0));
    CHECK(on1.y == doctest::Approx(-2.0 + 1.5));
    const Vec2 on2 = apply_camera_mapping({5.0, -2.0}, Path::Reflected, 2, s);
    CHECK(on2.x == doctest::Approx(-5.0 + 3.0));
    CHECK(on2.y == doctest::Approx(-2.0 - 1.5));
  }
}

TEST_CASE("routing probabilities against the closed-form ratios") {
  BeamSplitterSpec bs;
  for (double o : {0.0, 0.3, 1.0}) {
    const RoutingProbabilities p = routing_probabilities(o, bs);
    const double denom = 0.9 * 0.9;
    CHECK(p.across ==
          doctest::Approx((0.25 + 0.16 - 0.4 * o) / denom).epsilon(1e-12));
    CHECK(p.bunched_port1 == doctest::Approx(p.bunched_port2).epsilon(1e-12));
    CHECK(p.across + p.bunched_port1 + p.bunched_port2 ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Bunching into one port: RT (1 + O) / (R+T)^2.
    CHECK(p.bunched_port1 ==
          doctest::Approx(0.2 * (1.0 + o) / denom).epsilon(1e-12));
  }
}

TEST_CASE("monte carlo routing frequencies match the probabilities") {
  BeamSplitterSpec bs;
  OverlapParams params;
  InterferometerSetting setting;
  setting.delta_t_fs = 120.0;  // partial overlap
  JointMomentumSpec joint;
  PumpSpec pump;
  Rng rng(99);

  std::map<OutcomeKind, int> counts;
  const int n = 500'000;
  for (int i = 0; i < n; ++i) {
    const BiphotonSample s = sample_pair(rng, joint, pump);
    counts[route_pair(rng, s, setting, bs, params).kind]++;
  }

  const double o = overlap(setting, params);
  const double survive = 0.9 * 0.9;
  const RoutingProbabilities p = routing_probabilities(o, bs);
  // 5-sigma binomial tolerances.
  auto tol = [&](double prob) {
    return 5.0 * std::sqrt(prob * (1.0 - prob) / n);
  };
  const double f_across = counts[OutcomeKind::CoincidenceAcross] / double(n);
  const double f_b1 = counts[OutcomeKind::BunchedPort1] / double(n);
  const double f_b2 = counts[OutcomeKind::BunchedPort2] / double(n);
  const double f_lost1 = counts[OutcomeKind::OneLost] / double(n);
  const double f_lost2 = counts[OutcomeKind::BothLost] / double(n);
  CHECK(std::abs(f_across - survive * p.across) < tol(survive * p.across));
  CHECK(std::abs(f_b1 - survive * p.bunched_port1) <
        tol(survive * p.bunched_port1));
  CHECK(std::abs(f_b2 - survive * p.bunched_port2) <
        tol(survive * p.bunched_port2));
  CHECK(std::abs(f_lost1 - 2.0 * 0.9 * 0.1) < tol(0.18));
  CHECK(std::abs(f_lost2 - 0.01) < tol(0.01));
  CHECK(f_across + f_b1 + f_b2 + f_lost1 + f_lost2 == doctest::Approx(1.0));
}

TEST_CASE("overlap scale degrades interference without changing totals") {
  BeamSplitterSpec bs;
  OverlapParams params;
  InterferometerSetting setting;  // perfect overlap
  JointMomentumSpec joint;
  PumpSpec pump;
  Rng rng(5);

  int across_ideal = 0, across_degraded = 0;
  const int n = 300'000;
  for (int i = 0; i < n; ++i) {
    const BiphotonSample s = sample_pair(rng, joint, pump);
    if (route_pair(rng, s, setting, bs, params, 1.0).kind ==
        OutcomeKind::CoincidenceAcross)
      ++across_ideal;
    if (route_pair(rng, s, setting, bs, params, 0.3).kind ==
        OutcomeKind::CoincidenceAcross)
      ++across_degraded;
  }
  const double survive = 0.81;
  CHECK(across_ideal / double(n) ==
        doctest::Approx(survive * routing_probabilities(1.0, bs).across)
            .epsilon(0.15));
  CHECK(across_degraded / double(n) ==
        doctest::Approx(survive * routing_probabilities(0.3, bs).across)
            .epsilon(0.05));
  CHECK(across_degraded > across_ideal);
}

TEST_CASE("polarization control enters through the relative angle") {
  BeamSplitterSpec bs;
  OverlapParams params;
  JointMomentumSpec joint;
  PumpSpec pump;
  Rng rng(17);

  InterferometerSetting crossed;
  crossed.pol_angle_deg = 90.0;
  int across = 0, bunched = 0;
  const int n = 400'000;
  for (int i = 0; i < n; ++i) {
    const BiphotonSample s = sample_pair(rng, joint, pump);
    const PairOutcome out = route_pair(rng, s, crossed, bs, params);
    if (out.kind == OutcomeKind::CoincidenceAcross) ++across;
    if (out.kind == OutcomeKind::BunchedPort1 ||
        out.kind == OutcomeKind::BunchedPort2)
      ++bunched;
  }
  // With the overlap forced to zero the across fraction among detected
  // pairs is (R^2 + T^2) / (R + T)^2 = 0.41 / 0.81.
  const double frac = across / double(across + bunched);
  CHECK(frac == doctest::Approx(0.41 / 0.81).epsilon(0.01));
}
