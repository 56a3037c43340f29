#include "homsim/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "homsim/covmap.hpp"
#include "homsim/homf.hpp"

namespace homsim {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::uint64_t point_tag(ScanVariable v) {
  switch (v) {
    case ScanVariable::DeltaT: return static_cast<std::uint64_t>(StreamTag::DeltaT);
    case ScanVariable::PolAngle: return static_cast<std::uint64_t>(StreamTag::PolAngle);
    case ScanVariable::DeltaNuX: return static_cast<std::uint64_t>(StreamTag::DeltaNuX);
    case ScanVariable::DeltaNuY: return static_cast<std::uint64_t>(StreamTag::DeltaNuY);
  }
  return static_cast<std::uint64_t>(StreamTag::Adhoc);
}

InterferometerSetting setting_for_point(const ExperimentConfig& cfg,
                                        ScanVariable v, double value) {
  InterferometerSetting s = cfg.setting;
  switch (v) {
    case ScanVariable::DeltaT: s.delta_t_fs = value; break;
    case ScanVariable::PolAngle: s.pol_angle_deg = value; break;
    case ScanVariable::DeltaNuX: s.delta_nu_x = value; break;
    case ScanVariable::DeltaNuY: s.delta_nu_y = value; break;
  }
  return s;
}

struct PointResult {
  double control = 0.0;
  double r12 = 0.0, r12_err = 0.0;
  double r11p22 = 0.0, r11p22_err = 0.0;
  double r11 = 0.0, r22 = 0.0;
  double sum = 0.0, sum_err = 0.0;
};

json point_to_json(const PointResult& p) {
  return json{{"control", p.control},
              {"r12", p.r12},
              {"r12_err", p.r12_err},
              {"r11p22", p.r11p22},
              {"r11p22_err", p.r11p22_err},
              {"r11", p.r11},
              {"r22", p.r22},
              {"sum", p.sum},
              {"sum_err", p.sum_err}};
}

PointResult point_from_json(const json& j) {
  PointResult p;
  p.control = j.at("control").get<double>();
  p.r12 = j.at("r12").get<double>();
  p.r12_err = j.at("r12_err").get<double>();
  p.r11p22 = j.at("r11p22").get<double>();
  p.r11p22_err = j.at("r11p22_err").get<double>();
  p.r11 = j.at("r11").get<double>();
  p.r22 = j.at("r22").get<double>();
  p.sum = j.at("sum").get<double>();
  p.sum_err = j.at("sum_err").get<double>();
  return p;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

json fit_to_json(const FitResult& fit) {
  const char* shape = fit.shape == FitShape::GaussianDip     ? "gaussian_dip"
                      : fit.shape == FitShape::GaussianPeak ? "gaussian_peak"
                                                            : "cos2";
  return json{{"shape", shape},
              {"baseline", fit.baseline},
              {"baseline_err", fit.baseline_err},
              {"depth", fit.depth},
              {"depth_err", fit.depth_err},
              {"sigma", fit.sigma},
              {"sigma_err", fit.sigma_err},
              {"visibility", fit.visibility},
              {"visibility_err", fit.visibility_err},
              {"residual_norm", fit.residual_norm},
              {"iterations", fit.iterations},
              {"converged", fit.converged}};
}

}  // namespace

const char* scan_variable_name(ScanVariable v) {
  switch (v) {
    case ScanVariable::DeltaT: return "delta_t";
    case ScanVariable::PolAngle: return "pol_angle";
    case ScanVariable::DeltaNuX: return "delta_nu_x";
    case ScanVariable::DeltaNuY: return "delta_nu_y";
  }
  return "unknown";
}

ScanVariable scan_variable_from_name(const std::string& name) {
  if (name == "delta_t") return ScanVariable::DeltaT;
  if (name == "pol_angle") return ScanVariable::PolAngle;
  if (name == "delta_nu_x") return ScanVariable::DeltaNuX;
  if (name == "delta_nu_y") return ScanVariable::DeltaNuY;
  throw std::invalid_argument("unknown scan variable: " + name);
}

void ScanPlan::validate() const {
  if (points.size() < 5)
    throw std::invalid_argument("scan plan needs at least 5 points");
  const bool increasing = points[1] > points[0];
  for (std::size_t i = 1; i < points.size(); ++i) {
    const bool step_up = points[i] > points[i - 1];
    if (step_up != increasing || points[i] == points[i - 1])
      throw std::invalid_argument("scan points must be strictly monotone");
  }
  if (frames_per_point <= 0)
    throw std::invalid_argument("frames_per_point must be positive");
}

WindowNu c0_window(const ExperimentConfig& config) {
  const double d = config.camera1.nu_per_pixel;
  // Detected peak width: sum-spread convolved with the pixel box (applied
  // to both photons), variance d^2/12 each.
  const double sx = std::sqrt(config.joint.sigma_sum_x * config.joint.sigma_sum_x +
                              d * d / 6.0);
  const double sy = std::sqrt(config.joint.sigma_sum_y * config.joint.sigma_sum_y +
                              d * d / 6.0);
  const double hx = std::max(3.0 * sx, 2.0 * d);
  const double hy = std::max(3.0 * sy, 2.0 * d);
  // Half-pixel offset keeps the window edges away from lattice points.
  const double snap = 0.5 * d;
  const double hx_snapped = (std::floor(hx / d) + 0.5) * d + snap - snap;
  const double hy_snapped = (std::floor(hy / d) + 0.5) * d;
  return {-hx_snapped, hx_snapped, -hy_snapped, hy_snapped};
}

namespace {

// Scan windows track the expected peak positions: the C12 structure sits
// at x in {0, 2 dnu_x}, the intra-image peaks at x = +-dnu_x with the
// vertical shift mapped to +dnu_y on camera 1 and -dnu_y on camera 2.
WindowNu shift_window(const WindowNu& base, double x_lo_center,
                      double x_hi_center, double y_center) {
  WindowNu w = base;
  w.x_lo += std::min(x_lo_center, x_hi_center);
  w.x_hi += std::max(x_lo_center, x_hi_center);
  w.y_lo += y_center;
  w.y_hi += y_center;
  return w;
}

}  // namespace

ReferenceResult run_reference(const ExperimentConfig& config,
                              const std::filesystem::path& out_dir,
                              int workers) {
  std::filesystem::create_directories(out_dir / "reference");
  write_text_atomic(out_dir / "config.json", config_to_json_text(config));

  InterferometerSetting neutral = config.setting;
  neutral.delta_t_fs = 0.0;
  neutral.delta_nu_x = 0.0;
  neutral.delta_nu_y = 0.0;
  neutral.pol_angle_deg = 0.0;

  StackPair stacks = simulate_stack_pair(config, neutral, config.frames,
                                         StreamTag::Reference, 0, workers,
                                         RoutingMode::Reference);
  stacks.camera1.settings_text = R"({"role":"reference","camera":1})";
  stacks.camera2.settings_text = R"({"role":"reference","camera":2})";
  write_stack(stacks.camera1, out_dir / "reference" / "c0_cam1.homf");
  write_stack(stacks.camera2, out_dir / "reference" / "c0_cam2.homf");

  ReferenceResult ref;
  ref.window = c0_window(config);
  ref.frames = config.frames;
  const std::vector<double> sums =
      inter_window_sums(stacks.camera1, stacks.camera2, ref.window);
  ref.mean_window_sum = mean(sums);
  const CorrelationMap map = inter_image_correlation(stacks.camera1, stacks.camera2);
  ref.c0_peak = integrate_peak(map, ref.window);
  ref.pair_detection_ratio =
      stacks.generated_pairs > 0
          ? ref.mean_window_sum * static_cast<double>(config.frames) /
                static_cast<double>(stacks.generated_pairs)
          : 0.0;

  const json stats{{"mean_window_sum", ref.mean_window_sum},
                   {"pair_detection_ratio", ref.pair_detection_ratio},
                   {"frames", ref.frames},
                   {"window",
                    {{"x_lo", ref.window.x_lo},
                     {"x_hi", ref.window.x_hi},
                     {"y_lo", ref.window.y_lo},
                     {"y_hi", ref.window.y_hi}}},
                   {"peak",
                    {{"centroid_x", ref.c0_peak.centroid_x},
                     {"centroid_y", ref.c0_peak.centroid_y},
                     {"sigma_x", ref.c0_peak.sigma_x},
                     {"sigma_y", ref.c0_peak.sigma_y},
                     {"integral", ref.c0_peak.integral}}}};
  write_text_atomic(out_dir / "reference" / "stats.json", stats.dump(2) + "\n");
  return ref;
}

ReferenceResult load_reference(const std::filesystem::path& out_dir) {
  const std::filesystem::path path = out_dir / "reference" / "stats.json";
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("missing reference run (expected " + path.string() +
                             "); run `reference` first");
  json j;
  in >> j;
  ReferenceResult ref;
  ref.mean_window_sum = j.at("mean_window_sum").get<double>();
  ref.pair_detection_ratio = j.at("pair_detection_ratio").get<double>();
  ref.frames = j.at("frames").get<int>();
  ref.window = {j.at("window").at("x_lo").get<double>(),
                j.at("window").at("x_hi").get<double>(),
                j.at("window").at("y_lo").get<double>(),
                j.at("window").at("y_hi").get<double>()};
  ref.c0_peak.centroid_x = j.at("peak").at("centroid_x").get<double>();
  ref.c0_peak.centroid_y = j.at("peak").at("centroid_y").get<double>();
  ref.c0_peak.sigma_x = j.at("peak").at("sigma_x").get<double>();
  ref.c0_peak.sigma_y = j.at("peak").at("sigma_y").get<double>();
  ref.c0_peak.integral = j.at("peak").at("integral").get<double>();
  return ref;
}

ScanOutputs run_scan(const ExperimentConfig& config, const ScanPlan& plan,
                     int workers) {
  plan.validate();
  const ReferenceResult ref = load_reference(plan.out_dir);
  if (!(ref.mean_window_sum > 0.0))
    throw std::runtime_error(
        "reference window sum is not positive; cannot normalize ratios");

  const std::filesystem::path scan_dir =
      plan.out_dir / "scans" / scan_variable_name(plan.variable);
  std::filesystem::create_directories(scan_dir);

  std::vector<PointResult> results;
  results.reserve(plan.points.size());
  for (std::size_t pi = 0; pi < plan.points.size(); ++pi) {
    char name[32];
    std::snprintf(name, sizeof(name), "point_%03zu.json", pi);
    const std::filesystem::path point_path = scan_dir / name;

    if (std::filesystem::exists(point_path)) {
      // Resumability: per-point seeds make recomputation identical, so a
      // previously written point is simply reused.
      std::ifstream in(point_path);
      json j;
      in >> j;
      results.push_back(point_from_json(j));
      continue;
    }

    const double value = plan.points[pi];
    const InterferometerSetting setting =
        setting_for_point(config, plan.variable, value);
    StackPair stacks;
    try {
      stacks = simulate_stack_pair(config, setting, plan.frames_per_point,
                                   static_cast<StreamTag>(point_tag(plan.variable)),
                                   pi, workers);
    } catch (const std::exception& e) {
      throw std::runtime_error("scan point " + std::to_string(pi) +
                               " failed: " + e.what());
    }

    const WindowNu base = c0_window(config);
    const WindowNu w12 =
        shift_window(base, 0.0, 2.0 * setting.delta_nu_x, 0.0);
    const WindowNu w11 = shift_window(base, -setting.delta_nu_x,
                                      setting.delta_nu_x, setting.delta_nu_y);
    const WindowNu w22 = shift_window(base, -setting.delta_nu_x,
                                      setting.delta_nu_x, -setting.delta_nu_y);

    const std::vector<double> sums12 =
        inter_window_sums(stacks.camera1, stacks.camera2, w12);
    const std::vector<double> sums11 = intra_window_sums(stacks.camera1, w11);
    const std::vector<double> sums22 = intra_window_sums(stacks.camera2, w22);

    std::vector<double> sums_intra(sums11.size());
    std::vector<double> sums_total(sums11.size());
    for (std::size_t f = 0; f < sums11.size(); ++f) {
      sums_intra[f] = sums11[f] + sums22[f];
      sums_total[f] = sums_intra[f] + sums12[f];
    }

    const std::uint64_t boot_seed =
        hash_seed(config.master_seed, point_tag(plan.variable), pi, 0xb007);
    PointResult p;
    p.control = value;
    p.r12 = mean(sums12) / ref.mean_window_sum;
    p.r12_err = bootstrap_standard_error(sums12, 200, boot_seed) / ref.mean_window_sum;
    p.r11p22 = mean(sums_intra) / ref.mean_window_sum;
    p.r11p22_err =
        bootstrap_standard_error(sums_intra, 200, boot_seed + 1) / ref.mean_window_sum;
    p.r11 = mean(sums11) / ref.mean_window_sum;
    p.r22 = mean(sums22) / ref.mean_window_sum;
    p.sum = mean(sums_total) / ref.mean_window_sum;
    p.sum_err =
        bootstrap_standard_error(sums_total, 200, boot_seed + 2) / ref.mean_window_sum;
    results.push_back(p);
    write_text_atomic(point_path, point_to_json(p).dump(2) + "\n");
  }

  ScanOutputs out;
  out.curve.variable = scan_variable_name(plan.variable);
  for (const PointResult& p : results) {
    out.curve.control.push_back(p.control);
    out.curve.r12.push_back(p.r12);
    out.curve.r12_err.push_back(p.r12_err);
    out.curve.r11p22.push_back(p.r11p22);
    out.curve.r11p22_err.push_back(p.r11p22_err);
  }

  std::ostringstream csv;
  csv << "control,R12,R12_err,R11p22,R11p22_err\n";
  for (const PointResult& p : results)
    csv << format_double(p.control) << ',' << format_double(p.r12) << ','
        << format_double(p.r12_err) << ',' << format_double(p.r11p22) << ','
        << format_double(p.r11p22_err) << '\n';
  out.curve_csv = scan_dir / "curve.csv";
  write_text_atomic(out.curve_csv, csv.str());

  const FitShape shape12 = plan.variable == ScanVariable::PolAngle
                               ? FitShape::Cos2
                               : FitShape::GaussianDip;
  const FitShape shape11 = plan.variable == ScanVariable::PolAngle
                               ? FitShape::Cos2
                               : FitShape::GaussianPeak;
  auto fit_or_best = [&](const std::vector<double>& y,
                         const std::vector<double>& yerr, FitShape shape,
                         FitResult& slot) {
    try {
      slot = fit_dip(out.curve.control, y, yerr, shape);
    } catch (const FitError& e) {
      slot = e.best();
      out.fits_converged = false;
    }
  };
  fit_or_best(out.curve.r12, out.curve.r12_err, shape12, out.fit_r12);
  fit_or_best(out.curve.r11p22, out.curve.r11p22_err, shape11, out.fit_r11p22);

  const json fits{{"variable", out.curve.variable},
                  {"r12", fit_to_json(out.fit_r12)},
                  {"r11p22", fit_to_json(out.fit_r11p22)}};
  out.fit_json = scan_dir / "fit.json";
  write_text_atomic(out.fit_json, fits.dump(2) + "\n");
  return out;
}

void write_grid(const Grid2D& grid, const std::filesystem::path& base_path,
                const std::string& description) {
  const std::filesystem::path bin_path = base_path.string() + ".f64";
  const std::filesystem::path tmp = bin_path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(reinterpret_cast<const char*>(grid.data().data()),
              static_cast<std::streamsize>(grid.data().size() * sizeof(double)));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, bin_path);

  std::ostringstream sidecar;
  sidecar << "description: " << description << "\n"
          << "dtype: float64 little-endian row-major\n"
          << "nx: " << grid.nx() << "\n"
          << "ny: " << grid.ny() << "\n"
          << "x0: " << format_double(grid.x0()) << "\n"
          << "y0: " << format_double(grid.y0()) << "\n"
          << "step: " << format_double(grid.step()) << "\n"
          << "units: mm^-1 (spatial frequency)\n";
  write_text_atomic(base_path.string() + ".txt", sidecar.str());
}

void run_quality_map(const ExperimentConfig& config_hv,
                     const ExperimentConfig& config_vv,
                     const std::filesystem::path& out_dir, int workers,
                     int bin, double kernel_area) {
  // The two configs must be the same experiment up to polarization.
  ExperimentConfig a = config_hv;
  ExperimentConfig b = config_vv;
  a.setting.pol_angle_deg = 0.0;
  b.setting.pol_angle_deg = 0.0;
  if (config_to_json_text(a) != config_to_json_text(b))
    throw std::invalid_argument(
        "quality map configs differ beyond polarization");

  std::filesystem::create_directories(out_dir / "maps");

  StackPair hv = simulate_stack_pair(config_hv, config_hv.setting,
                                     config_hv.frames, StreamTag::QualityHV, 0,
                                     workers);
  StackPair vv = simulate_stack_pair(config_vv, config_vv.setting,
                                     config_vv.frames, StreamTag::QualityVV, 0,
                                     workers);

  Grid2D hv_map = covariance_map_2d(hv.camera1, hv.camera2, bin, kernel_area);
  Grid2D vv_map = covariance_map_2d(vv.camera1, vv.camera2, bin, kernel_area);
  // Images from different shots carry no true covariance: pair frame f of
  // camera 1 with frame f+1 of camera 2.
  Grid2D indep_map =
      covariance_map_2d(vv.camera1, vv.camera2, bin, kernel_area, 1);

  double hv_max = 0.0;
  for (double v : hv_map.data()) hv_max = std::max(hv_max, v);
  if (hv_max > 0.0) {
    for (double& v : hv_map.data()) v /= hv_max;
    for (double& v : vv_map.data()) v /= hv_max;
    for (double& v : indep_map.data()) v /= hv_max;
  }

  write_grid(hv_map, out_dir / "maps" / "hv",
             "covariance map, crossed polarizations (HV), normalized to HV max");
  write_grid(vv_map, out_dir / "maps" / "vv",
             "covariance map, parallel polarizations (VV), normalized to HV max");
  write_grid(indep_map, out_dir / "maps" / "indep",
             "covariance map between independent shots, normalized to HV max");
  write_grid(map_difference(indep_map, hv_map),
             out_dir / "maps" / "fall_indep_minus_hv",
             "coincidence fall map: independent shots minus HV");
  write_grid(map_difference(vv_map, hv_map),
             out_dir / "maps" / "fall_vv_minus_hv",
             "coincidence fall map: VV minus HV (interference quality)");
}

void analyze_stacks(const std::filesystem::path& stack1_path,
                    const std::filesystem::path& stack2_path,
                    const std::filesystem::path& out_dir) {
  const FrameStack s1 = read_stack(stack1_path);
  const FrameStack s2 = read_stack(stack2_path);
  std::filesystem::create_directories(out_dir);

  const CorrelationMap c12 = inter_image_correlation(s1, s2);
  const CorrelationMap c11 = intra_image_correlation(s1);
  const CorrelationMap c22 = intra_image_correlation(s2);
  write_grid(c12.grid, out_dir / "c12", "inter-image correlation map C12");
  write_grid(c11.grid, out_dir / "c11", "intra-image correlation map C11");
  write_grid(c22.grid, out_dir / "c22", "intra-image correlation map C22");

  // Peak statistics over a central window (fallback half-width 6 pixels).
  const double d = s1.camera.nu_per_pixel;
  const double h = 6.5 * d;
  const WindowNu window{-h, h, -h, h};
  auto peak_json = [&](const CorrelationMap& map) {
    const PeakStats p = integrate_peak(map, window);
    return json{{"centroid_x", p.centroid_x},
                {"centroid_y", p.centroid_y},
                {"sigma_x", p.sigma_x},
                {"sigma_y", p.sigma_y},
                {"integral", p.integral}};
  };
  const json report{{"stack1", stack1_path.string()},
                    {"stack2", stack2_path.string()},
                    {"frames", static_cast<int>(s1.frames.size())},
                    {"window",
                     {{"x_lo", window.x_lo},
                      {"x_hi", window.x_hi},
                      {"y_lo", window.y_lo},
                      {"y_hi", window.y_hi}}},
                    {"c12_peak", peak_json(c12)},
                    {"c11_peak", peak_json(c11)},
                    {"c22_peak", peak_json(c22)}};
  write_text_atomic(out_dir / "analysis.json", report.dump(2) + "\n");
}

}  // namespace homsim
