// Command line front end: reference run, parameter scans, quality maps,
// noise budget and stack analysis.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 I/O or file
// format error, 3 fit non-convergence.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "homsim/config.hpp"
#include "homsim/homf.hpp"
#include "homsim/model.hpp"
#include "homsim/scan.hpp"
#include "homsim/snr.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int frames = 0;  // 0 = use config value
  int workers = 0; // 0 = hardware concurrency
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_frames = true) {
  cmd->add_option("--config", opts.config_path, "JSON configuration file");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "master seed override")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  if (with_frames)
    cmd->add_option("--frames", opts.frames, "frames per acquisition")
        ->check(CLI::PositiveNumber);
  cmd->add_option("--workers", opts.workers, "worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
}

homsim::ExperimentConfig load_config(const CommonOpts& opts) {
  homsim::ExperimentConfig cfg =
      opts.config_path.empty()
          ? homsim::config_from_json_text("")
          : homsim::parse_config(opts.config_path);
  if (opts.seed_set) cfg.master_seed = opts.seed;
  if (opts.frames > 0) cfg.frames = opts.frames;
  return cfg;
}

std::vector<double> parse_points(const std::string& csv) {
  std::vector<double> points;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    const std::string token =
        csv.substr(pos, comma == std::string::npos ? std::string::npos
                                                   : comma - pos);
    std::size_t consumed = 0;
    points.push_back(std::stod(token, &consumed));
    if (consumed != token.size())
      throw std::invalid_argument("bad number in --points: '" + token + "'");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return points;
}

int run_reference_cmd(const CommonOpts& opts) {
  const homsim::ExperimentConfig cfg = load_config(opts);
  const homsim::ReferenceResult ref =
      homsim::run_reference(cfg, opts.out_dir, opts.workers);
  std::printf("reference: %d frames written to %s\n", ref.frames,
              opts.out_dir.c_str());
  std::printf("  mean window sum     %.6g counts/frame\n", ref.mean_window_sum);
  std::printf("  pair detection      %.4f\n", ref.pair_detection_ratio);
  std::printf("  peak sigma (x, y)   %.4g, %.4g mm^-1\n", ref.c0_peak.sigma_x,
              ref.c0_peak.sigma_y);
  return 0;
}

int run_scan_cmd(const CommonOpts& opts, const std::string& variable,
                 const std::string& points_csv) {
  const homsim::ExperimentConfig cfg = load_config(opts);
  homsim::ScanPlan plan;
  plan.variable = homsim::scan_variable_from_name(variable);
  plan.points = parse_points(points_csv);
  plan.frames_per_point = cfg.frames;
  plan.out_dir = opts.out_dir;
  const homsim::ScanOutputs out = homsim::run_scan(cfg, plan, opts.workers);
  std::printf("scan %s: %zu points -> %s\n", out.curve.variable.c_str(),
              out.curve.control.size(), out.curve_csv.string().c_str());
  std::printf("  R12     visibility %.4f +- %.4f  sigma %.4g\n",
              out.fit_r12.visibility, out.fit_r12.visibility_err,
              out.fit_r12.sigma);
  std::printf("  R11+22  visibility %.4f +- %.4f  sigma %.4g\n",
              out.fit_r11p22.visibility, out.fit_r11p22.visibility_err,
              out.fit_r11p22.sigma);
  if (!out.fits_converged) {
    std::fprintf(stderr, "error: at least one fit did not converge\n");
    return 3;
  }
  return 0;
}

int run_qualitymap_cmd(const CommonOpts& opts) {
  homsim::ExperimentConfig hv = load_config(opts);
  homsim::ExperimentConfig vv = hv;
  hv.setting.pol_angle_deg = 90.0;  // crossed: interference suppressed
  vv.setting.pol_angle_deg = 0.0;   // parallel: full interference
  homsim::run_quality_map(hv, vv, opts.out_dir, opts.workers);
  std::printf("quality maps written to %s/maps\n", opts.out_dir.c_str());
  return 0;
}

int run_snr_cmd(const CommonOpts& opts, double m, double pixels_per_cell,
                double peak_pixels, double pair_ratio) {
  const homsim::ExperimentConfig cfg = load_config(opts);
  const double n_frames = static_cast<double>(cfg.frames);
  const homsim::SNRBudget b = homsim::snr_budget(m, n_frames, pixels_per_cell,
                                                 peak_pixels, pair_ratio);
  std::printf("noise budget (m=%.4g, N=%.6g, P=%.6g, P'=%.6g, ratio=%.4g)\n",
              b.mean_photons_per_pixel, b.n_frames, b.pixels_per_cell,
              b.peak_integral_pixels, b.pair_ratio);
  std::printf("  covariance noise std  %.6g\n", b.noise_std);
  std::printf("  twin-photon signal    %.6g\n", b.twin_signal);
  std::printf("  SNR after binning     %.4g\n", b.snr);
  return 0;
}

int run_analyze_cmd(const std::string& stack1, const std::string& stack2,
                    const std::string& out_dir) {
  homsim::analyze_stacks(stack1, stack2, out_dir);
  std::printf("analysis written to %s/analysis.json\n", out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon interference simulator and analysis toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;

  CLI::App* ref_cmd =
      app.add_subcommand("reference", "acquire the no-beamsplitter reference");
  add_common(ref_cmd, opts);

  std::string variable = "delta_t";
  std::string points_csv;
  CLI::App* scan_cmd = app.add_subcommand(
      "scan", "scan one interferometer variable against the reference");
  add_common(scan_cmd, opts);
  scan_cmd
      ->add_option("--variable", variable,
                   "delta_t | pol_angle | delta_nu_x | delta_nu_y")
      ->required();
  scan_cmd->add_option("--points", points_csv, "comma-separated control values")
      ->required();

  CLI::App* quality_cmd = app.add_subcommand(
      "qualitymap", "HV/VV covariance maps and coincidence-fall maps");
  add_common(quality_cmd, opts);

  double snr_m = 0.12, snr_p = 529.0, snr_pp = 27.0, snr_ratio = 0.13;
  CLI::App* snr_cmd =
      app.add_subcommand("snr", "covariance noise budget for given statistics");
  add_common(snr_cmd, opts);
  snr_cmd->add_option("--mean-photons", snr_m, "mean photons per pixel (m)");
  snr_cmd->add_option("--pixels", snr_p, "pixels averaged per cell (P)");
  snr_cmd->add_option("--peak-pixels", snr_pp,
                      "effective pixels under the correlation peak (P')");
  snr_cmd->add_option("--pair-ratio", snr_ratio,
                      "detected-pair fraction feeding the peak");

  std::string stack1, stack2;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "correlation maps from existing stacks");
  analyze_cmd->add_option("stack1", stack1, "camera 1 .homf stack")->required();
  analyze_cmd->add_option("stack2", stack2, "camera 2 .homf stack")->required();
  analyze_cmd->add_option("--out", opts.out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ref_cmd->parsed()) return run_reference_cmd(opts);
    if (scan_cmd->parsed()) return run_scan_cmd(opts, variable, points_csv);
    if (quality_cmd->parsed()) return run_qualitymap_cmd(opts);
    if (snr_cmd->parsed())
      return run_snr_cmd(opts, snr_m, snr_p, snr_pp, snr_ratio);
    if (analyze_cmd->parsed()) return run_analyze_cmd(stack1, stack2, opts.out_dir);
  } catch (const homsim::FitError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const homsim::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const homsim::FormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
