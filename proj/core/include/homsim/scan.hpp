#pragma once
// Orchestration of virtual experiments: the no-beamsplitter reference run,
// parameter scans with per-point resumable outputs, quality maps and
// analysis of existing stacks.
//
// Output directory layout (fixed):
//   <out>/config.json               config snapshot
//   <out>/reference/c0_cam1.homf    reference stacks
//   <out>/reference/c0_cam2.homf
//   <out>/reference/stats.json      C0 peak statistics and window
//   <out>/scans/<variable>/point_NNN.json
//   <out>/scans/<variable>/curve.csv
//   <out>/scans/<variable>/fit.json
//   <out>/maps/*.f64 + *.txt        quality maps (binary float64 + sidecar)

#include <filesystem>
#include <vector>

#include "homsim/config.hpp"
#include "homsim/correlation.hpp"
#include "homsim/fit.hpp"
#include "homsim/simulate.hpp"

namespace homsim {

enum class ScanVariable { DeltaT, PolAngle, DeltaNuX, DeltaNuY };

const char* scan_variable_name(ScanVariable v);
ScanVariable scan_variable_from_name(const std::string& name);

struct ScanPlan {
  ScanVariable variable = ScanVariable::DeltaT;
  std::vector<double> points;
  int frames_per_point = 500;
  std::filesystem::path out_dir;

  void validate() const;  // >= 5 strictly monotone points
};

struct ReferenceResult {
  PeakStats c0_peak;            // from the averaged correlation map
  double mean_window_sum = 0.0; // per-frame C0 counts in the peak window
  double pair_detection_ratio = 0.0;
  int frames = 0;
  WindowNu window;
};

// Peak window half-widths used by the reference run and all scans; derived
// from the configured sum-spread and the pixel size.
WindowNu c0_window(const ExperimentConfig& config);

ReferenceResult run_reference(const ExperimentConfig& config,
                              const std::filesystem::path& out_dir,
                              int workers);
ReferenceResult load_reference(const std::filesystem::path& out_dir);

struct ScanOutputs {
  ScanCurve curve;
  FitResult fit_r12;
  FitResult fit_r11p22;
  bool fits_converged = true;
  std::filesystem::path curve_csv;
  std::filesystem::path fit_json;
};

// Runs (or resumes) a scan; requires a prior reference run in out_dir.
ScanOutputs run_scan(const ExperimentConfig& config, const ScanPlan& plan,
                     int workers);

// HV/VV covariance quality maps plus the independent-shots reference and
// both difference maps; the two configs must agree except for the
// polarization angle.
void run_quality_map(const ExperimentConfig& config_hv,
                     const ExperimentConfig& config_vv,
                     const std::filesystem::path& out_dir, int workers,
                     int bin = 4, double kernel_area = 44.0);

// Analysis-only entry point over existing HOMF stacks.
void analyze_stacks(const std::filesystem::path& stack1_path,
                    const std::filesystem::path& stack2_path,
                    const std::filesystem::path& out_dir);

// Binary float64 grid plus a text sidecar describing the lattice.
void write_grid(const Grid2D& grid, const std::filesystem::path& base_path,
                const std::string& description);

}  // namespace homsim
