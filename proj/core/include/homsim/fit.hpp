#pragma once
// Nonlinear least-squares fitting of scan curves: Gaussian dip, Gaussian
// peak or polarization cos^2 modulation, via Levenberg-Marquardt with
// analytic Jacobians.

#include <stdexcept>
#include <string>
#include <vector>

namespace homsim {

struct ScanCurve {
  std::string variable;  // delta_t | pol_angle | delta_nu_x | delta_nu_y
  std::vector<double> control;
  std::vector<double> r12;
  std::vector<double> r12_err;
  std::vector<double> r11p22;
  std::vector<double> r11p22_err;
};

enum class FitShape {
  GaussianDip,   // a - b exp(-x^2 / sigma^2)
  GaussianPeak,  // a + b exp(-x^2 / sigma^2)
  Cos2,          // a - b cos^2(x), x in degrees
};

struct FitResult {
  FitShape shape = FitShape::GaussianDip;
  double baseline = 0.0;      // a
  double depth = 0.0;         // b
  double sigma = 0.0;         // unused for Cos2
  double visibility = 0.0;    // b/a (dip, cos2) or b/(a+b) (peak)
  double baseline_err = 0.0;
  double depth_err = 0.0;
  double sigma_err = 0.0;
  double visibility_err = 0.0;
  double residual_norm = 0.0;  // sqrt(chi^2)
  int iterations = 0;
  bool converged = false;
};

class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, FitResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const FitResult& best() const { return best_; }

 private:
  FitResult best_;
};

// Weighted least squares; empty yerr means uniform weights. Requires at
// least 5 points. Throws FitError (carrying the best attempt) when the
// iteration cap is hit before the relative chi^2 tolerance of 1e-10.
FitResult fit_dip(const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& yerr, FitShape shape);

}  // namespace homsim
