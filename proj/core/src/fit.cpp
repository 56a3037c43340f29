#include "homsim/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace homsim {

namespace {

using Params = std::array<double, 3>;  // a, b, sigma

struct ModelEval {
  double value = 0.0;
  Params jacobian{};  // d value / d param
};

ModelEval eval_model(FitShape shape, const Params& p, double x) {
  ModelEval m;
  const double a = p[0], b = p[1], sigma = p[2];
  switch (shape) {
    case FitShape::GaussianDip:
    case FitShape::GaussianPeak: {
      const double sign = (shape == FitShape::GaussianDip) ? -1.0 : 1.0;
      const double e = std::exp(-x * x / (sigma * sigma));
      m.value = a + sign * b * e;
      m.jacobian[0] = 1.0;
      m.jacobian[1] = sign * e;
      m.jacobian[2] = sign * b * e * 2.0 * x * x / (sigma * sigma * sigma);
      break;
    }
    case FitShape::Cos2: {
      const double c = std::cos(x * std::numbers::pi / 180.0);
      m.value = a - b * c * c;
      m.jacobian[0] = 1.0;
      m.jacobian[1] = -c * c;
      m.jacobian[2] = 0.0;
      break;
    }
  }
  return m;
}

int param_count(FitShape shape) { return shape == FitShape::Cos2 ? 2 : 3; }

double chi_square(FitShape shape, const Params& p, const std::vector<double>& x,
                  const std::vector<double>& y, const std::vector<double>& w) {
  double chi2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - eval_model(shape, p, x[i]).value;
    chi2 += w[i] * r * r;
  }
  return chi2;
}

// Solves the k x k system M s = g in place; returns false when singular.
bool solve(std::array<std::array<double, 3>, 3>& m, std::array<double, 3>& g, int k) {
  for (int col = 0; col < k; ++col) {
    int pivot = col;
    for (int row = col + 1; row < k; ++row)
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    if (std::abs(m[pivot][col]) < 1e-300) return false;
    std::swap(m[col], m[pivot]);
    std::swap(g[col], g[pivot]);
    for (int row = 0; row < k; ++row) {
      if (row == col) continue;
      const double f = m[row][col] / m[col][col];
      for (int c = col; c < k; ++c) m[row][c] -= f * m[col][c];
      g[row] -= f * g[col];
    }
  }
  for (int i = 0; i < k; ++i) g[i] /= m[i][i];
  return true;
}

}  // namespace

FitResult fit_dip(const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& yerr, FitShape shape) {
  const std::size_t n = x.size();
  if (n < 5 || y.size() != n)
    throw std::invalid_argument("fit_dip: need >= 5 points with matching sizes");
  if (!yerr.empty() && yerr.size() != n)
    throw std::invalid_argument("fit_dip: yerr size mismatch");

  std::vector<double> w(n, 1.0);
  const bool weighted = !yerr.empty();
  if (weighted)
    for (std::size_t i = 0; i < n; ++i) {
      if (yerr[i] < 0.0) throw std::invalid_argument("fit_dip: negative error");
      w[i] = yerr[i] > 0.0 ? 1.0 / (yerr[i] * yerr[i]) : 1.0;
    }

  const double ymax = *std::max_element(y.begin(), y.end());
  const double ymin = *std::min_element(y.begin(), y.end());
  const double xmax = *std::max_element(x.begin(), x.end());
  const double xmin = *std::min_element(x.begin(), x.end());

  Params p{};
  switch (shape) {
    case FitShape::GaussianDip:
    case FitShape::Cos2:
      p = {ymax, ymax - ymin, 0.5 * (xmax - xmin)};
      break;
    case FitShape::GaussianPeak:
      p = {ymin, ymax - ymin, 0.5 * (xmax - xmin)};
      break;
  }
  if (p[2] <= 0.0) p[2] = 1.0;

  const int k = param_count(shape);
  const int max_iterations = 200;
  const double rel_tol = 1e-10;
  double lambda = 1e-3;
  double chi2 = chi_square(shape, p, x, y, w);
  bool converged = false;
  int iter = 0;

  for (; iter < max_iterations; ++iter) {
    std::array<std::array<double, 3>, 3> jtj{};
    std::array<double, 3> jtr{};
    for (std::size_t i = 0; i < n; ++i) {
      const ModelEval m = eval_model(shape, p, x[i]);
      const double r = y[i] - m.value;
      for (int a = 0; a < k; ++a) {
        jtr[a] += w[i] * m.jacobian[a] * r;
        for (int b = 0; b < k; ++b)
          jtj[a][b] += w[i] * m.jacobian[a] * m.jacobian[b];
      }
    }

    bool improved = false;
    for (int attempt = 0; attempt < 30 && !improved; ++attempt) {
      auto damped = jtj;
      auto g = jtr;
      for (int a = 0; a < k; ++a) damped[a][a] *= 1.0 + lambda;
      if (!solve(damped, g, k)) {
        lambda *= 10.0;
        continue;
      }
      Params trial = p;
      for (int a = 0; a < k; ++a) trial[a] += g[a];
      trial[2] = std::abs(trial[2]);
      const double trial_chi2 = chi_square(shape, trial, x, y, w);
      if (trial_chi2 <= chi2) {
        improved = true;
        const double drop = chi2 - trial_chi2;
        p = trial;
        lambda = std::max(lambda * 0.3, 1e-12);
        if (drop <= rel_tol * std::max(chi2, 1e-300)) {
          chi2 = trial_chi2;
          converged = true;
        }
        chi2 = trial_chi2;
      } else {
        lambda *= 10.0;
      }
    }
    if (converged || !improved) {
      converged = converged || !improved;
      break;
    }
  }

  FitResult result;
  result.shape = shape;
  result.baseline = p[0];
  result.depth = p[1];
  result.sigma = (k == 3) ? p[2] : 0.0;
  result.iterations = iter;
  result.converged = converged;
  result.residual_norm = std::sqrt(chi2);

  // Parameter covariance from the Jacobian at the solution. With supplied
  // errors the covariance is (J^T W J)^-1; with uniform weights it is
  // scaled by the reduced chi^2.
  {
    std::array<std::array<double, 3>, 3> jtj{};
    for (std::size_t i = 0; i < n; ++i) {
      const ModelEval m = eval_model(shape, p, x[i]);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          jtj[a][b] += w[i] * m.jacobian[a] * m.jacobian[b];
    }
    const double scale =
        weighted ? 1.0
                 : (n > static_cast<std::size_t>(k)
                        ? chi2 / static_cast<double>(n - k)
                        : 0.0);
    std::array<double, 3> var{};
    std::array<double, 3> cov_ab_col{};
    // Invert column by column.
    for (int col = 0; col < k; ++col) {
      auto m = jtj;
      std::array<double, 3> e{};
      e[col] = 1.0;
      if (solve(m, e, k)) {
        var[col] = e[col] * scale;
        if (col == 0) cov_ab_col = e;  // first column of the inverse
      }
    }
    result.baseline_err = var[0] > 0.0 ? std::sqrt(var[0]) : 0.0;
    result.depth_err = var[1] > 0.0 ? std::sqrt(var[1]) : 0.0;
    result.sigma_err = (k == 3 && var[2] > 0.0) ? std::sqrt(var[2]) : 0.0;

    const double a = result.baseline;
    const double b = result.depth;
    const double cov_ab = cov_ab_col[1] * scale;
    if (shape == FitShape::GaussianPeak) {
      // V = b/(a+b); dV/da = -b/(a+b)^2, dV/db = a/(a+b)^2.
      const double s = a + b;
      result.visibility = s != 0.0 ? b / s : 0.0;
      if (s != 0.0) {
        const double da = -b / (s * s), db = a / (s * s);
        result.visibility_err = std::sqrt(std::max(
            0.0, da * da * var[0] + db * db * var[1] + 2.0 * da * db * cov_ab));
      }
    } else if (shape == FitShape::Cos2 && b < 0.0) {
      // Rising modulation (depth fitted negative): the curve maximum is
      // a - b, so V = |b| / (a - b); dV/da = b/(a-b)^2, dV/db = -a/(a-b)^2.
      const double s = a - b;
      result.visibility = s != 0.0 ? -b / s : 0.0;
      if (s != 0.0) {
        const double da = b / (s * s), db = -a / (s * s);
        result.visibility_err = std::sqrt(std::max(
            0.0, da * da * var[0] + db * db * var[1] + 2.0 * da * db * cov_ab));
      }
    } else {
      result.visibility = a != 0.0 ? b / a : 0.0;
      if (a != 0.0) {
        const double da = -b / (a * a), db = 1.0 / a;
        result.visibility_err = std::sqrt(std::max(
            0.0, da * da * var[0] + db * db * var[1] + 2.0 * da * db * cov_ab));
      }
    }
    // Visibility is a ratio of physical rates; clamp to [0, 1] and report
    // the raw value through baseline/depth.
    result.visibility = std::clamp(result.visibility, 0.0, 1.0);
  }

  if (!result.converged)
    throw FitError("fit_dip: no convergence within iteration cap", result);
  return result;
}

}  // namespace homsim
