#pragma once

#include <string>
#include <vector>

#include "lace/engine.hpp"

namespace lace {

struct GaussianRow {
  std::vector<double> k_scaled;
  double f_scaled = 0.0;  // f_n(k / sqrt(v sigma^2 n); z_c)
  double gaussian = 0.0;  // A exp(-k^2 / 2d)
  double deviation = 0.0;
  bool in_region = true;
};

struct GaussianCheckResult {
  int n = 0;
  double admissible_a = 0.0;  // gamma log(n)/n
  double max_deviation = 0.0;
  int included = 0, excluded = 0;
  std::vector<GaussianRow> rows;
};

/// Evolves at the scaled points k / sqrt(v sigma^2 n) and compares against
/// A exp(-k^2/2d).  Points outside a(k) <= gamma log(n)/n are excluded and
/// counted.  The gamma is the certifier's gamma.
std::vector<GaussianCheckResult> gaussian_profile(
    const ModelCoefficients& model, const LimitConstants& constants,
    const std::vector<int>& n_list,
    const std::vector<std::vector<double>>& kgrid_scaled, double gamma);

struct GaussianEnvelope {
  double slope = 0.0;      // log-log slope of per-n max deviation
  double C_k2 = 0.0;       // coefficient of k^2 n^-delta
  double C_theta = 0.0;    // coefficient of n^(-theta+2)
  double residual_rms = 0.0;
  double window_lo = 0.0, window_hi = 0.0;
};
GaussianEnvelope fit_gaussian_envelope(const std::vector<GaussianCheckResult>& res,
                                       double theta, double delta);

struct HessianRatioRow {
  int n = 0;
  double ratio = 0.0;  // -lap f_n(0) / (f_n(0) v sigma^2 n)
};
struct HessianRatioResult {
  std::vector<HessianRatioRow> rows;
  double fitted_exponent = 0.0;  // of |ratio - 1| in n
};
HessianRatioResult hessian_ratio(const ModelCoefficients& model,
                                 const LimitConstants& constants,
                                 const std::vector<int>& n_list);

struct RootResult {
  double z_root = 0.0;
  double residual = 0.0;
  int iterations = 0;
  int m_truncation = 0;
};

/// Bisection root of 1 - z - G(z) with G(z) = sum_{m>=2} g_m(0;z), summed
/// with the shared adaptive/optimal truncation policy.
RootResult zc_from_susceptibility(const ModelCoefficients& model, double z_lo,
                                  double z_hi, double tol,
                                  const SeriesOptions& sopt = {});

struct ChiRow {
  double z = 0.0;
  double chi_N = 0.0;
  double closed_form = 0.0;
  double rel_gap = 0.0;
};
struct ChiIdentityResult {
  std::vector<ChiRow> rows;
  double z_c_prime = 0.0;
  double divergence_exponent = 0.0;  // closed form vs (z_c' - z)
};

/// chi_N partial sums against (1+E)/(1-z-G) per z, plus the fitted
/// divergence exponent of chi near z_c'.
ChiIdentityResult chi_identity_check(const ModelCoefficients& model,
                                     const std::vector<double>& z_list, int N);

/// prod_{i<=n} [1 + r_i(0)] at z_c, computed through the ratio sequence.
double a_product(const ModelCoefficients& model, double z_c, int n);

std::string gaussian_to_csv(const std::vector<GaussianCheckResult>& res);
std::string chi_to_csv(const ChiIdentityResult& res);

}  // namespace lace
