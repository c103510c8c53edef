#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lace/fourier_point.hpp"
#include "lace/model.hpp"

namespace lace {

struct EvolveOptions {
  bool compensated = false;     // Kahan sums inside the m-convolution
  bool with_z_sequence = true;  // also run the critical-point recursion
  bool with_hessian = true;     // propagate the exact Hessian at k = 0
};

/// Everything the recursion produces, per n up to N: f_n at each stored k,
/// the Hessian sequence at 0, the velocity data b_n, c_n, v_n, zeta_n, and
/// the critical-point sequence z_0..z_N.  Immutable once built.
struct RecursionTrace {
  double z = 0.0;
  int N = 0;
  int dim = 0;
  int range = 0;
  double sigma2 = 0.0;
  std::vector<FourierPoint> kset;       // kset[0] is the origin
  std::vector<double> gap;              // a(k) per kset entry
  std::vector<std::vector<double>> f;   // f[ki][n]
  std::vector<double> lap_f;            // Hessian trace at 0, per n
  std::vector<double> b, c, v;          // index 0..N, b0=v0=1, c0=0
  std::vector<double> zeta;             // zeta[n] = sum_{m<=n} g_m(0;z) - 1
  std::vector<double> z_seq;            // z_0..z_N (empty when disabled)

  double f0(int n) const { return f[0][n]; }
  int k_index(const FourierPoint& k) const;  // exact match, throws if absent
};

/// Solves f_{n+1}(k) = sum_{m=1}^{n+1} g_m(k;z) f_{n+1-m}(k) + e_{n+1}(k;z),
/// independently at each k of kset (the recursion is diagonal in k).
/// kset[0] must be the origin.
RecursionTrace evolve(const ModelCoefficients& model, double z,
                      std::vector<FourierPoint> kset, int N,
                      const EvolveOptions& opt = {});

/// Hessian-at-zero sequence via the differentiated recursion:
///   lap f_{n+1} = sum_m [g_lap_m f_{n+1-m}(0) + g_m(0) lap f_{n+1-m}] + e_lap_{n+1}.
std::vector<double> evolve_hessian(const ModelCoefficients& model, double z, int N);

/// z_0 = z_1 = 1, z_{n+1} = 1 - sum_{m=2}^{n+1} g_m(0; z_n).
std::vector<double> zn_sequence(const ModelCoefficients& model, int N);

struct CriticalPointResult {
  double z_c = 0.0;
  double error_bound = 0.0;
  int n_used = 0;
  // False when the increment sequence bottomed out before the tolerance was
  // reached (coefficient series divergent past its optimal truncation).
  bool tail_converged = true;
};

/// Runs the z_n recursion until the fitted tail bound drops below tol.
/// The bound comes from the observed power-law decay of |z_{j+1} - z_j|.
CriticalPointResult critical_point(const ModelCoefficients& model, int max_n,
                                   double tol);

/// zeta_{n+1}(z) = sum_{m=1}^{n+1} g_m(0;z) - 1, for n >= 0.
double zeta(const ModelCoefficients& model, double z, int n);

struct LimitConstants {
  double z_c = 0.0;
  double A = 1.0;
  double v = 1.0;
  std::map<std::string, double> residuals;
  double tail_tol = 0.0;
  int M_used = 0;
  int M_max = 0;
  std::string to_json_string(int indent = 2) const;
};

/// A = (1 + sum e_m(0;z_c)) / (sum m g_m(0;z_c)),
/// v = -sum lap g_m(0;z_c) / (sigma^2 sum m g_m(0;z_c)),
/// residual of 1 = sum g_m(0;z_c) reported alongside the truncation tails.
LimitConstants constants_Av(const ModelCoefficients& model, double z_c, int M_max,
                            double tail_tol);

struct SusceptibilityResult {
  double z = 0.0;
  int N = 0;
  double chi_N = 0.0;        // partial sum of f_n(0;z)
  double closed_form = 0.0;  // (1 + E) / (1 - z - G)
  double E = 0.0, G = 0.0;
  bool diverging = false;    // partial sums still growing at N
};
SusceptibilityResult susceptibility(const ModelCoefficients& model, double z, int N);

/// r_{i}(k) = f_i(k)/f_{i-1}(k) - 1 + v_i a(k), i = 1..N (entry 0 unused).
std::vector<double> extract_r(const RecursionTrace& t, int k_index);

/// s_i(k) = [1 + r_i(0)]^{-1} [v_i a(k) r_i(0) + (r_i(k) - r_i(0))].
std::vector<double> extract_s(const RecursionTrace& t, int k_index);

/// f_j(0) * prod_{i<=j} [1 - v_i a(k) + s_i(k)]; equals f_j(k) identically.
double reconstruct_from_s(const RecursionTrace& t, int k_index, int j);

struct Interval {
  double lo = 0.0, hi = 0.0;
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// I_n = [z_n - K1 beta n^{-theta+1}, z_n + K1 beta n^{-theta+1}], n = 1..N.
std::vector<Interval> nested_intervals(const std::vector<double>& z_seq,
                                       double K1beta, double theta);

std::string trace_to_csv(const RecursionTrace& t);

// Adaptive order-sum with optimal truncation for series whose terms stop
// decreasing (coefficient families evaluated above their convergence radius).
struct SeriesOptions {
  int max_m = 200000;
  double term_tol = 0.0;  // stop once |term| < term_tol (0 = never)
  bool stop_on_growth = true;
  int growth_patience = 3;
};
struct SeriesSum {
  double value = 0.0;
  int m_stop = 0;  // last order included
  double last_term = 0.0;
  bool truncated_by_growth = false;
};
SeriesSum sum_series(const std::function<double(int)>& term, int m_begin,
                     const SeriesOptions& opt);

}  // namespace lace
