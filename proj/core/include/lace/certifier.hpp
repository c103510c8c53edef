#pragma once

#include <utility>
#include <vector>

#include "lace/engine.hpp"
#include "lace/quadrature.hpp"
#include "lace/report.hpp"

namespace lace {

/// beta = L^(-d/p*), the small parameter of the spread-out regime.
double compute_beta(int L, int d, double pstar);

/// C_e / C_g supplied as a constant or as a (K, C) table with linear
/// interpolation; no functional form is prescribed.
struct ConstFn {
  double value = 0.0;
  std::vector<std::pair<double, double>> table;  // sorted by K
  double operator()(double K) const;
};

struct InductionConfig {
  int d = 5;
  double theta = 2.5;
  double epsilon = 0.4;
  double pstar = 2.0;
  std::vector<double> p_list{2.0};
  double gamma = 0.2;
  double delta = 0.15;
  double lambda = 2.4;
  double K1 = 5, K2 = 15, K3 = 500, K4 = 40, K5 = 400;
  double c = 1.0;  // constant entering K4' = max(Ce(c K4), Cg(c K4), K4)
  ConstFn Ce, Cg;
  double beta = 0.0;
  double gg_ratio = 10.0;  // how large "much greater" must be

  double K4prime() const;
};

/// Every ordering constraint on (epsilon, gamma, delta, lambda) and the K's
/// becomes a record; failures are records, never exceptions.
CertificateReport validate_config(const InductionConfig& cfg);

/// |f_m(0)| <= K, |lap f_m(0)| <= K sigma^2 m, and per p in the config's
/// p-list ||D^2 f_m||_p <= K L^(-d/p) m^(-(d/2p ^ theta)), for m <= n.
CertificateReport check_fbdsp(const ModelCoefficients& model,
                              const RecursionTrace& trace,
                              const InductionConfig& cfg, double K, int n,
                              const QuadratureSpec& qspec);

/// The six coefficient bound families for 2 <= m <= n+1 on the given k grid:
/// |e_m|, |e_m(k)-e_m(0)|, |g_m|, |lap g_m(0)|, |d_z g_m(0)| (exact evaluator
/// preferred, else centered difference), and the Taylor remainder in a(k)
/// for each requested eps'.
CertificateReport check_assumptions_EG(const ModelCoefficients& model, double z,
                                       const InductionConfig& cfg, double Ce,
                                       double Cg, int n,
                                       const std::vector<FourierPoint>& kgrid,
                                       const std::vector<double>& eps_prime_list);

struct FittedEGConstants {
  double Ce = 0.0, Cg = 0.0;
};
FittedEGConstants fit_EG_constants(const ModelCoefficients& model, double z,
                                   const InductionConfig& cfg, int n,
                                   const std::vector<FourierPoint>& kgrid,
                                   const std::vector<double>& eps_prime_list);

/// Largest j <= N with a <= gamma log(j)/j (0 when none).  At j = 1 the
/// admissible set degenerates to a = 0.
int h3_jmax(double a, double gamma, int N);

/// The four induction hypotheses on a computed trace.  Every (j, k) pair is
/// classified into exactly one regime by a(k) vs gamma log(j)/j; coverage
/// counters and warnings land in the report meta.
CertificateReport check_H1_H4(const RecursionTrace& trace, const StepKernel& D,
                              const InductionConfig& cfg);

struct FittedHConstants {
  double K1 = 0, K2 = 0, K3 = 0, K4 = 0, K5 = 0;
};
FittedHConstants fit_H_constants(const RecursionTrace& trace, const StepKernel& D,
                                 const InductionConfig& cfg);

/// |f_j(k)| <= e^(C K3 beta) e^(-(1 - C(K2+K3) beta) j a(k)) on the small-a
/// regime; evaluated in log scale so large C stays finite.
CertificateReport check_lemma_cA(const RecursionTrace& trace, const StepKernel& D,
                                 const InductionConfig& cfg, double C);
double fit_lemma_cA(const RecursionTrace& trace, const StepKernel& D,
                    const InductionConfig& cfg);

/// |lap f_j(0)| <= (1 + C (K2+K3) beta) sigma^2 j.
CertificateReport check_lemma_fder(const RecursionTrace& trace,
                                   const InductionConfig& cfg, double C);
double fit_lemma_fder(const RecursionTrace& trace, const InductionConfig& cfg);

struct ConvCase {
  double rate = 0.0;
  std::string label;
};
/// Strongest applicable decay case for S(n) = sum m^-a sum j^-b.
ConvCase conv_lemma_case(double a, double b);

/// Brute-force S(n) over n <= n_max; certifies that S(n) n^rate stays
/// bounded (fitted log-log slope over the last decade below the threshold).
CertificateReport check_conv_lemma(double a, double b, long n_max,
                                   double slope_threshold = 0.02);

}  // namespace lace
