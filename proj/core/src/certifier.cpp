#include "lace/certifier.hpp"

#include <algorithm>
#include <cmath>

#include "fmt_util.hpp"
#include "lace/errors.hpp"
#include "lace/fitting.hpp"

namespace lace {

double compute_beta(int L, int d, double pstar) {
  if (L < 1 || d < 1 || pstar < 1.0)
    throw InvalidParameter("compute_beta needs L >= 1, d >= 1, p* >= 1");
  return std::pow(static_cast<double>(L), -static_cast<double>(d) / pstar);
}

double ConstFn::operator()(double K) const {
  if (table.empty()) return value;
  if (K <= table.front().first) return table.front().second;
  if (K >= table.back().first) return table.back().second;
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (K <= table[i].first) {
      const auto& [k0, c0] = table[i - 1];
      const auto& [k1, c1] = table[i];
      const double t = (K - k0) / (k1 - k0);
      return c0 + t * (c1 - c0);
    }
  }
  return table.back().second;
}

double InductionConfig::K4prime() const {
  return std::max({Ce(c * K4), Cg(c * K4), K4});
}

namespace {

CheckRecord upper(std::string id, int index, double bound, double actual) {
  return CertificateReport::upper(std::move(id), index, bound, actual);
}

// Strict lower bounds "x > y" recorded as y <= x with a note.
CheckRecord strictly_above(std::string id, double x, double y) {
  auto r = CertificateReport::upper(std::move(id), -1, x, y);
  r.note = "strict";
  return r;
}

// Observed ratio must reach the "much greater" threshold.
CheckRecord gg_record(std::string id, double ratio, double threshold) {
  auto r = CertificateReport::upper(std::move(id), -1, ratio, threshold);
  r.note = "observed ratio vs gg threshold";
  return r;
}

std::string short_num(double v) {
  std::string s = detail::fmt(v);
  return s;
}

}  // namespace

CertificateReport validate_config(const InductionConfig& cfg) {
  CertificateReport rep;
  const double one_and_eps = std::min(1.0, cfg.epsilon);

  rep.add(strictly_above("cfg.theta.gt2", cfg.theta, 2.0));
  rep.add(strictly_above("cfg.eps.positive", cfg.epsilon, 0.0));
  rep.add(strictly_above("cfg.eps.below_theta_minus_2", cfg.theta - 2.0, cfg.epsilon));
  rep.add(strictly_above("cfg.gamma.positive", cfg.gamma, 0.0));
  rep.add(strictly_above("cfg.gamma.below_1_and_eps", one_and_eps, cfg.gamma));
  rep.add(strictly_above("cfg.delta.positive", cfg.delta, 0.0));
  rep.add(strictly_above("cfg.delta.below_gap", one_and_eps - cfg.gamma, cfg.delta));
  rep.add(strictly_above("cfg.lambda.above_theta_minus_gamma", cfg.lambda,
                         cfg.theta - cfg.gamma));
  rep.add(strictly_above("cfg.lambda.below_theta", cfg.theta, cfg.lambda));
  rep.add(strictly_above("cfg.lambda.gt2", cfg.lambda, 2.0));
  rep.add(strictly_above("cfg.pstar.ge1", cfg.pstar, 1.0));
  for (std::size_t i = 0; i < cfg.p_list.size(); ++i) {
    auto r = upper("cfg.p_list.in_range", static_cast<int>(i), cfg.pstar,
                   cfg.p_list[i]);
    if (cfg.p_list[i] < 1.0) r.pass = false;
    rep.add(std::move(r));
  }

  const double K4p = cfg.K4prime();
  rep.add(gg_record("cfg.K.K3_gg_K1", cfg.K3 / cfg.K1, cfg.gg_ratio));
  rep.add(strictly_above("cfg.K.K1_gt_K4prime", cfg.K1, K4p));
  rep.add(strictly_above("cfg.K.K4prime_ge_K4", K4p, cfg.K4));
  rep.add(gg_record("cfg.K.K4_gg_1", cfg.K4, cfg.gg_ratio));
  rep.add(strictly_above("cfg.K.K2_ge_K1", cfg.K2, cfg.K1));
  rep.add(strictly_above("cfg.K.K2_ge_3K4prime", cfg.K2, 3.0 * K4p));
  rep.add(gg_record("cfg.K.K5_gg_K4", cfg.K5 / cfg.K4, cfg.gg_ratio));
  return rep;
}

CertificateReport check_fbdsp(const ModelCoefficients& model,
                              const RecursionTrace& trace,
                              const InductionConfig& cfg, double K, int n,
                              const QuadratureSpec& qspec) {
  if (n < 1 || n > trace.N)
    throw InvalidParameter("check_fbdsp: need 1 <= n <= trace.N");
  if (trace.lap_f.empty())
    throw InvalidParameter("check_fbdsp: incomplete trace, missing Hessian data");

  CertificateReport rep;
  const double s2 = trace.sigma2;
  for (int m = 1; m <= n; ++m) {
    auto r = upper("fbdsp.f0", m, K, std::abs(trace.f0(m)));
    r.constant = K;
    rep.add(std::move(r));
    auto h = upper("fbdsp.hess", m, K * s2 * m, std::abs(trace.lap_f[m]));
    h.constant = K;
    rep.add(std::move(h));
  }

  const double L = trace.range;
  const double d = trace.dim;
  const auto sweep = lp_norm_D2f(model, trace.z, n, cfg.p_list, qspec);
  rep.meta["quadrature"] = sweep.method;
  rep.meta["quadrature_nodes"] = std::to_string(sweep.nodes);
  for (const auto& row : sweep.rows) {
    if (row.n < 1) continue;
    const double expo = std::min(d / (2.0 * row.p), cfg.theta);
    const double bound =
        K * std::pow(L, -d / row.p) * std::pow(static_cast<double>(row.n), -expo);
    auto r = upper("fbdsp.norm.p=" + short_num(row.p), row.n, bound, row.norm);
    r.constant = K;
    r.note = "quad_err=" + std::to_string(row.error);
    rep.add(std::move(r));
  }
  return rep;
}

CertificateReport check_assumptions_EG(const ModelCoefficients& model, double z,
                                       const InductionConfig& cfg, double Ce,
                                       double Cg, int n,
                                       const std::vector<FourierPoint>& kgrid,
                                       const std::vector<double>& eps_prime_list) {
  if (n < 1) throw InvalidParameter("check_assumptions_EG needs n >= 1");
  if (kgrid.empty()) throw InvalidParameter("check_assumptions_EG: empty k grid");
  for (double ep : eps_prime_list)
    if (ep < 0.0 || ep > cfg.epsilon)
      throw InvalidParameter("eps' values must lie in [0, epsilon]");

  const auto& D = model.kernel();
  const double s2 = D.sigma2();
  const auto k0 = FourierPoint::zero(model.dim());
  const double beta = cfg.beta;
  CertificateReport rep;
  rep.meta["k_grid_points"] = std::to_string(kgrid.size());

  for (int m = 2; m <= n + 1; ++m) {
    const double mt = std::pow(static_cast<double>(m), -cfg.theta);
    const double mt1 = std::pow(static_cast<double>(m), -cfg.theta + 1.0);
    const double g0m = model.g(m, k0, z);
    const double e0m = model.e(m, k0, z);
    const double glap = model.g_lap(m, z);

    {
      auto r = upper("G.ii", m, Cg * s2 * beta * mt1, std::abs(glap));
      r.constant = Cg;
      rep.add(std::move(r));
    }
    {
      double dz;
      std::string note;
      if (auto exact = model.g_dz(m, z)) {
        dz = *exact;
      } else {
        const double h = 1e-6 * std::max(1.0, std::abs(z));
        dz = (model.g(m, k0, z + h) - model.g(m, k0, z - h)) / (2.0 * h);
        note = "centered difference";
      }
      auto r = upper("G.iii", m, Cg * beta * mt1, std::abs(dz));
      r.constant = Cg;
      r.note = note;
      rep.add(std::move(r));
    }

    CheckRecord gi, ei, eii;
    std::vector<CheckRecord> giv(eps_prime_list.size());
    bool first = true;
    for (const auto& k : kgrid) {
      const double a = D.gap(k);
      const double gk = model.g(m, k, z);
      const double ek = model.e(m, k, z);
      auto consider = [&](CheckRecord& rec, const char* id, double bound,
                          double actual) {
        if (first || bound - actual < rec.margin) {
          rec = upper(id, m, bound, actual);
          rec.k = k.comps();
        }
      };
      consider(gi, "G.i", Cg * beta * mt, std::abs(gk));
      consider(ei, "E.i", Ce * beta * mt, std::abs(ek));
      consider(eii, "E.ii", Ce * a * beta * mt1, std::abs(ek - e0m));
      const double remainder = std::abs(gk - g0m - a * glap / s2);
      for (std::size_t ie = 0; ie < eps_prime_list.size(); ++ie) {
        const double ep = eps_prime_list[ie];
        const double bound =
            Cg * beta * std::pow(a, 1.0 + ep) *
            std::pow(static_cast<double>(m), -cfg.theta + 1.0 + ep);
        if (first || bound - remainder < giv[ie].margin) {
          giv[ie] = upper("G.iv.eps=" + short_num(ep), m, bound, remainder);
          giv[ie].k = k.comps();
        }
      }
      first = false;
    }
    gi.constant = Cg;
    ei.constant = Ce;
    eii.constant = Ce;
    rep.add(std::move(gi));
    rep.add(std::move(ei));
    rep.add(std::move(eii));
    for (auto& r : giv) {
      r.constant = Cg;
      rep.add(std::move(r));
    }
  }
  return rep;
}

FittedEGConstants fit_EG_constants(const ModelCoefficients& model, double z,
                                   const InductionConfig& cfg, int n,
                                   const std::vector<FourierPoint>& kgrid,
                                   const std::vector<double>& eps_prime_list) {
  const auto& D = model.kernel();
  const double s2 = D.sigma2();
  const auto k0 = FourierPoint::zero(model.dim());
  const double beta = cfg.beta;
  FittedEGConstants out;
  for (int m = 2; m <= n + 1; ++m) {
    const double mt = std::pow(static_cast<double>(m), -cfg.theta);
    const double mt1 = std::pow(static_cast<double>(m), -cfg.theta + 1.0);
    const double g0m = model.g(m, k0, z);
    const double e0m = model.e(m, k0, z);
    const double glap = model.g_lap(m, z);
    out.Cg = std::max(out.Cg, std::abs(glap) / (s2 * beta * mt1));
    double dz;
    if (auto exact = model.g_dz(m, z)) {
      dz = *exact;
    } else {
      const double h = 1e-6 * std::max(1.0, std::abs(z));
      dz = (model.g(m, k0, z + h) - model.g(m, k0, z - h)) / (2.0 * h);
    }
    out.Cg = std::max(out.Cg, std::abs(dz) / (beta * mt1));
    for (const auto& k : kgrid) {
      const double a = D.gap(k);
      const double gk = model.g(m, k, z);
      const double ek = model.e(m, k, z);
      out.Cg = std::max(out.Cg, std::abs(gk) / (beta * mt));
      out.Ce = std::max(out.Ce, std::abs(ek) / (beta * mt));
      if (a > 0.0) {
        out.Ce = std::max(out.Ce, std::abs(ek - e0m) / (a * beta * mt1));
        const double remainder = std::abs(gk - g0m - a * glap / s2);
        for (double ep : eps_prime_list) {
          const double denom =
              beta * std::pow(a, 1.0 + ep) *
              std::pow(static_cast<double>(m), -cfg.theta + 1.0 + ep);
          out.Cg = std::max(out.Cg, remainder / denom);
        }
      }
    }
  }
  return out;
}

int h3_jmax(double a, double gamma, int N) {
  // gamma log(j)/j is 0 at j=1, peaks at j=3, then decreases, so scanning
  // down finds the last admissible j.
  for (int j = N; j >= 1; --j) {
    const double thr = j == 1 ? 0.0 : gamma * std::log(static_cast<double>(j)) / j;
    if (a <= thr) return j;
  }
  return 0;
}

CertificateReport check_H1_H4(const RecursionTrace& trace, const StepKernel& D,
                              const InductionConfig& cfg) {
  if (D.dim() != trace.dim) throw InvalidParameter("check_H1_H4: kernel mismatch");
  if (trace.z_seq.empty())
    throw InvalidParameter("check_H1_H4: trace lacks the z sequence");
  const int N = trace.N;
  const double beta = cfg.beta;
  CertificateReport rep;

  for (int j = 1; j <= N; ++j) {
    rep.add(upper("H1", j, cfg.K1 * beta * std::pow(j, -cfg.theta),
                  std::abs(trace.z_seq[j] - trace.z_seq[j - 1])));
  }
  for (int j = 1; j <= N; ++j) {
    rep.add(upper("H2", j, cfg.K2 * beta * std::pow(j, -cfg.theta + 1.0),
                  std::abs(trace.v[j] - trace.v[j - 1])));
  }

  // Regime split per (j, k): H3 needs the ratio remainders, H4 plain decay.
  const auto r0 = extract_r(trace, 0);
  std::vector<int> jmax(trace.kset.size(), 0);
  std::vector<std::vector<double>> rk(trace.kset.size());
  long pairs_h3 = 0, pairs_h4 = 0;
  bool any_h3_nonzero_k = false;
  for (std::size_t ki = 0; ki < trace.kset.size(); ++ki) {
    jmax[ki] = h3_jmax(trace.gap[ki], cfg.gamma, N);
    if (ki > 0 && jmax[ki] >= 1 && trace.gap[ki] > 0.0) {
      rk[ki] = extract_r(trace, static_cast<int>(ki));
      any_h3_nonzero_k = true;
    }
    pairs_h3 += jmax[ki];
    pairs_h4 += N - jmax[ki];  // regime threshold is decreasing in j past 3
  }

  for (int i = 1; i <= N; ++i) {
    rep.add(upper("H3.r0", i, cfg.K3 * beta * std::pow(i, -cfg.theta + 1.0),
                  std::abs(r0[i])));
  }
  for (int i = 1; i <= N; ++i) {
    bool have = false;
    CheckRecord worst;
    for (std::size_t ki = 1; ki < trace.kset.size(); ++ki) {
      if (rk[ki].empty() || jmax[ki] < i) continue;
      const double a = trace.gap[ki];
      const double bound = cfg.K3 * beta * a * std::pow(i, -cfg.delta);
      const double actual = std::abs(rk[ki][i] - r0[i]);
      if (!have || bound - actual < worst.margin) {
        worst = upper("H3.rk", i, bound, actual);
        worst.k = trace.kset[ki].comps();
        have = true;
      }
    }
    if (have) rep.add(std::move(worst));
  }

  for (int j = 1; j <= N; ++j) {
    const double thr =
        j == 1 ? 0.0 : cfg.gamma * std::log(static_cast<double>(j)) / j;
    bool have_f = false;
    CheckRecord wf, wdf;
    for (std::size_t ki = 0; ki < trace.kset.size(); ++ki) {
      const double a = trace.gap[ki];
      if (a <= thr) continue;  // H3 regime
      const double jb = std::pow(static_cast<double>(j), -cfg.theta);
      {
        const double bound = cfg.K4 * std::pow(a, -cfg.lambda) * jb;
        const double actual = std::abs(trace.f[ki][j]);
        if (!have_f || bound - actual < wf.margin) {
          wf = upper("H4.f", j, bound, actual);
          wf.k = trace.kset[ki].comps();
        }
      }
      {
        const double bound = cfg.K5 * std::pow(a, -cfg.lambda + 1.0) * jb;
        const double actual = std::abs(trace.f[ki][j] - trace.f[ki][j - 1]);
        if (!have_f || bound - actual < wdf.margin) {
          wdf = upper("H4.df", j, bound, actual);
          wdf.k = trace.kset[ki].comps();
        }
      }
      have_f = true;
    }
    if (have_f) {
      rep.add(std::move(wf));
      rep.add(std::move(wdf));
    }
  }

  rep.meta["pairs_h3"] = std::to_string(pairs_h3);
  rep.meta["pairs_h4"] = std::to_string(pairs_h4);
  if (!any_h3_nonzero_k)
    rep.meta["warning.h3_coverage"] =
        "no nonzero k of the k-set ever enters the small-a regime";
  if (pairs_h4 == 0)
    rep.meta["warning.h4_coverage"] = "no (j,k) pair falls in the large-a regime";
  {
    // Membership z in I_N is a precondition of the hypotheses, reported as
    // context rather than as a pass/fail record.
    const double half = cfg.K1 * beta * std::pow(static_cast<double>(N), -cfg.theta + 1.0);
    const bool inside = std::abs(trace.z - trace.z_seq[N]) <= half;
    rep.meta["z_in_I_N"] = inside ? "yes" : "no";
  }
  return rep;
}

FittedHConstants fit_H_constants(const RecursionTrace& trace, const StepKernel& D,
                                 const InductionConfig& cfg) {
  if (D.dim() != trace.dim) throw InvalidParameter("fit_H_constants: kernel mismatch");
  const int N = trace.N;
  const double beta = cfg.beta;
  FittedHConstants out;
  for (int j = 1; j <= N; ++j) {
    out.K1 = std::max(out.K1, std::abs(trace.z_seq[j] - trace.z_seq[j - 1]) *
                                  std::pow(j, cfg.theta) / beta);
    out.K2 = std::max(out.K2, std::abs(trace.v[j] - trace.v[j - 1]) *
                                  std::pow(j, cfg.theta - 1.0) / beta);
  }
  const auto r0 = extract_r(trace, 0);
  for (int i = 1; i <= N; ++i)
    out.K3 = std::max(out.K3, std::abs(r0[i]) * std::pow(i, cfg.theta - 1.0) / beta);
  for (std::size_t ki = 1; ki < trace.kset.size(); ++ki) {
    const double a = trace.gap[ki];
    const int jm = h3_jmax(a, cfg.gamma, N);
    if (jm >= 1 && a > 0.0) {
      const auto rk = extract_r(trace, static_cast<int>(ki));
      for (int i = 1; i <= jm; ++i)
        out.K3 = std::max(out.K3, std::abs(rk[i] - r0[i]) * std::pow(i, cfg.delta) /
                                      (beta * a));
    }
  }
  for (int j = 1; j <= N; ++j) {
    const double thr =
        j == 1 ? 0.0 : cfg.gamma * std::log(static_cast<double>(j)) / j;
    for (std::size_t ki = 0; ki < trace.kset.size(); ++ki) {
      const double a = trace.gap[ki];
      if (a <= thr) continue;
      const double jt = std::pow(static_cast<double>(j), cfg.theta);
      out.K4 = std::max(out.K4, std::abs(trace.f[ki][j]) * std::pow(a, cfg.lambda) * jt);
      out.K5 = std::max(out.K5, std::abs(trace.f[ki][j] - trace.f[ki][j - 1]) *
                                    std::pow(a, cfg.lambda - 1.0) * jt);
    }
  }
  return out;
}

CertificateReport check_lemma_cA(const RecursionTrace& trace, const StepKernel& D,
                                 const InductionConfig& cfg, double C) {
  if (D.dim() != trace.dim) throw InvalidParameter("check_lemma_cA: kernel mismatch");
  CertificateReport rep;
  const double beta = cfg.beta;
  const double log_floor = std::log(1e-320);
  for (int j = 1; j <= trace.N; ++j) {
    const double thr =
        j == 1 ? 0.0 : cfg.gamma * std::log(static_cast<double>(j)) / j;
    bool have = false;
    CheckRecord worst;
    for (std::size_t ki = 0; ki < trace.kset.size(); ++ki) {
      const double a = trace.gap[ki];
      if (a > thr) continue;
      const double fj = std::abs(trace.f[ki][j]);
      const double actual = fj > 0.0 ? std::log(fj) : log_floor;
      const double bound =
          C * cfg.K3 * beta - (1.0 - C * (cfg.K2 + cfg.K3) * beta) * j * a;
      if (!have || bound - actual < worst.margin) {
        worst = upper("cA", j, bound, actual);
        worst.k = trace.kset[ki].comps();
        worst.constant = C;
        worst.note = "log-scale";
        have = true;
      }
    }
    if (have) rep.add(std::move(worst));
  }
  return rep;
}

double fit_lemma_cA(const RecursionTrace& trace, const StepKernel& D,
                    const InductionConfig& cfg) {
  if (D.dim() != trace.dim) throw InvalidParameter("fit_lemma_cA: kernel mismatch");
  const double beta = cfg.beta;
  double cmin = 0.0;
  for (int j = 1; j <= trace.N; ++j) {
    const double thr =
        j == 1 ? 0.0 : cfg.gamma * std::log(static_cast<double>(j)) / j;
    for (std::size_t ki = 0; ki < trace.kset.size(); ++ki) {
      const double a = trace.gap[ki];
      if (a > thr) continue;
      const double fj = std::abs(trace.f[ki][j]);
      if (fj <= 0.0) continue;
      const double denom = beta * (cfg.K3 + (cfg.K2 + cfg.K3) * j * a);
      cmin = std::max(cmin, (std::log(fj) + j * a) / denom);
    }
  }
  return std::max(cmin, 0.0);
}

CertificateReport check_lemma_fder(const RecursionTrace& trace,
                                   const InductionConfig& cfg, double C) {
  if (trace.lap_f.empty())
    throw InvalidParameter("check_lemma_fder: trace lacks the Hessian sequence");
  CertificateReport rep;
  const double factor = 1.0 + C * (cfg.K2 + cfg.K3) * cfg.beta;
  for (int j = 1; j <= trace.N; ++j) {
    auto r = upper("fder", j, factor * trace.sigma2 * j, std::abs(trace.lap_f[j]));
    r.constant = C;
    rep.add(std::move(r));
  }
  return rep;
}

double fit_lemma_fder(const RecursionTrace& trace, const InductionConfig& cfg) {
  if (trace.lap_f.empty())
    throw InvalidParameter("fit_lemma_fder: trace lacks the Hessian sequence");
  double cmin = 0.0;
  for (int j = 1; j <= trace.N; ++j) {
    const double ratio = std::abs(trace.lap_f[j]) / (trace.sigma2 * j);
    cmin = std::max(cmin, (ratio - 1.0) / ((cfg.K2 + cfg.K3) * cfg.beta));
  }
  return std::max(cmin, 0.0);
}

ConvCase conv_lemma_case(double a, double b) {
  if (a > 2.0 && b > 2.0) return {std::min(a, b), "a,b>2"};
  if (a > 2.0 && b > 1.0) return {std::min(a - 1.0, b), "a>2,b>1"};
  if (a > 2.0 && b > 0.0) return {std::min(a - 2.0, b), "a>2,b>0"};
  if (a > 1.0 && b > 1.0) return {std::min(a, b) - 1.0, "a,b>1"};
  throw InvalidParameter("conv lemma: exponent pair fits no case");
}

CertificateReport check_conv_lemma(double a, double b, long n_max,
                                   double slope_threshold) {
  if (n_max < 10) throw InvalidParameter("check_conv_lemma needs n_max >= 10");
  const ConvCase cs = conv_lemma_case(a, b);

  std::vector<long double> mpow(n_max + 1, 0.0L), prefix(n_max + 1, 0.0L);
  for (long m = 1; m <= n_max; ++m) {
    mpow[m] = powl(static_cast<long double>(m), static_cast<long double>(-a));
    prefix[m] = prefix[m - 1] + powl(static_cast<long double>(m),
                                     static_cast<long double>(-b));
  }
  auto S = [&](long n) {
    long double s = 0.0L;
    for (long m = 2; m <= n; ++m) s += mpow[m] * (prefix[n] - prefix[n - m]);
    return static_cast<double>(s);
  };

  std::vector<long> samples;
  for (long n = 2; n <= std::min<long>(100, n_max); ++n) samples.push_back(n);
  for (double x = 100.0; x < static_cast<double>(n_max); x *= 1.06) {
    const long n = static_cast<long>(x);
    if (n > samples.back() && n <= n_max) samples.push_back(n);
  }
  if (samples.back() != n_max) samples.push_back(n_max);

  std::vector<double> xs, ts;
  double sup = 0.0;
  for (long n : samples) {
    const double t = S(n) * std::pow(static_cast<double>(n), cs.rate);
    xs.push_back(static_cast<double>(n));
    ts.push_back(t);
    sup = std::max(sup, t);
  }

  CertificateReport rep;
  rep.meta["case"] = cs.label;
  rep.meta["rate"] = std::to_string(cs.rate);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto r = upper("conv.T", static_cast<int>(xs[i]), sup, ts[i]);
    r.constant = cs.rate;
    rep.add(std::move(r));
  }
  const auto fit = loglog_fit_last_decade(xs, ts);
  auto r = upper("conv.slope", -1, slope_threshold, fit.slope);
  r.constant = cs.rate;
  r.note = "fit window [" + std::to_string(fit.window_lo) + "," +
           std::to_string(fit.window_hi) + "]";
  rep.add(std::move(r));
  return rep;
}

}  // namespace lace
