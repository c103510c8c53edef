#include "lace/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fmt_util.hpp"
#include "lace/errors.hpp"
#include "lace/fitting.hpp"

namespace lace {

std::vector<GaussianCheckResult> gaussian_profile(
    const ModelCoefficients& model, const LimitConstants& constants,
    const std::vector<int>& n_list,
    const std::vector<std::vector<double>>& kgrid_scaled, double gamma) {
  if (n_list.empty()) throw InvalidParameter("gaussian_profile: empty n list");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw InvalidParameter("gaussian_profile: n list must ascend");
  const int d = model.dim();
  const double s2 = model.kernel().sigma2();

  std::vector<GaussianCheckResult> out;
  for (int n : n_list) {
    const double scale = std::sqrt(constants.v * s2 * n);
    std::vector<FourierPoint> kset{FourierPoint::zero(d)};
    for (const auto& ks : kgrid_scaled) {
      if (static_cast<int>(ks.size()) != d)
        throw InvalidParameter("gaussian_profile: scaled k of wrong dimension");
      std::vector<double> phys(ks.size());
      for (std::size_t i = 0; i < ks.size(); ++i) phys[i] = ks[i] / scale;
      kset.push_back(FourierPoint(std::move(phys)));
    }
    EvolveOptions opt;
    opt.with_z_sequence = false;
    opt.with_hessian = false;
    const auto trace = evolve(model, constants.z_c, std::move(kset), n, opt);

    GaussianCheckResult res;
    res.n = n;
    res.admissible_a = n > 1 ? gamma * std::log(static_cast<double>(n)) / n : 0.0;
    for (std::size_t gi = 0; gi < kgrid_scaled.size(); ++gi) {
      GaussianRow row;
      row.k_scaled = kgrid_scaled[gi];
      double k2 = 0.0;
      for (double x : row.k_scaled) k2 += x * x;
      row.f_scaled = trace.f[gi + 1][n];
      row.gaussian = constants.A * std::exp(-k2 / (2.0 * d));
      row.deviation = std::abs(row.f_scaled / row.gaussian - 1.0);
      row.in_region = trace.gap[gi + 1] <= res.admissible_a;
      if (row.in_region) {
        res.max_deviation = std::max(res.max_deviation, row.deviation);
        ++res.included;
      } else {
        ++res.excluded;
      }
      res.rows.push_back(std::move(row));
    }
    out.push_back(std::move(res));
  }
  return out;
}

GaussianEnvelope fit_gaussian_envelope(const std::vector<GaussianCheckResult>& res,
                                       double theta, double delta) {
  GaussianEnvelope env;
  std::vector<double> ns, maxdev;
  std::vector<double> f0, f1, y;
  for (const auto& r : res) {
    if (r.included > 0) {
      ns.push_back(static_cast<double>(r.n));
      maxdev.push_back(r.max_deviation);
    }
    for (const auto& row : r.rows) {
      if (!row.in_region) continue;
      double k2 = 0.0;
      for (double x : row.k_scaled) k2 += x * x;
      f0.push_back(k2 * std::pow(static_cast<double>(r.n), -delta));
      f1.push_back(std::pow(static_cast<double>(r.n), -theta + 2.0));
      y.push_back(row.deviation);
    }
  }
  const auto lf = loglog_fit_last_decade(ns, maxdev);
  env.slope = lf.slope;
  env.window_lo = lf.window_lo;
  env.window_hi = lf.window_hi;
  const auto ls = least_squares_2(f0, f1, y);
  env.C_k2 = ls.c0;
  env.C_theta = ls.c1;
  env.residual_rms = ls.residual_rms;
  return env;
}

HessianRatioResult hessian_ratio(const ModelCoefficients& model,
                                 const LimitConstants& constants,
                                 const std::vector<int>& n_list) {
  if (n_list.empty()) throw InvalidParameter("hessian_ratio: empty n list");
  const int n_max = *std::max_element(n_list.begin(), n_list.end());
  EvolveOptions opt;
  opt.with_z_sequence = false;
  const auto t = evolve(model, constants.z_c,
                        {FourierPoint::zero(model.dim())}, n_max, opt);
  const double s2 = model.kernel().sigma2();

  HessianRatioResult out;
  std::vector<double> xs, ys;
  for (int n : n_list) {
    HessianRatioRow row;
    row.n = n;
    row.ratio = -t.lap_f[n] / (t.f0(n) * constants.v * s2 * n);
    out.rows.push_back(row);
    xs.push_back(static_cast<double>(n));
    ys.push_back(std::abs(row.ratio - 1.0));
  }
  out.fitted_exponent = loglog_fit_last_decade(xs, ys).slope;
  return out;
}

RootResult zc_from_susceptibility(const ModelCoefficients& model, double z_lo,
                                  double z_hi, double tol,
                                  const SeriesOptions& sopt) {
  if (!(z_lo < z_hi)) throw InvalidParameter("zc_from_susceptibility: bad bracket");
  if (!(tol > 0)) throw InvalidParameter("zc_from_susceptibility: tol must be > 0");
  const auto k0 = FourierPoint::zero(model.dim());
  SeriesOptions opt = sopt;
  opt.max_m = model.higher_orders_vanish()
                  ? std::min(opt.max_m, model.max_order())
                  : opt.max_m;
  int last_mstop = 0;
  auto F = [&](double z) {
    const auto s =
        sum_series([&](int m) { return model.g(m, k0, z); }, 2, opt);
    last_mstop = s.m_stop;
    return 1.0 - z - s.value;
  };
  double flo = F(z_lo), fhi = F(z_hi);
  if (flo == 0.0) return {z_lo, 0.0, 0, last_mstop};
  if (fhi == 0.0) return {z_hi, 0.0, 0, last_mstop};
  if ((flo > 0) == (fhi > 0))
    throw BracketError("1 - z - G(z) has no sign change on the bracket");

  RootResult r;
  double lo = z_lo, hi = z_hi;
  for (int it = 0; it < 200 && hi - lo > tol * 0.25; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = F(mid);
    r.iterations = it + 1;
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  r.z_root = 0.5 * (lo + hi);
  r.residual = F(r.z_root);
  r.m_truncation = last_mstop;
  return r;
}

ChiIdentityResult chi_identity_check(const ModelCoefficients& model,
                                     const std::vector<double>& z_list, int N) {
  ChiIdentityResult out;
  out.z_c_prime = zc_from_susceptibility(model, 0.5, 1.5, 1e-12).z_root;
  std::vector<double> gaps, chis;
  for (double z : z_list) {
    if (z >= out.z_c_prime)
      throw OutOfDomain("chi identity: z=" + std::to_string(z) +
                        " is at or above z_c'=" + std::to_string(out.z_c_prime));
    const auto s = susceptibility(model, z, N);
    ChiRow row;
    row.z = z;
    row.chi_N = s.chi_N;
    row.closed_form = s.closed_form;
    row.rel_gap = std::abs(s.chi_N - s.closed_form) /
                  std::max(std::abs(s.closed_form), 1e-300);
    out.rows.push_back(row);
    gaps.push_back(out.z_c_prime - z);
    chis.push_back(std::abs(s.closed_form));
  }
  out.divergence_exponent = loglog_fit(gaps, chis).slope;
  return out;
}

double a_product(const ModelCoefficients& model, double z_c, int n) {
  EvolveOptions opt;
  opt.with_z_sequence = false;
  opt.with_hessian = false;
  const auto t = evolve(model, z_c, {FourierPoint::zero(model.dim())}, n, opt);
  const auto r = extract_r(t, 0);
  double prod = 1.0;
  for (int i = 1; i <= n; ++i) prod *= 1.0 + r[i];
  return prod;
}

std::string gaussian_to_csv(const std::vector<GaussianCheckResult>& res) {
  using detail::fmt;
  std::ostringstream os;
  os << "n,k,f_scaled,gaussian,deviation,in_region\r\n";
  for (const auto& r : res) {
    for (const auto& row : r.rows) {
      std::string ks;
      for (std::size_t i = 0; i < row.k_scaled.size(); ++i) {
        if (i) ks += ";";
        ks += fmt(row.k_scaled[i]);
      }
      os << r.n << "," << detail::csv_quote(ks) << "," << fmt(row.f_scaled) << ","
         << fmt(row.gaussian) << "," << fmt(row.deviation) << ","
         << (row.in_region ? "1" : "0") << "\r\n";
    }
  }
  return os.str();
}

std::string chi_to_csv(const ChiIdentityResult& res) {
  using detail::fmt;
  std::ostringstream os;
  os << "z,chi_N,closed_form\r\n";
  for (const auto& r : res.rows)
    os << fmt(r.z) << "," << fmt(r.chi_N) << "," << fmt(r.closed_form) << "\r\n";
  return os.str();
}

}  // namespace lace
