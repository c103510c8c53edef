#include "lace/engine.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fmt_util.hpp"
#include "json.hpp"
#include "lace/errors.hpp"
#include "lace/fitting.hpp"
#include "lace/parallel.hpp"

namespace lace {

using ordered_json = nlohmann::ordered_json;

int RecursionTrace::k_index(const FourierPoint& k) const {
  for (std::size_t i = 0; i < kset.size(); ++i)
    if (kset[i] == k) return static_cast<int>(i);
  throw InvalidParameter("Fourier point not stored in trace");
}

namespace {

void check_order_budget(const ModelCoefficients& model, int N) {
  if (!model.higher_orders_vanish() && model.max_order() < N)
    throw TruncationError(
        model.max_order() + 1,
        "model order insufficient at n=" + std::to_string(model.max_order()) +
            ": evolving to N=" + std::to_string(N) + " needs order " +
            std::to_string(N));
}

// f_{n+1} = sum_m g[m] f_{n+1-m} + e[n+1], one k at a time.
void evolve_point(const std::vector<double>& gp, const std::vector<double>& ep,
                  int N, bool compensated, std::vector<double>& fk) {
  fk.assign(N + 1, 0.0);
  fk[0] = 1.0;
  for (int np1 = 1; np1 <= N; ++np1) {
    if (compensated) {
      double s = ep[np1 - 1], comp = 0.0;
      for (int m = 1; m <= np1; ++m) {
        const double y = gp[m - 1] * fk[np1 - m] - comp;
        const double t = s + y;
        comp = (t - s) - y;
        s = t;
      }
      fk[np1] = s;
    } else {
      double s = ep[np1 - 1];
      for (int m = 1; m <= np1; ++m) s += gp[m - 1] * fk[np1 - m];
      fk[np1] = s;
    }
  }
}

}  // namespace

RecursionTrace evolve(const ModelCoefficients& model, double z,
                      std::vector<FourierPoint> kset, int N,
                      const EvolveOptions& opt) {
  if (N < 1) throw InvalidParameter("evolve needs N >= 1");
  if (kset.empty() || !kset[0].is_zero())
    throw InvalidParameter("evolve: kset[0] must be the origin");
  const int d = model.dim();
  for (const auto& k : kset)
    if (k.dim() != d) throw InvalidParameter("evolve: k of wrong dimension");
  check_order_budget(model, N);

  RecursionTrace t;
  t.z = z;
  t.N = N;
  t.dim = d;
  t.range = model.kernel().range();
  t.sigma2 = model.kernel().sigma2();
  t.kset = std::move(kset);
  t.gap.resize(t.kset.size());
  t.f.resize(t.kset.size());

  parallel_for(t.kset.size(), [&](std::size_t ki) {
    const FourierPoint& k = t.kset[ki];
    std::vector<double> gp(N), ep(N);
    model.g_profile(k, z, N, gp);
    model.e_profile(k, z, N, ep);
    t.gap[ki] = model.kernel().gap(k);
    evolve_point(gp, ep, N, opt.compensated, t.f[ki]);
  });

  // Velocity data and Hessian propagate at k = 0 only.
  std::vector<double> g0(N), gl(N), el(N);
  model.g_profile(t.kset[0], z, N, g0);
  model.g_lap_profile(z, N, gl);
  model.e_lap_profile(z, N, el);

  t.b.assign(N + 1, 0.0);
  t.c.assign(N + 1, 0.0);
  t.v.assign(N + 1, 0.0);
  t.zeta.assign(N + 1, 0.0);
  t.b[0] = t.v[0] = 1.0;
  t.zeta[0] = -1.0;  // empty-sum convention
  double pb = 0.0, pc = 0.0, pg = 0.0;
  for (int n = 1; n <= N; ++n) {
    pb += gl[n - 1];
    pc += (n - 1) * g0[n - 1];
    pg += g0[n - 1];
    t.b[n] = -pb / t.sigma2;
    t.c[n] = pc;
    t.v[n] = t.b[n] / (1.0 + t.c[n]);
    t.zeta[n] = pg - 1.0;
  }

  if (opt.with_hessian) {
    t.lap_f.assign(N + 1, 0.0);
    const auto& f0 = t.f[0];
    for (int np1 = 1; np1 <= N; ++np1) {
      double s = el[np1 - 1];
      for (int m = 1; m <= np1; ++m)
        s += gl[m - 1] * f0[np1 - m] + g0[m - 1] * t.lap_f[np1 - m];
      t.lap_f[np1] = s;
    }
  }

  if (opt.with_z_sequence) t.z_seq = zn_sequence(model, N);
  return t;
}

std::vector<double> evolve_hessian(const ModelCoefficients& model, double z, int N) {
  EvolveOptions opt;
  opt.with_z_sequence = false;
  auto t = evolve(model, z, {FourierPoint::zero(model.dim())}, N, opt);
  return t.lap_f;
}

std::vector<double> zn_sequence(const ModelCoefficients& model, int N) {
  if (N < 1) throw InvalidParameter("zn_sequence needs N >= 1");
  check_order_budget(model, N);
  const auto k0 = FourierPoint::zero(model.dim());
  std::vector<double> zs(N + 1, 1.0);  // z_0 = z_1 = 1
  std::vector<double> buf;
  for (int n = 1; n < N; ++n) {
    const int M = n + 1;
    buf.resize(M);
    model.g_profile(k0, zs[n], M, buf);
    double sum = 0.0;
    for (int m = 2; m <= M; ++m) sum += buf[m - 1];
    zs[n + 1] = 1.0 - sum;
  }
  return zs;
}

CriticalPointResult critical_point(const ModelCoefficients& model, int max_n,
                                   double tol) {
  if (max_n < 2) throw InvalidParameter("critical_point needs max_n >= 2");
  const auto k0 = FourierPoint::zero(model.dim());
  std::vector<double> zcur{1.0, 1.0};
  std::vector<double> idx, inc;  // increment j -> |z_{j+1} - z_j|
  std::vector<double> buf;

  double dmin = std::numeric_limits<double>::infinity();
  int imin = 0;
  double zbest = 1.0;
  double first_nonzero = 0.0;
  bool any_nonzero = false;

  auto fit_bound = [&](double d_latest, int n) -> double {
    const auto fit = loglog_fit(idx, inc, n / 2.0, static_cast<double>(n));
    if (fit.points < 4 || fit.slope >= -1.02)
      return std::numeric_limits<double>::infinity();
    const double theta_hat = -fit.slope;
    return d_latest * n / (theta_hat - 1.0);
  };

  for (int n = 1; n < max_n; ++n) {
    const int M = n + 1;
    buf.resize(M);
    model.g_profile(k0, zcur[n], M, buf);
    double sum = 0.0;
    for (int m = 2; m <= M; ++m) sum += buf[m - 1];
    const double znext = 1.0 - sum;
    if (!std::isfinite(znext))
      throw NoConvergence("critical-point recursion diverged at n=" +
                          std::to_string(n));
    const double d = std::abs(znext - zcur[n]);
    zcur.push_back(znext);
    idx.push_back(static_cast<double>(n));
    inc.push_back(d);
    if (d > 0.0 && !any_nonzero) {
      any_nonzero = true;
      first_nonzero = d;
    }
    if (d < dmin) {
      dmin = d;
      imin = n;
      zbest = znext;
    }

    if (!any_nonzero && n >= 64) return {znext, 0.0, n + 1, true};

    // Optimal truncation: the increments bottomed out and are growing
    // again, so the coefficient series has no convergent tail here.
    if (any_nonzero && dmin > 0.0 && n > imin + 25 && d > 10.0 * dmin) {
      const double drift = std::abs(znext - zbest);
      return {zbest, std::max(drift, dmin * imin), imin + 1, false};
    }

    if (any_nonzero && n >= 16 && n % 8 == 0) {
      const double bnd = fit_bound(d, n);
      if (bnd < tol) return {znext, bnd, n + 1, true};
      if (n >= 128 && dmin >= 0.9 * first_nonzero)
        throw NoConvergence("critical-point increments are not decaying");
    }
  }

  if (!any_nonzero) return {zcur.back(), 0.0, max_n, true};
  const double bnd = fit_bound(inc.back(), max_n - 1);
  return {zcur.back(), bnd, max_n, bnd < tol};
}

double zeta(const ModelCoefficients& model, double z, int n) {
  if (n < 0) throw InvalidParameter("zeta needs n >= 0");
  check_order_budget(model, n + 1);
  const auto k0 = FourierPoint::zero(model.dim());
  std::vector<double> buf(n + 1);
  model.g_profile(k0, z, n + 1, buf);
  double sum = 0.0;
  for (double g : buf) sum += g;
  return sum - 1.0;
}

SeriesSum sum_series(const std::function<double(int)>& term, int m_begin,
                     const SeriesOptions& opt) {
  SeriesSum s;
  double prev = std::numeric_limits<double>::infinity();
  int grew = 0;
  for (int m = m_begin; m <= opt.max_m; ++m) {
    const double t = term(m);
    const double at = std::abs(t);
    if (opt.stop_on_growth && at > prev) {
      if (++grew >= opt.growth_patience) {
        s.truncated_by_growth = true;
        break;
      }
    } else {
      grew = 0;
    }
    s.value += t;
    s.m_stop = m;
    s.last_term = t;
    if (opt.term_tol > 0.0 && at < opt.term_tol && m > m_begin + 8) break;
    prev = at;
  }
  return s;
}

LimitConstants constants_Av(const ModelCoefficients& model, double z_c, int M_max,
                            double tail_tol) {
  if (M_max < 1) throw InvalidParameter("constants_Av needs M_max >= 1");
  const auto k0 = FourierPoint::zero(model.dim());
  SeriesOptions opt;
  opt.max_m = model.higher_orders_vanish()
                  ? std::min(M_max, model.max_order())
                  : M_max;
  opt.term_tol = tail_tol / 100.0;

  const auto Sg = sum_series([&](int m) { return model.g(m, k0, z_c); }, 1, opt);
  const auto Smg =
      sum_series([&](int m) { return m * model.g(m, k0, z_c); }, 1, opt);
  const auto Se = sum_series([&](int m) { return model.e(m, k0, z_c); }, 1, opt);
  const auto Slap = sum_series([&](int m) { return model.g_lap(m, z_c); }, 1, opt);

  LimitConstants lc;
  lc.z_c = z_c;
  lc.tail_tol = tail_tol;
  lc.M_max = M_max;
  lc.M_used = std::max(std::max(Sg.m_stop, Smg.m_stop),
                       std::max(Se.m_stop, Slap.m_stop));

  double tail_g = 0.0, tail_mg = 0.0;
  if (!model.higher_orders_vanish() || lc.M_used < model.max_order()) {
    if (auto th = model.theta()) {
      if (*th > 1.0) tail_g = std::abs(Sg.last_term) * Sg.m_stop / (*th - 1.0);
      if (*th > 2.0) tail_mg = std::abs(Smg.last_term) * Smg.m_stop / (*th - 2.0);
    }
  }
  if (std::abs(Smg.value) <= tail_tol)
    throw DegenerateModel("sum of m g_m(0;z_c) vanishes within tail tolerance");

  lc.A = (1.0 + Se.value) / Smg.value;
  lc.v = -Slap.value / (model.kernel().sigma2() * Smg.value);
  lc.residuals["one_minus_sum_g"] = 1.0 - Sg.value;
  lc.residuals["tail_g"] = tail_g;
  lc.residuals["tail_mg"] = tail_mg;
  lc.residuals["truncated_by_growth"] =
      (Sg.truncated_by_growth || Smg.truncated_by_growth) ? 1.0 : 0.0;
  return lc;
}

std::string LimitConstants::to_json_string(int indent) const {
  ordered_json j;
  j["z_c"] = z_c;
  j["A"] = A;
  j["v"] = v;
  ordered_json res;
  for (const auto& [k, v2] : residuals) res[k] = v2;
  j["residuals"] = std::move(res);
  j["tail_tol"] = tail_tol;
  j["M_max"] = M_max;
  j["M_used"] = M_used;
  return j.dump(indent);
}

SusceptibilityResult susceptibility(const ModelCoefficients& model, double z, int N) {
  if (N < 1) throw InvalidParameter("susceptibility needs N >= 1");
  EvolveOptions opt;
  opt.with_z_sequence = false;
  opt.with_hessian = false;
  const auto t = evolve(model, z, {FourierPoint::zero(model.dim())}, N, opt);

  SusceptibilityResult r;
  r.z = z;
  r.N = N;
  double chi = 0.0;
  for (int n = 0; n <= N; ++n) chi += t.f0(n);
  r.chi_N = chi;

  SeriesOptions sopt;
  sopt.max_m = model.higher_orders_vanish()
                   ? std::min(200000, model.max_order())
                   : 200000;
  sopt.term_tol = 1e-16;
  const auto k0 = FourierPoint::zero(model.dim());
  r.G = sum_series([&](int m) { return model.g(m, k0, z); }, 2, sopt).value;
  r.E = sum_series([&](int m) { return model.e(m, k0, z); }, 2, sopt).value;
  r.closed_form = (1.0 + r.E) / (1.0 - z - r.G);
  const int back = std::max(0, N - 10);
  r.diverging = std::abs(t.f0(N)) > std::abs(t.f0(back)) && std::abs(t.f0(N)) > 1.0;
  return r;
}

std::vector<double> extract_r(const RecursionTrace& t, int k_index) {
  const auto& fk = t.f.at(k_index);
  const double a = t.gap.at(k_index);
  std::vector<double> r(t.N + 1, 0.0);
  for (int i = 1; i <= t.N; ++i) {
    if (std::abs(fk[i - 1]) < 1e-300) throw RatioBreakdown(i - 1);
    r[i] = fk[i] / fk[i - 1] - 1.0 + t.v[i] * a;
  }
  return r;
}

std::vector<double> extract_s(const RecursionTrace& t, int k_index) {
  const auto r0 = extract_r(t, 0);
  const auto rk = extract_r(t, k_index);
  const double a = t.gap.at(k_index);
  std::vector<double> s(t.N + 1, 0.0);
  for (int i = 1; i <= t.N; ++i) {
    const double denom = 1.0 + r0[i];
    if (std::abs(denom) < 1e-10) throw DegenerateFactor(i);
    s[i] = (t.v[i] * a * r0[i] + (rk[i] - r0[i])) / denom;
  }
  return s;
}

double reconstruct_from_s(const RecursionTrace& t, int k_index, int j) {
  if (j < 0 || j > t.N) throw InvalidParameter("reconstruct_from_s: j out of range");
  const auto s = extract_s(t, k_index);
  const double a = t.gap.at(k_index);
  double prod = t.f0(j);
  for (int i = 1; i <= j; ++i) prod *= 1.0 - t.v[i] * a + s[i];
  return prod;
}

std::vector<Interval> nested_intervals(const std::vector<double>& z_seq,
                                       double K1beta, double theta) {
  if (z_seq.size() < 2) throw InvalidParameter("nested_intervals needs z_0, z_1");
  std::vector<Interval> out;
  for (std::size_t n = 1; n < z_seq.size(); ++n) {
    const double half = K1beta * std::pow(static_cast<double>(n), -theta + 1.0);
    out.push_back(Interval{z_seq[n] - half, z_seq[n] + half});
  }
  return out;
}

std::string trace_to_csv(const RecursionTrace& t) {
  using detail::fmt;
  std::ostringstream os;
  os << "n,k_index,f,b,c,v,z_n,zeta\r\n";
  for (int n = 0; n <= t.N; ++n) {
    for (std::size_t ki = 0; ki < t.kset.size(); ++ki) {
      os << n << "," << ki << "," << fmt(t.f[ki][n]) << "," << fmt(t.b[n]) << ","
         << fmt(t.c[n]) << "," << fmt(t.v[n]) << ","
         << (t.z_seq.empty() ? "" : fmt(t.z_seq[n])) << "," << fmt(t.zeta[n])
         << "\r\n";
    }
  }
  return os.str();
}

}  // namespace lace
