#include "lace/kernel_certify.hpp"

#include <cmath>
#include <limits>

#include "lace/errors.hpp"

namespace lace {

namespace {

constexpr double kPi = 3.14159265358979323846;

// First d entries of frac(sqrt(prime)) drive the additive recurrence.
const double kAlphas[] = {0.41421356237309515, 0.7320508075688772, 0.2360679774997896,
                          0.6457513110645907,  0.3166247903553998, 0.6055512754639891,
                          0.1231056256176605,  0.35889894354067355};

void fill_lowdisc(int d, int count, double scale,
                  std::vector<FourierPoint>& out) {
  std::vector<double> x(d, 0.5);
  for (int n = 0; n < count; ++n) {
    std::vector<double> k(d);
    for (int i = 0; i < d; ++i) {
      x[i] += kAlphas[i % 8];
      x[i] -= std::floor(x[i]);
      k[i] = (2.0 * x[i] - 1.0) * scale;
    }
    out.push_back(FourierPoint(std::move(k)));
  }
}

std::vector<FourierPoint> grid_impl(int d, double scale, const KGridSpec& spec) {
  if (d < 1) throw InvalidParameter("grid needs d >= 1");
  int per_axis = spec.tensor_per_axis;
  // Cap the tensor part so high d stays tractable; the fill keeps coverage.
  while (per_axis > 3 && std::pow(static_cast<double>(per_axis), d) > 2e5)
    --per_axis;
  std::vector<FourierPoint> out;
  if (per_axis >= 2) {
    std::vector<int> idx(d, 0);
    for (;;) {
      std::vector<double> k(d);
      for (int i = 0; i < d; ++i)
        k[i] = -scale + 2.0 * scale * idx[i] / (per_axis - 1);
      out.push_back(FourierPoint(std::move(k)));
      int i = 0;
      for (; i < d; ++i) {
        if (idx[i] + 1 < per_axis) {
          ++idx[i];
          break;
        }
        idx[i] = 0;
      }
      if (i == d) break;
    }
  }
  fill_lowdisc(d, spec.lowdisc, scale, out);
  return out;
}

}  // namespace

std::vector<FourierPoint> torus_grid(int d, const KGridSpec& spec) {
  return grid_impl(d, kPi, spec);
}

std::vector<FourierPoint> smallk_grid(int d, double kinf, const KGridSpec& spec) {
  if (kinf <= 0 || kinf > kPi) throw InvalidParameter("smallk_grid radius out of range");
  return grid_impl(d, kinf, spec);
}

CertificateReport certify_assumption_D(const StepKernel& D, const DConstants& c,
                                       const std::vector<FourierPoint>& kgrid) {
  if (kgrid.empty()) throw InvalidParameter("certify_assumption_D: empty k grid");
  if (!(c.eta > 0 && c.c1 > 0 && c.c2 > 0 && c.C > 0))
    throw InvalidParameter("certify_assumption_D: constants must be positive");

  const int d = D.dim();
  const double L = D.range();
  const double kinf_split = 1.0 / L;

  CertificateReport rep;
  rep.meta["grid_points"] = std::to_string(kgrid.size());

  // Normalisation (weights are validated rational; this is the float check).
  {
    double s = 0.0;
    for (const auto& site : D.support()) s += site.w.value();
    auto r = CertificateReport::upper("D.normalization", -1, 1e-12, std::abs(s - 1.0));
    r.note = "|sum W - 1|";
    rep.add(std::move(r));
  }
  {
    auto r = CertificateReport::upper("D.Linf", -1, c.C * std::pow(L, -d), D.max_weight());
    r.constant = c.C;
    rep.add(std::move(r));
  }
  {
    auto r = CertificateReport::upper("D.sigma2", -1, c.C * L * L, D.sigma2());
    r.constant = c.C;
    rep.add(std::move(r));
  }
  {
    const double m = D.moment(2.0 + 2.0 * c.eps);
    auto r = CertificateReport::upper("D.moment", -1,
                                      std::numeric_limits<double>::max(), m);
    r.constant = c.eps;
    r.note = "moment(2+2eps); finite support";
    rep.add(std::move(r));
  }

  long long n_small = 0, n_large = 0;
  CheckRecord b1lo, b1hi, b2, b3;
  b1lo = CertificateReport::upper("D.bound1.lower", -1, 0.0, 0.0);
  b1lo.constant = c.c1;
  b1lo.margin = std::numeric_limits<double>::infinity();
  b1hi = b1lo;
  b1hi.check_id = "D.bound1.upper";
  b1hi.constant = c.c2;
  b2 = b1lo;
  b2.check_id = "D.bound2";
  b2.constant = c.eta;
  b3 = b1lo;
  b3.check_id = "D.bound3";
  b3.constant = c.eta;

  auto consider = [](CheckRecord& r, double bound, double actual,
                     const FourierPoint& k) {
    const double margin = bound - actual;
    if (margin < r.margin) {
      r.bound = bound;
      r.actual = actual;
      r.margin = margin;
      r.k = k.comps();
      r.pass = CertificateReport::bound_pass(actual, bound);
    }
  };

  for (const auto& k : kgrid) {
    const double a = D.gap(k);
    consider(b3, 2.0 - c.eta, a, k);  // a(k) < 2 - eta everywhere
    if (k.inf_norm() <= kinf_split) {
      ++n_small;
      const double k2 = k.squared_norm();
      // c1 L^2 k^2 <= a(k): record with roles flipped so pass == actual<=bound.
      consider(b1lo, a, c.c1 * L * L * k2, k);
      consider(b1hi, c.c2 * L * L * k2, a, k);
    }
    if (k.inf_norm() >= kinf_split && !k.is_zero()) {
      ++n_large;
      consider(b2, a, c.eta, k);  // a(k) > eta: flipped roles
    }
  }
  rep.meta["grid_points_small"] = std::to_string(n_small);
  rep.meta["grid_points_large"] = std::to_string(n_large);
  if (n_small == 0) rep.meta["warning.small_regime"] = "no grid points with ||k||_inf <= 1/L";
  if (n_large == 0) rep.meta["warning.large_regime"] = "no grid points with ||k||_inf >= 1/L";

  if (n_small > 0) {
    rep.add(b1lo);
    rep.add(b1hi);
  }
  if (n_large > 0) rep.add(b2);
  rep.add(b3);
  return rep;
}

FittedDConstants fit_assumption_D(const StepKernel& D,
                                  const std::vector<FourierPoint>& kgrid) {
  if (kgrid.empty()) throw InvalidParameter("fit_assumption_D: empty k grid");
  const int d = D.dim();
  const double L = D.range();
  double c1 = std::numeric_limits<double>::infinity();
  double c2 = 0.0;
  double amin_large = std::numeric_limits<double>::infinity();
  double amax = 0.0;
  for (const auto& k : kgrid) {
    const double a = D.gap(k);
    amax = std::max(amax, a);
    const double k2 = k.squared_norm();
    if (k.inf_norm() <= 1.0 / L && k2 > 0) {
      c1 = std::min(c1, a / (L * L * k2));
      c2 = std::max(c2, a / (L * L * k2));
    }
    if (k.inf_norm() >= 1.0 / L) amin_large = std::min(amin_large, a);
  }
  FittedDConstants f;
  f.c1 = c1;
  f.c2 = c2;
  f.eta = std::min(amin_large, 2.0 - amax);
  f.C = std::max(D.max_weight() * std::pow(L, d), D.sigma2() / (L * L));
  return f;
}

}  // namespace lace
