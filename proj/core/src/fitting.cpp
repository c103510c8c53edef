#include "lace/fitting.hpp"

#include <cmath>

#include "lace/errors.hpp"

namespace lace {

LogLogFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys,
                     double window_lo, double window_hi) {
  if (xs.size() != ys.size()) throw InvalidParameter("loglog_fit: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  double lo = 0, hi = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0) || !(ys[i] > 0)) continue;
    if (window_hi > 0 && (xs[i] < window_lo || xs[i] > window_hi)) continue;
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    if (n == 0 || xs[i] < lo) lo = xs[i];
    if (n == 0 || xs[i] > hi) hi = xs[i];
    ++n;
  }
  LogLogFit f;
  f.points = n;
  f.window_lo = lo;
  f.window_hi = hi;
  if (n < 2) return f;
  const double det = n * sxx - sx * sx;
  if (det == 0.0) return f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy * sxx - sx * sxy) / det;
  return f;
}

LogLogFit loglog_fit_last_decade(const std::vector<double>& xs,
                                 const std::vector<double>& ys) {
  double xmax = 0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] > xmax && ys[i] > 0) xmax = xs[i];
  if (xmax <= 0) return {};
  return loglog_fit(xs, ys, xmax / 10.0, xmax);
}

TwoFeatureFit least_squares_2(const std::vector<double>& f0,
                              const std::vector<double>& f1,
                              const std::vector<double>& y) {
  if (f0.size() != f1.size() || f0.size() != y.size())
    throw InvalidParameter("least_squares_2: size mismatch");
  double a00 = 0, a01 = 0, a11 = 0, b0 = 0, b1 = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    a00 += f0[i] * f0[i];
    a01 += f0[i] * f1[i];
    a11 += f1[i] * f1[i];
    b0 += f0[i] * y[i];
    b1 += f1[i] * y[i];
  }
  TwoFeatureFit r;
  const double det = a00 * a11 - a01 * a01;
  if (det == 0.0 || y.empty()) return r;
  r.c0 = (b0 * a11 - b1 * a01) / det;
  r.c1 = (a00 * b1 - a01 * b0) / det;
  double ss = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - r.c0 * f0[i] - r.c1 * f1[i];
    ss += d * d;
  }
  r.residual_rms = std::sqrt(ss / y.size());
  return r;
}

}  // namespace lace
