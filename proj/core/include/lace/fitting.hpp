#pragma once

#include <string>
#include <vector>

namespace lace {

/// OLS slope on log-log data over a window of the abscissa.
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

/// Fits log(y) = intercept + slope * log(x); skips nonpositive entries.
/// window_lo/hi of 0 means "use everything"; otherwise restrict to
/// x in [window_lo, window_hi].
LogLogFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys,
                     double window_lo = 0.0, double window_hi = 0.0);

/// Same restricted to the largest decade [xmax/10, xmax] present.
LogLogFit loglog_fit_last_decade(const std::vector<double>& xs,
                                 const std::vector<double>& ys);

/// Two-feature least squares y ~ c0*f0 + c1*f1.
struct TwoFeatureFit {
  double c0 = 0.0, c1 = 0.0;
  double residual_rms = 0.0;
};
TwoFeatureFit least_squares_2(const std::vector<double>& f0,
                              const std::vector<double>& f1,
                              const std::vector<double>& y);

}  // namespace lace
