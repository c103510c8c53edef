#pragma once

#include <vector>

#include "lace/fourier_point.hpp"
#include "lace/report.hpp"
#include "lace/step_kernel.hpp"

namespace lace {

/// Candidate constants for the spread-out kernel bounds.  The bounds only
/// assert existence of such constants, so the certifier takes them as input;
/// fit_assumption_D recovers the tightest values seen on a grid.
struct DConstants {
  double eta = 0.1;
  double c1 = 0.05;
  double c2 = 2.0;
  double C = 2.0;
  double eps = 0.5;  // moment order 2 + 2*eps
};

struct FittedDConstants {
  double c1, c2, eta, C;
};

struct KGridSpec {
  int tensor_per_axis = 9;
  int lowdisc = 1024;  // deterministic additive-recurrence fill
};

/// Symmetric tensor grid over [-pi,pi]^d plus a low-discrepancy fill.
std::vector<FourierPoint> torus_grid(int d, const KGridSpec& spec = {});

/// Same construction restricted to ||k||_inf <= kinf.
std::vector<FourierPoint> smallk_grid(int d, double kinf, const KGridSpec& spec = {});

/// Checks, on the given grid:
///   normalisation, ||D||_inf <= C L^-d, sigma^2 <= C L^2,
///   c1 L^2 k^2 <= a(k) <= c2 L^2 k^2   on ||k||_inf <= 1/L,
///   a(k) > eta                         on ||k||_inf >= 1/L,
///   a(k) < 2 - eta                     everywhere,
///   moment(2 + 2 eps) finite.
/// A grid check certifies up to grid resolution; sizes go into report meta.
CertificateReport certify_assumption_D(const StepKernel& D, const DConstants& c,
                                       const std::vector<FourierPoint>& kgrid);

FittedDConstants fit_assumption_D(const StepKernel& D,
                                  const std::vector<FourierPoint>& kgrid);

}  // namespace lace
