#pragma once

#include <cmath>

#include "lace/certifier.hpp"
#include "lace/model.hpp"

namespace helpers {

inline lace::SyntheticFamilySpec synth(double beta0, double theta,
                                       double beta_e = 0.0) {
  lace::SyntheticFamilySpec s;
  s.beta0 = beta0;
  s.theta = theta;
  s.beta_e = beta_e;
  return s;
}

// The documented certification config: theta=2.5, eps=0.4, gamma=0.2,
// delta=0.15, lambda=2.4, K = (5, 15, 500, 40, 400), c = 1, on d=5, L=3,
// p* = 2 (beta = 3^-2.5).
inline lace::InductionConfig doc_config(int d = 5, int L = 3) {
  lace::InductionConfig cfg;
  cfg.d = d;
  cfg.theta = 2.5;
  cfg.epsilon = 0.4;
  cfg.pstar = 2.0;
  cfg.p_list = {2.0};
  cfg.gamma = 0.2;
  cfg.delta = 0.15;
  cfg.lambda = 2.4;
  cfg.K1 = 5;
  cfg.K2 = 15;
  cfg.K3 = 500;
  cfg.K4 = 40;
  cfg.K5 = 400;
  cfg.c = 1.0;
  cfg.beta = lace::compute_beta(L, d, cfg.pstar);
  return cfg;
}

// Solves a(t e_1) = target along the first axis by bisection on the initial
// monotone stretch of a.
inline double solve_gap_target(const lace::StepKernel& D, double target) {
  const int d = D.dim();
  auto a_of = [&](double t) { return D.gap(lace::FourierPoint::axis(d, 0, t)); };
  // find the first local max of a along the axis
  double t_hi = 3.14159265358979323846;
  double prev = 0.0;
  for (double t = 1e-3; t <= 3.141; t += 1e-3) {
    const double a = a_of(t);
    if (a < prev) {
      t_hi = t;
      break;
    }
    prev = a;
  }
  if (target > a_of(t_hi)) throw lace::InvalidParameter("gap target unreachable");
  double lo = 0.0, hi = t_hi;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (a_of(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace helpers
