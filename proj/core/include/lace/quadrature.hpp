#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lace/fourier_point.hpp"
#include "lace/model.hpp"

namespace lace {

enum class QuadMethod { Auto, TensorGrid, MonteCarlo, ProductFactorized };

/// Auto picks tensor grids for d <= 3 and seeded Monte Carlo above.
/// Tensor node counts are bumped to at least 4L per axis so the kernel's
/// oscillation is resolved; Monte Carlo is reproducible from the seed.
struct QuadratureSpec {
  QuadMethod method = QuadMethod::Auto;
  int nodes_per_axis = 32;
  long samples = 16384;
  std::uint64_t seed = 12345;
  double target_rel_accuracy = 1e-6;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // refinement difference or MC standard error
  bool accuracy_met = true;
  std::string method;
};

/// Integral over [-pi,pi]^d against the normalised measure d^dk/(2pi)^d.
QuadResult torus_integrate(const std::function<double(const FourierPoint&)>& f,
                           int d, const QuadratureSpec& spec, int min_per_axis = 4);

/// Same for integrands that factor as prod_l phi(k_l).
QuadResult torus_integrate_product(const std::function<double(double)>& phi, int d,
                                   const QuadratureSpec& spec, int min_per_axis = 4);

struct NormSweepRow {
  int n = 0;
  double p = 1.0;
  double norm = 0.0;
  double error = 0.0;
  std::array<double, 4> region{};  // contributions to norm^p from R1..R4
  bool region_valid = false;
};

struct NormSweep {
  std::vector<NormSweepRow> rows;
  std::string method;
  long nodes = 0;
  std::uint64_t seed = 0;
  bool accuracy_met = true;  // worst row error against the target
  std::string to_csv() const;
};

struct RegionSpec {
  bool enabled = false;
  double gamma = 0.2;  // a(k) threshold gamma log j / j; split starts at j = 3
};

/// ||D^2 f_n||_p for n = 0..n_max and each p: the engine re-evolves the
/// recursion at every quadrature node (the one dense-k operation).
NormSweep lp_norm_D2f(const ModelCoefficients& model, double z, int n_max,
                      const std::vector<double>& p_list, const QuadratureSpec& spec,
                      const RegionSpec& regions = {});

}  // namespace lace
