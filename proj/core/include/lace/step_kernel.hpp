#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lace/fourier_point.hpp"
#include "lace/rational.hpp"

namespace lace {

/// One lattice site of a kernel or coefficient table.
struct Site {
  std::vector<int> x;
  Rational w;
};

/// Step distribution D_L on Z^d: finite symmetric support with exact
/// rational weights, Fourier evaluator, and moments.
///
/// Invariants enforced at construction:
///  * weights >= 0 and sum to 1 (exactly, in rational arithmetic),
///  * support closed under coordinate sign flips and permutations with
///    equal weights across each orbit,
///  * sites distinct.
class StepKernel {
 public:
  StepKernel(int d, int L, std::vector<Site> support);

  static StepKernel uniform_box(int d, int L, bool include_origin = false);

  int dim() const { return d_; }
  int range() const { return L_; }
  const std::vector<Site>& support() const { return sites_; }

  /// D^(k) = sum_x cos(k.x) D(x).  Returns exactly 1 at k = 0.
  double fourier(const FourierPoint& k) const;

  /// a(k) = 1 - D^(k); zero exactly at k = 0.
  double gap(const FourierPoint& k) const { return 1.0 - fourier(k); }

  /// sum_x |x|^r D(x) (Euclidean |x|).
  double moment(double r) const;

  /// Cached second moment sum_x |x|^2 D(x).
  double sigma2() const { return sigma2_; }

  /// ||D||_inf, the largest weight.
  double max_weight() const;

  std::string to_json_string(int indent = 2) const;
  static StepKernel from_json_string(const std::string& text);
  static StepKernel load(const std::string& path);
  void save(const std::string& path) const;

 private:
  struct BoxSpec {
    int L;
    bool include_origin;
    long long count;
  };

  int d_;
  int L_;
  std::vector<Site> sites_;
  double sigma2_ = 0.0;
  std::optional<BoxSpec> box_;  // fast Fourier path for uniform boxes

  void validate() const;
};

/// Uniform weights on {x : 0 < ||x||_inf <= L} (origin included on request).
StepKernel build_uniform_box(int d, int L, bool include_origin = false);

}  // namespace lace
