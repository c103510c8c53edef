#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lace/fourier_point.hpp"
#include "lace/step_kernel.hpp"

namespace lace {

/// Provider of the recursion data g_m(k;z), e_m(k;z) with exact k=0
/// derivatives.  Evaluators are pure; instances may be shared read-only
/// across threads.
///
/// Conventions: g_1(k;z) = z D^(k) and e_1 = 0 always; orders beyond
/// max_order() are exactly zero when higher_orders_vanish(), otherwise
/// requesting them is a truncation error.
class ModelCoefficients {
 public:
  explicit ModelCoefficients(StepKernel kernel) : kernel_(std::move(kernel)) {}
  virtual ~ModelCoefficients() = default;

  const StepKernel& kernel() const { return kernel_; }
  int dim() const { return kernel_.dim(); }

  virtual int max_order() const = 0;
  virtual bool higher_orders_vanish() const { return true; }

  virtual double g(int m, const FourierPoint& k, double z) const = 0;
  virtual double e(int m, const FourierPoint& k, double z) const = 0;

  /// Laplacian of g_m at k = 0 (exact, not finite-differenced).
  virtual double g_lap(int m, double z) const = 0;
  virtual double e_lap(int m, double z) const = 0;

  /// d/dz g_m(0;z) when the model has it in closed form.
  virtual std::optional<double> g_dz(int, double) const { return std::nullopt; }

  /// Decay exponent of |g_m| ~ beta0 m^-theta, when the family has one.
  virtual std::optional<double> theta() const { return std::nullopt; }
  virtual double beta0() const { return 0.0; }

  // Order profiles for the evolution hot path: out[m-1] = coefficient of
  // order m, m = 1..M.  Defaults loop the scalar evaluators.
  virtual void g_profile(const FourierPoint& k, double z, int M,
                         std::span<double> out) const;
  virtual void e_profile(const FourierPoint& k, double z, int M,
                         std::span<double> out) const;
  virtual void g_lap_profile(double z, int M, std::span<double> out) const;
  virtual void e_lap_profile(double z, int M, std::span<double> out) const;

 protected:
  void require_order(int m) const;
  StepKernel kernel_;
};

/// g_1 = z D^, everything else zero: the exactly solvable reference model
/// with f_n = (z D^)^n.
class PureRandomWalk final : public ModelCoefficients {
 public:
  explicit PureRandomWalk(StepKernel kernel);
  int max_order() const override { return 1; }
  double g(int m, const FourierPoint& k, double z) const override;
  double e(int, const FourierPoint&, double) const override { return 0.0; }
  double g_lap(int m, double z) const override;
  double e_lap(int, double) const override { return 0.0; }
  std::optional<double> g_dz(int m, double z) const override;
};

/// Closed-form family with power-law decay:
///   g_m(k;z) = beta0 z^m m^-theta D^(k)^2   (m >= 2),
///   e_m(k;z) = beta_e z^m m^-theta D^(k)^2  (m >= 2),
/// which satisfies the coefficient bound families with explicit constants.
/// Its Taylor remainder in a(k) is exactly beta0 z^m m^-theta a(k)^2.
struct SyntheticFamilySpec {
  double beta0 = 0.01;
  double beta_e = 0.0;
  double theta = 2.5;  // must exceed 2
};

class SyntheticThetaModel final : public ModelCoefficients {
 public:
  SyntheticThetaModel(StepKernel kernel, SyntheticFamilySpec spec);
  int max_order() const override { return std::numeric_limits<int>::max(); }
  double g(int m, const FourierPoint& k, double z) const override;
  double e(int m, const FourierPoint& k, double z) const override;
  double g_lap(int m, double z) const override;
  double e_lap(int m, double z) const override;
  std::optional<double> g_dz(int m, double z) const override;
  std::optional<double> theta() const override { return spec_.theta; }
  double beta0() const override { return spec_.beta0; }
  const SyntheticFamilySpec& spec() const { return spec_; }

  void g_profile(const FourierPoint& k, double z, int M,
                 std::span<double> out) const override;
  void e_profile(const FourierPoint& k, double z, int M,
                 std::span<double> out) const override;
  void g_lap_profile(double z, int M, std::span<double> out) const override;
  void e_lap_profile(double z, int M, std::span<double> out) const override;

 private:
  SyntheticFamilySpec spec_;
};

/// Tabulated x-space model: per-order sparse lattice tables with declared
/// integer z-powers; Fourier values and derivatives are direct lattice sums.
class XSpaceModel final : public ModelCoefficients {
 public:
  struct OrderTable {
    int z_power = 1;
    std::vector<Site> g;
    std::vector<Site> e;
  };

  XSpaceModel(StepKernel kernel, int M, std::vector<OrderTable> tables,
              bool higher_orders_zero, std::optional<double> theta,
              double beta0);

  int max_order() const override { return M_; }
  bool higher_orders_vanish() const override { return higher_zero_; }
  double g(int m, const FourierPoint& k, double z) const override;
  double e(int m, const FourierPoint& k, double z) const override;
  double g_lap(int m, double z) const override;
  double e_lap(int m, double z) const override;
  std::optional<double> g_dz(int m, double z) const override;
  std::optional<double> theta() const override { return theta_; }
  double beta0() const override { return beta0_; }

  const OrderTable& table(int m) const { return tables_.at(m - 2); }

 private:
  int M_;
  std::vector<OrderTable> tables_;  // orders 2..M
  bool higher_zero_;
  std::optional<double> theta_;
  double beta0_;
};

std::unique_ptr<ModelCoefficients> pure_random_walk(StepKernel kernel);
std::unique_ptr<ModelCoefficients> synthetic_theta(StepKernel kernel,
                                                   SyntheticFamilySpec spec);
std::unique_ptr<ModelCoefficients> load_xspace_model(const std::string& path,
                                                     StepKernel kernel);
std::unique_ptr<ModelCoefficients> xspace_model_from_json_string(
    const std::string& text, StepKernel kernel);

}  // namespace lace
