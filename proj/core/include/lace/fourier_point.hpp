#pragma once

#include <cmath>
#include <vector>

#include "lace/errors.hpp"

namespace lace {

/// A point of the Fourier torus [-pi, pi]^d, radians per lattice unit.
class FourierPoint {
 public:
  FourierPoint() = default;

  explicit FourierPoint(std::vector<double> comps) : c_(std::move(comps)) {
    constexpr double kPi = 3.14159265358979323846;
    for (double x : c_) {
      if (!(std::abs(x) <= kPi * (1.0 + 1e-12)))
        throw InvalidParameter("Fourier component outside [-pi, pi]");
    }
  }

  static FourierPoint zero(int d) { return FourierPoint(std::vector<double>(d, 0.0)); }

  static FourierPoint axis(int d, int ax, double t) {
    std::vector<double> c(d, 0.0);
    c.at(ax) = t;
    return FourierPoint(std::move(c));
  }

  int dim() const { return static_cast<int>(c_.size()); }
  double operator[](int i) const { return c_[i]; }
  const std::vector<double>& comps() const { return c_; }

  bool is_zero() const {
    for (double x : c_)
      if (x != 0.0) return false;
    return true;
  }

  double inf_norm() const {
    double m = 0.0;
    for (double x : c_) m = std::max(m, std::abs(x));
    return m;
  }

  double squared_norm() const {
    double s = 0.0;
    for (double x : c_) s += x * x;
    return s;
  }

  bool operator==(const FourierPoint&) const = default;

 private:
  std::vector<double> c_;
};

}  // namespace lace
