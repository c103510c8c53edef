#pragma once

#include <cstdint>
#include <string>

namespace lace {

/// Exact weight num/den with den > 0 and gcd(num, den) == 1.
///
/// Kernel and table weights are kept rational where the input provides them
/// (uniform kernels, "1/8"-style file entries) so that normalisation checks
/// are exact; evaluation converts to double.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);

  /// Accepts "3", "-1/8", and plain decimals like "0.125".
  static Rational parse(const std::string& s);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  Rational operator+(const Rational& o) const;
  bool operator==(const Rational& o) const = default;
  std::string str() const;
};

}  // namespace lace
