#include "lace/rational.hpp"

#include <numeric>
#include <stdexcept>

#include "lace/errors.hpp"

namespace lace {

namespace {

std::int64_t checked_parse_i64(const std::string& s) {
  std::size_t pos = 0;
  const long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw FileFormatError("bad integer literal: '" + s + "'");
  return v;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (den == 0) throw InvalidParameter("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::parse(const std::string& s) {
  if (s.empty()) throw FileFormatError("empty weight literal");
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    return Rational(checked_parse_i64(s.substr(0, slash)),
                    checked_parse_i64(s.substr(slash + 1)));
  }
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    const std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t frac_len = s.size() - dot - 1;
    if (frac_len > 17) throw FileFormatError("decimal weight too long: '" + s + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rational(checked_parse_i64(digits), den);
  }
  return Rational(checked_parse_i64(s), 1);
}

Rational Rational::operator+(const Rational& o) const {
  // Weights are small; 128-bit intermediates avoid overflow in sums.
  const __int128 n = static_cast<__int128>(num) * o.den +
                     static_cast<__int128>(o.num) * den;
  const __int128 d = static_cast<__int128>(den) * o.den;
  const __int128 lim = static_cast<__int128>(INT64_MAX);
  __int128 g = 1;
  {
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    g = a == 0 ? 1 : a;
  }
  const __int128 rn = n / g, rd = d / g;
  if (rn > lim || rn < -lim || rd > lim)
    throw InvalidParameter("rational sum overflow");
  return Rational(static_cast<std::int64_t>(rn), static_cast<std::int64_t>(rd));
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace lace
