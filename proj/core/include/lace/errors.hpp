#pragma once

#include <stdexcept>
#include <string>

namespace lace {

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct FileFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The recursion asked for a coefficient order the model cannot supply.
struct TruncationError : std::runtime_error {
  int order;
  TruncationError(int order_, const std::string& what_)
      : std::runtime_error(what_), order(order_) {}
};

struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// |f_n(k)| underflowed along a ratio sequence; names the failing n.
struct RatioBreakdown : std::runtime_error {
  int n;
  explicit RatioBreakdown(int n_)
      : std::runtime_error("ratio breakdown: |f_n(k)| below 1e-300 at n=" +
                           std::to_string(n_)),
        n(n_) {}
};

/// A product factor 1 + r_i(0) is too close to zero to invert.
struct DegenerateFactor : std::runtime_error {
  int index;
  explicit DegenerateFactor(int index_)
      : std::runtime_error("degenerate factor 1+r_i(0) ~ 0 at i=" +
                           std::to_string(index_)),
        index(index_) {}
};

struct DegenerateModel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutOfDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lace
