#pragma once

// Internal: orbit-based check that a lattice table is invariant under
// coordinate sign flips and permutations.  Not installed.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lace/rational.hpp"
#include "lace/step_kernel.hpp"

namespace lace::detail {

inline std::vector<int> canonical_abs(const std::vector<int>& x) {
  std::vector<int> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = x[i] < 0 ? -x[i] : x[i];
  std::sort(c.begin(), c.end());
  return c;
}

// Orbit size of a point under signed permutations:
//   2^(#nonzero) * d! / prod over repeated |values| of (mult!).
inline long long orbit_size(const std::vector<int>& canon) {
  long long perms = 1;
  for (std::size_t i = 1; i < canon.size(); ++i) perms *= static_cast<long long>(i + 1);
  std::map<int, long long> mult;
  long long nonzero = 0;
  for (int v : canon) {
    ++mult[v];
    if (v != 0) ++nonzero;
  }
  for (auto& [v, m] : mult) {
    for (long long i = 2; i <= m; ++i) perms /= i;
  }
  long long signs = 1;
  for (long long i = 0; i < nonzero; ++i) signs *= 2;
  return perms * signs;
}

// Enumerates the orbit of `canon` (all signed permutations).  Used only on
// the failure path to name a missing image.
inline std::vector<std::vector<int>> enumerate_orbit(std::vector<int> canon) {
  std::vector<std::vector<int>> out;
  std::sort(canon.begin(), canon.end());
  do {
    const int n = static_cast<int>(canon.size());
    std::vector<int> nz;
    for (int i = 0; i < n; ++i)
      if (canon[i] != 0) nz.push_back(i);
    const std::uint32_t lim = 1u << nz.size();
    for (std::uint32_t mask = 0; mask < lim; ++mask) {
      std::vector<int> p = canon;
      for (std::size_t b = 0; b < nz.size(); ++b)
        if (mask & (1u << b)) p[nz[b]] = -p[nz[b]];
      out.push_back(std::move(p));
    }
  } while (std::next_permutation(canon.begin(), canon.end()));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct SymmetryViolation {
  std::vector<int> present;
  std::vector<int> image;  // missing or weight-mismatched point
};

// Returns nullopt if the table is symmetric, otherwise a witness pair.
inline std::optional<SymmetryViolation> find_symmetry_violation(
    const std::vector<Site>& sites) {
  std::map<std::vector<int>, std::pair<Rational, const Site*>> groups;
  std::map<std::vector<int>, long long> counts;
  for (const auto& s : sites) {
    auto c = canonical_abs(s.x);
    auto it = groups.find(c);
    if (it == groups.end()) {
      groups.emplace(c, std::make_pair(s.w, &s));
      counts[c] = 1;
    } else {
      ++counts[c];
      if (!(it->second.first == s.w))
        return SymmetryViolation{it->second.second->x, s.x};
    }
  }
  for (const auto& [c, rep] : groups) {
    const long long expect = orbit_size(c);
    if (counts[c] != expect) {
      // Name a concrete missing image.
      std::map<std::vector<int>, bool> have;
      for (const auto& s : sites)
        if (canonical_abs(s.x) == c) have[s.x] = true;
      for (const auto& p : enumerate_orbit(c)) {
        if (!have.count(p)) return SymmetryViolation{rep.second->x, p};
      }
      return SymmetryViolation{rep.second->x, rep.second->x};
    }
  }
  return std::nullopt;
}

}  // namespace lace::detail
