#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lace {

/// One certified inequality: actual <= bound, margin = bound - actual.
/// Lower bounds are recorded with the roles arranged so that `pass`
/// still means actual <= bound.
struct CheckRecord {
  std::string check_id;
  int index = -1;  // j or m; -1 when not indexed
  std::optional<std::vector<double>> k;
  double bound = 0.0;
  double actual = 0.0;
  double margin = 0.0;
  double constant = std::numeric_limits<double>::quiet_NaN();
  bool pass = true;
  std::string note;
};

struct CertificateReport {
  std::vector<CheckRecord> records;
  std::map<std::string, std::string> meta;  // grid sizes, coverage notes, ...

  /// Roundoff guard at equality cases.
  static bool bound_pass(double actual, double bound) {
    return actual <= bound * (1.0 + 1e-12) + 1e-300;
  }

  /// Record for `actual <= bound`.
  static CheckRecord upper(std::string id, int index, double bound, double actual);

  void add(CheckRecord r) { records.push_back(std::move(r)); }
  void append(CertificateReport other);

  int failures() const;
  bool all_pass() const { return failures() == 0; }
  std::string first_failure() const;
  double worst_margin() const;

  std::string to_json_string(int indent = 2) const;
  std::string to_csv_string() const;
};

}  // namespace lace
