#include "lace/report.hpp"

#include <cmath>
#include <sstream>

#include "fmt_util.hpp"
#include "json.hpp"

namespace lace {

using ordered_json = nlohmann::ordered_json;
using detail::csv_quote;
using detail::fmt;

namespace {

double json_safe(double v) {
  if (std::isnan(v)) return v;  // handled by caller
  const double lim = 1e308;
  if (v > lim) return lim;
  if (v < -lim) return -lim;
  return v;
}

}  // namespace

CheckRecord CertificateReport::upper(std::string id, int index, double bound,
                                     double actual) {
  CheckRecord r;
  r.check_id = std::move(id);
  r.index = index;
  r.bound = bound;
  r.actual = actual;
  r.margin = bound - actual;
  r.pass = bound_pass(actual, bound);
  return r;
}

void CertificateReport::append(CertificateReport other) {
  for (auto& r : other.records) records.push_back(std::move(r));
  for (auto& [k, v] : other.meta) meta.emplace(k, v);
}

int CertificateReport::failures() const {
  int n = 0;
  for (const auto& r : records)
    if (!r.pass) ++n;
  return n;
}

std::string CertificateReport::first_failure() const {
  for (const auto& r : records) {
    if (!r.pass) {
      std::string s = r.check_id;
      if (r.index >= 0) s += "[" + std::to_string(r.index) + "]";
      return s;
    }
  }
  return "";
}

double CertificateReport::worst_margin() const {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& r : records) w = std::min(w, r.margin);
  return records.empty() ? 0.0 : w;
}

std::string CertificateReport::to_json_string(int indent) const {
  ordered_json j;
  ordered_json recs = ordered_json::array();
  for (const auto& r : records) {
    ordered_json o;
    o["name"] = r.check_id;
    if (r.index >= 0) o["index"] = r.index;
    if (!std::isnan(r.constant)) o["constant"] = json_safe(r.constant);
    if (r.k) o["worst_k"] = *r.k;
    o["bound"] = json_safe(r.bound);
    o["actual"] = json_safe(r.actual);
    o["margin"] = json_safe(r.margin);
    o["pass"] = r.pass;
    if (!r.note.empty()) o["note"] = r.note;
    recs.push_back(std::move(o));
  }
  j["records"] = std::move(recs);
  ordered_json summary;
  summary["total"] = records.size();
  summary["failures"] = failures();
  summary["first_failure"] = first_failure();
  summary["worst_margin"] = json_safe(worst_margin());
  j["summary"] = std::move(summary);
  if (!meta.empty()) {
    ordered_json m;
    for (const auto& [k, v] : meta) m[k] = v;
    j["meta"] = std::move(m);
  }
  return j.dump(indent);
}

std::string CertificateReport::to_csv_string() const {
  std::ostringstream os;
  os << "name,index,worst_k,constant,bound,actual,margin,pass,note\r\n";
  for (const auto& r : records) {
    os << csv_quote(r.check_id) << ",";
    if (r.index >= 0) os << r.index;
    os << ",";
    if (r.k) {
      std::string ks;
      for (std::size_t i = 0; i < r.k->size(); ++i) {
        if (i) ks += ";";
        ks += fmt((*r.k)[i]);
      }
      os << csv_quote(ks);
    }
    os << ",";
    if (!std::isnan(r.constant)) os << fmt(r.constant);
    os << "," << fmt(r.bound) << "," << fmt(r.actual) << "," << fmt(r.margin)
       << "," << (r.pass ? "1" : "0") << "," << csv_quote(r.note) << "\r\n";
  }
  return os.str();
}

}  // namespace lace
