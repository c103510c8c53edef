#include "lace/step_kernel.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lace/errors.hpp"
#include "symmetry_check.hpp"

namespace lace {

using ordered_json = nlohmann::ordered_json;

StepKernel::StepKernel(int d, int L, std::vector<Site> support)
    : d_(d), L_(L), sites_(std::move(support)) {
  if (d_ <= 0 || L_ <= 0) throw InvalidParameter("kernel needs d >= 1 and L >= 1");
  validate();
  sigma2_ = moment(2.0);
}

void StepKernel::validate() const {
  if (sites_.empty()) throw InvalidParameter("kernel with empty support");
  Rational total(0, 1);
  std::set<std::vector<int>> seen;
  for (const auto& s : sites_) {
    if (static_cast<int>(s.x.size()) != d_)
      throw InvalidParameter("kernel site with wrong dimension");
    if (s.w.num < 0) throw InvalidParameter("negative kernel weight");
    for (int c : s.x) {
      if (c > L_ || c < -L_) throw InvalidParameter("kernel site outside range L");
    }
    if (!seen.insert(s.x).second) throw InvalidParameter("duplicate kernel site");
    total = total + s.w;
  }
  if (!(total == Rational(1, 1))) {
    if (std::abs(total.value() - 1.0) > 1e-12)
      throw InvalidParameter("kernel weights must sum to 1 (got " + total.str() + ")");
  }
  if (auto v = detail::find_symmetry_violation(sites_)) {
    std::ostringstream os;
    os << "kernel not symmetric: site (";
    for (int c : v->present) os << c << " ";
    os << ") has no matching image (";
    for (int c : v->image) os << c << " ";
    os << ")";
    throw InvalidParameter(os.str());
  }
}

StepKernel StepKernel::uniform_box(int d, int L, bool include_origin) {
  if (d <= 0 || L <= 0) throw InvalidParameter("uniform box needs d >= 1, L >= 1");
  long long box = 1;
  for (int i = 0; i < d; ++i) box *= (2LL * L + 1);
  const long long count = include_origin ? box : box - 1;
  if (box > 40'000'000LL)
    throw InvalidParameter("uniform box support too large to enumerate");

  std::vector<Site> sites;
  sites.reserve(static_cast<std::size_t>(count));
  std::vector<int> x(d, -L);
  for (;;) {
    bool origin = true;
    for (int c : x)
      if (c != 0) origin = false;
    if (!origin || include_origin) sites.push_back(Site{x, Rational(1, count)});
    int i = 0;
    for (; i < d; ++i) {
      if (x[i] < L) {
        ++x[i];
        break;
      }
      x[i] = -L;
    }
    if (i == d) break;
  }
  StepKernel k(d, L, std::move(sites));
  k.box_ = BoxSpec{L, include_origin, count};
  return k;
}

StepKernel build_uniform_box(int d, int L, bool include_origin) {
  return StepKernel::uniform_box(d, L, include_origin);
}

double StepKernel::fourier(const FourierPoint& k) const {
  if (k.dim() != d_) throw InvalidParameter("Fourier point of wrong dimension");
  if (k.is_zero()) return 1.0;  // normalisation D^(0) = 1 is exact
  if (box_) {
    // Box kernels factorise: sum over the full box is a product of
    // per-axis Dirichlet sums 1 + 2 sum_j cos(j k_l).
    double prod = 1.0;
    for (int l = 0; l < d_; ++l) {
      double s = 1.0;
      for (int j = 1; j <= box_->L; ++j) s += 2.0 * std::cos(j * k[l]);
      prod *= s;
    }
    const double num = box_->include_origin ? prod : prod - 1.0;
    return num / static_cast<double>(box_->count);
  }
  double acc = 0.0;
  for (const auto& s : sites_) {
    double dot = 0.0;
    for (int i = 0; i < d_; ++i) dot += k[i] * s.x[i];
    acc += s.w.value() * std::cos(dot);
  }
  return acc;
}

double StepKernel::moment(double r) const {
  if (r < 0.0) throw InvalidParameter("moment order must be >= 0");
  double acc = 0.0;
  for (const auto& s : sites_) {
    double x2 = 0.0;
    for (int c : s.x) x2 += static_cast<double>(c) * c;
    acc += s.w.value() * std::pow(x2, r / 2.0);
  }
  return acc;
}

double StepKernel::max_weight() const {
  double m = 0.0;
  for (const auto& s : sites_) m = std::max(m, s.w.value());
  return m;
}

std::string StepKernel::to_json_string(int indent) const {
  ordered_json j;
  j["d"] = d_;
  j["L"] = L_;
  ordered_json entries = ordered_json::array();
  for (const auto& s : sites_) {
    ordered_json e;
    e["x"] = s.x;
    e["weight"] = s.w.str();
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j.dump(indent);
}

StepKernel StepKernel::from_json_string(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw FileFormatError(std::string("kernel file is not valid JSON: ") + e.what());
  }
  for (const auto& [key, _] : j.items()) {
    if (key != "d" && key != "L" && key != "entries")
      throw FileFormatError("unknown kernel field '" + key + "'");
  }
  if (!j.contains("d") || !j.contains("L") || !j.contains("entries"))
    throw FileFormatError("kernel file needs fields d, L, entries");
  const int d = j["d"].get<int>();
  const int L = j["L"].get<int>();
  std::vector<Site> sites;
  for (const auto& e : j["entries"]) {
    Site s;
    s.x = e.at("x").get<std::vector<int>>();
    const auto& w = e.at("weight");
    s.w = w.is_string() ? Rational::parse(w.get<std::string>())
                        : Rational::parse(w.dump());
    sites.push_back(std::move(s));
  }
  return StepKernel(d, L, std::move(sites));
}

StepKernel StepKernel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError("cannot open kernel file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_string(buf.str());
}

void StepKernel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw FileFormatError("cannot write kernel file: " + path);
  out << to_json_string() << "\n";
}

}  // namespace lace
