#include "lace/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lace/errors.hpp"
#include "symmetry_check.hpp"

namespace lace {

using ordered_json = nlohmann::ordered_json;

void ModelCoefficients::require_order(int m) const {
  if (m < 1) throw InvalidParameter("coefficient order must be >= 1");
  if (m > max_order() && !higher_orders_vanish())
    throw TruncationError(m, "model order insufficient: need order " +
                                 std::to_string(m) + ", have " +
                                 std::to_string(max_order()));
}

void ModelCoefficients::g_profile(const FourierPoint& k, double z, int M,
                                  std::span<double> out) const {
  for (int m = 1; m <= M; ++m) out[m - 1] = g(m, k, z);
}

void ModelCoefficients::e_profile(const FourierPoint& k, double z, int M,
                                  std::span<double> out) const {
  for (int m = 1; m <= M; ++m) out[m - 1] = e(m, k, z);
}

void ModelCoefficients::g_lap_profile(double z, int M, std::span<double> out) const {
  for (int m = 1; m <= M; ++m) out[m - 1] = g_lap(m, z);
}

void ModelCoefficients::e_lap_profile(double z, int M, std::span<double> out) const {
  for (int m = 1; m <= M; ++m) out[m - 1] = e_lap(m, z);
}

// ---------------------------------------------------------------- pure RW

PureRandomWalk::PureRandomWalk(StepKernel kernel)
    : ModelCoefficients(std::move(kernel)) {}

double PureRandomWalk::g(int m, const FourierPoint& k, double z) const {
  require_order(m);
  return m == 1 ? z * kernel_.fourier(k) : 0.0;
}

double PureRandomWalk::g_lap(int m, double z) const {
  require_order(m);
  return m == 1 ? -z * kernel_.sigma2() : 0.0;
}

std::optional<double> PureRandomWalk::g_dz(int m, double) const {
  require_order(m);
  return m == 1 ? 1.0 : 0.0;
}

// ---------------------------------------------------------------- synthetic

SyntheticThetaModel::SyntheticThetaModel(StepKernel kernel, SyntheticFamilySpec spec)
    : ModelCoefficients(std::move(kernel)), spec_(spec) {
  if (!(spec_.theta > 2.0))
    throw InvalidParameter("synthetic family needs theta > 2");
}

double SyntheticThetaModel::g(int m, const FourierPoint& k, double z) const {
  require_order(m);
  const double dh = kernel_.fourier(k);
  if (m == 1) return z * dh;
  return spec_.beta0 * std::pow(z, m) * std::pow(m, -spec_.theta) * dh * dh;
}

double SyntheticThetaModel::e(int m, const FourierPoint& k, double z) const {
  require_order(m);
  if (m == 1) return 0.0;
  const double dh = kernel_.fourier(k);
  return spec_.beta_e * std::pow(z, m) * std::pow(m, -spec_.theta) * dh * dh;
}

double SyntheticThetaModel::g_lap(int m, double z) const {
  require_order(m);
  if (m == 1) return -z * kernel_.sigma2();
  // Lap(D^2)(0) = -2 sigma^2 since grad D^(0) = 0 by symmetry.
  return -2.0 * kernel_.sigma2() * spec_.beta0 * std::pow(z, m) *
         std::pow(m, -spec_.theta);
}

double SyntheticThetaModel::e_lap(int m, double z) const {
  require_order(m);
  if (m == 1) return 0.0;
  return -2.0 * kernel_.sigma2() * spec_.beta_e * std::pow(z, m) *
         std::pow(m, -spec_.theta);
}

std::optional<double> SyntheticThetaModel::g_dz(int m, double z) const {
  require_order(m);
  if (m == 1) return 1.0;
  return spec_.beta0 * m * std::pow(z, m - 1) * std::pow(m, -spec_.theta);
}

void SyntheticThetaModel::g_profile(const FourierPoint& k, double z, int M,
                                    std::span<double> out) const {
  const double dh = kernel_.fourier(k);
  const double d2 = dh * dh;
  if (M >= 1) out[0] = z * dh;
  double zp = z;
  for (int m = 2; m <= M; ++m) {
    zp *= z;
    out[m - 1] = spec_.beta0 * zp * std::pow(m, -spec_.theta) * d2;
  }
}

void SyntheticThetaModel::e_profile(const FourierPoint& k, double z, int M,
                                    std::span<double> out) const {
  if (M >= 1) out[0] = 0.0;
  if (spec_.beta_e == 0.0) {
    for (int m = 2; m <= M; ++m) out[m - 1] = 0.0;
    return;
  }
  const double dh = kernel_.fourier(k);
  const double d2 = dh * dh;
  double zp = z;
  for (int m = 2; m <= M; ++m) {
    zp *= z;
    out[m - 1] = spec_.beta_e * zp * std::pow(m, -spec_.theta) * d2;
  }
}

void SyntheticThetaModel::g_lap_profile(double z, int M, std::span<double> out) const {
  const double s2 = kernel_.sigma2();
  if (M >= 1) out[0] = -z * s2;
  double zp = z;
  for (int m = 2; m <= M; ++m) {
    zp *= z;
    out[m - 1] = -2.0 * s2 * spec_.beta0 * zp * std::pow(m, -spec_.theta);
  }
}

void SyntheticThetaModel::e_lap_profile(double z, int M, std::span<double> out) const {
  const double s2 = kernel_.sigma2();
  if (M >= 1) out[0] = 0.0;
  double zp = z;
  for (int m = 2; m <= M; ++m) {
    zp *= z;
    out[m - 1] = -2.0 * s2 * spec_.beta_e * zp * std::pow(m, -spec_.theta);
  }
}

// ---------------------------------------------------------------- tabulated

namespace {

double table_fourier(const std::vector<Site>& sites, const FourierPoint& k) {
  double acc = 0.0;
  for (const auto& s : sites) {
    double dot = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) dot += k[static_cast<int>(i)] * s.x[i];
    acc += s.w.value() * std::cos(dot);
  }
  return acc;
}

double table_sum(const std::vector<Site>& sites) {
  double acc = 0.0;
  for (const auto& s : sites) acc += s.w.value();
  return acc;
}

double table_x2_sum(const std::vector<Site>& sites) {
  double acc = 0.0;
  for (const auto& s : sites) {
    double x2 = 0.0;
    for (int c : s.x) x2 += static_cast<double>(c) * c;
    acc += s.w.value() * x2;
  }
  return acc;
}

void check_table_symmetry(const std::vector<Site>& sites, int d,
                          const std::string& what) {
  for (const auto& s : sites)
    if (static_cast<int>(s.x.size()) != d)
      throw FileFormatError(what + ": site with wrong dimension");
  if (auto v = detail::find_symmetry_violation(sites)) {
    std::ostringstream os;
    os << what << ": symmetry violation between (";
    for (int c : v->present) os << c << " ";
    os << ") and (";
    for (int c : v->image) os << c << " ";
    os << ")";
    throw FileFormatError(os.str());
  }
}

}  // namespace

XSpaceModel::XSpaceModel(StepKernel kernel, int M, std::vector<OrderTable> tables,
                         bool higher_orders_zero, std::optional<double> theta,
                         double beta0)
    : ModelCoefficients(std::move(kernel)),
      M_(M),
      tables_(std::move(tables)),
      higher_zero_(higher_orders_zero),
      theta_(theta),
      beta0_(beta0) {
  if (M_ < 1) throw InvalidParameter("tabulated model needs M >= 1");
  if (static_cast<int>(tables_.size()) != std::max(0, M_ - 1))
    throw InvalidParameter("tabulated model needs one table per order 2..M");
  const int d = kernel_.dim();
  for (int m = 2; m <= M_; ++m) {
    const auto& t = tables_[m - 2];
    check_table_symmetry(t.g, d, "g_" + std::to_string(m));
    check_table_symmetry(t.e, d, "e_" + std::to_string(m));
  }
}

double XSpaceModel::g(int m, const FourierPoint& k, double z) const {
  require_order(m);
  if (m == 1) return z * kernel_.fourier(k);
  if (m > M_) return 0.0;
  const auto& t = tables_[m - 2];
  return std::pow(z, t.z_power) * table_fourier(t.g, k);
}

double XSpaceModel::e(int m, const FourierPoint& k, double z) const {
  require_order(m);
  if (m == 1 || m > M_) return 0.0;
  const auto& t = tables_[m - 2];
  if (t.e.empty()) return 0.0;
  return std::pow(z, t.z_power) * table_fourier(t.e, k);
}

double XSpaceModel::g_lap(int m, double z) const {
  require_order(m);
  if (m == 1) return -z * kernel_.sigma2();
  if (m > M_) return 0.0;
  const auto& t = tables_[m - 2];
  return -std::pow(z, t.z_power) * table_x2_sum(t.g);
}

double XSpaceModel::e_lap(int m, double z) const {
  require_order(m);
  if (m == 1 || m > M_) return 0.0;
  const auto& t = tables_[m - 2];
  if (t.e.empty()) return 0.0;
  return -std::pow(z, t.z_power) * table_x2_sum(t.e);
}

std::optional<double> XSpaceModel::g_dz(int m, double z) const {
  require_order(m);
  if (m == 1) return 1.0;
  if (m > M_) return 0.0;
  const auto& t = tables_[m - 2];
  return t.z_power * std::pow(z, t.z_power - 1) * table_sum(t.g);
}

// ---------------------------------------------------------------- factories

std::unique_ptr<ModelCoefficients> pure_random_walk(StepKernel kernel) {
  return std::make_unique<PureRandomWalk>(std::move(kernel));
}

std::unique_ptr<ModelCoefficients> synthetic_theta(StepKernel kernel,
                                                   SyntheticFamilySpec spec) {
  return std::make_unique<SyntheticThetaModel>(std::move(kernel), spec);
}

namespace {

std::vector<Site> parse_entries(const ordered_json& arr) {
  std::vector<Site> sites;
  for (const auto& e : arr) {
    Site s;
    s.x = e.at("x").get<std::vector<int>>();
    const auto& w = e.at("w");
    s.w = w.is_string() ? Rational::parse(w.get<std::string>())
                        : Rational::parse(w.dump());
    sites.push_back(std::move(s));
  }
  return sites;
}

}  // namespace

std::unique_ptr<ModelCoefficients> xspace_model_from_json_string(
    const std::string& text, StepKernel kernel) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw FileFormatError(std::string("model file is not valid JSON: ") + e.what());
  }
  for (const auto& [key, _] : j.items()) {
    if (key != "M" && key != "z_powers" && key != "g" && key != "e" &&
        key != "higher_orders" && key != "theta" && key != "beta0")
      throw FileFormatError("unknown model field '" + key + "'");
  }
  if (!j.contains("M")) throw FileFormatError("model file needs field M");
  const int M = j["M"].get<int>();
  if (M < 1) throw FileFormatError("model file: M must be >= 1");

  std::vector<int> z_powers(std::max(0, M - 1));
  for (std::size_t i = 0; i < z_powers.size(); ++i)
    z_powers[i] = static_cast<int>(i) + 2;  // default: p(m) = m
  if (j.contains("z_powers")) {
    auto zp = j["z_powers"].get<std::vector<int>>();
    if (zp.size() != z_powers.size())
      throw FileFormatError("z_powers must list p(m) for m = 2..M");
    z_powers = std::move(zp);
  }

  std::vector<XSpaceModel::OrderTable> tables(std::max(0, M - 1));
  for (std::size_t i = 0; i < tables.size(); ++i)
    tables[i].z_power = z_powers[i];

  auto fill = [&](const char* key, bool is_g) {
    if (!j.contains(key)) return;
    for (const auto& entry : j[key]) {
      const int m = entry.at("m").get<int>();
      auto sites = parse_entries(entry.at("entries"));
      if (m == 1) {
        // Order 1 is fixed to z D^; a supplied table must reproduce D exactly.
        if (!is_g)
          throw FileFormatError("e_1 must vanish; remove the m=1 e-table");
        std::map<std::vector<int>, double> ref;
        for (const auto& s : kernel.support()) ref[s.x] = s.w.value();
        if (sites.size() != ref.size())
          throw FileFormatError("m=1 g-table inconsistent with z*D^ (size)");
        for (const auto& s : sites) {
          auto it = ref.find(s.x);
          if (it == ref.end() || std::abs(it->second - s.w.value()) > 1e-12)
            throw FileFormatError("m=1 g-table inconsistent with z*D^");
        }
        continue;
      }
      if (m < 1 || m > M)
        throw FileFormatError("table order m out of range: " + std::to_string(m));
      if (is_g)
        tables[m - 2].g = std::move(sites);
      else
        tables[m - 2].e = std::move(sites);
    }
  };
  fill("g", true);
  fill("e", false);

  bool higher_zero = true;
  if (j.contains("higher_orders")) {
    const auto ho = j["higher_orders"].get<std::string>();
    if (ho == "zero")
      higher_zero = true;
    else if (ho == "unknown")
      higher_zero = false;
    else
      throw FileFormatError("higher_orders must be 'zero' or 'unknown'");
  }
  std::optional<double> theta;
  if (j.contains("theta")) theta = j["theta"].get<double>();
  double beta0 = 0.0;
  if (j.contains("beta0")) beta0 = j["beta0"].get<double>();

  return std::make_unique<XSpaceModel>(std::move(kernel), M, std::move(tables),
                                       higher_zero, theta, beta0);
}

std::unique_ptr<ModelCoefficients> load_xspace_model(const std::string& path,
                                                     StepKernel kernel) {
  std::ifstream in(path);
  if (!in) throw FileFormatError("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return xspace_model_from_json_string(buf.str(), std::move(kernel));
}

}  // namespace lace
