// lacekit: batch front end for the recursion engine and certifiers.
//
// Subcommands: certify-kernel, run, critical-point, certify-induction,
// gaussian-check, norms, susceptibility.  Every run writes a manifest.json
// listing inputs, the root seed, and a content hash per output file, so a
// rerun with the same config and seed is byte-identical.
//
// Exit codes: 0 ok, 1 failing certificate records, 2 usage/config error,
// 3 stage failure (partial outputs are kept).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lace/asymptotics.hpp"
#include "lace/certifier.hpp"
#include "lace/engine.hpp"
#include "lace/errors.hpp"
#include "lace/kernel_certify.hpp"
#include "lace/model.hpp"
#include "lace/quadrature.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

// ------------------------------------------------------------------ util

std::string fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

void check_keys(const ordered_json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok)
      throw lace::FileFormatError("unknown field '" + key + "' in " + where);
  }
}

struct Manifest {
  fs::path dir;
  std::string command;
  std::uint64_t seed = 0;
  std::string config_hash;
  ordered_json config_echo;
  std::vector<std::pair<std::string, std::string>> outputs;
  std::string failed_stage;
  std::string error;

  void write_output(const std::string& name, const std::string& content) {
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw lace::FileFormatError("cannot write " + (dir / name).string());
    out << content;
    outputs.emplace_back(name, fnv1a64(content));
  }

  void finalize() {
    ordered_json j;
    j["tool"] = "lacekit";
    j["version"] = kVersion;
    j["command"] = command;
    j["seed"] = seed;
    j["config_hash"] = config_hash;
    j["config"] = config_echo;
    ordered_json outs = ordered_json::array();
    for (const auto& [name, hash] : outputs) {
      ordered_json o;
      o["file"] = name;
      o["hash"] = hash;
      outs.push_back(std::move(o));
    }
    j["outputs"] = std::move(outs);
    j["failed_stage"] = failed_stage.empty() ? ordered_json(nullptr)
                                             : ordered_json(failed_stage);
    if (!error.empty()) j["error"] = error;
    fs::create_directories(dir);
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    out << j.dump(2) << "\n";
  }
};

// ------------------------------------------------------------------ config

struct RunConfig {
  // kernel
  bool kernel_from_file = false;
  std::string kernel_path;
  int kd = 5, kL = 3;
  bool include_origin = false;
  // model
  enum class ModelKind { PureRW, Synthetic, File } model_kind = ModelKind::Synthetic;
  double beta0 = 0.01, beta_e = 0.0, mtheta = 2.5;
  std::string model_path;
  // induction
  lace::InductionConfig induction;  // beta filled after the kernel is known
  // run parameters
  bool z_critical = true;
  double z_value = 1.0;
  int N = 200;
  std::vector<double> gap_targets{1e-3, 3e-3, 0.03, 0.2, 0.7};
  std::vector<std::vector<double>> explicit_k;
  lace::QuadratureSpec quad;
  std::uint64_t seed = 12345;
  std::string out_dir = "out";
  double critical_tol = 1e-10;
  double tail_tol = 1e-12;
  int M_max = 200000;
  int max_n_critical = 40000;
  // certification constants
  double K_fbdsp = 40.0;
  double Ce = 0.0, Cg = 0.0;
  double cA_C = 10.0, fder_C = 10.0;
  std::vector<double> eps_primes{0.0};
  // asymptotics
  std::vector<int> n_list{250, 500, 1000, 2000};
  std::vector<double> k_magnitudes{0.5, 1.0, 1.5, 2.0};
  bool diagonal_direction = true;
  std::vector<double> z_list;
  // kernel certification
  lace::DConstants dconst;
  lace::KGridSpec grid;
  bool fit = false;

  ordered_json echo;  // resolved config for the manifest
};

lace::QuadMethod parse_method(const std::string& s) {
  if (s == "auto") return lace::QuadMethod::Auto;
  if (s == "tensor") return lace::QuadMethod::TensorGrid;
  if (s == "monte-carlo") return lace::QuadMethod::MonteCarlo;
  if (s == "product") return lace::QuadMethod::ProductFactorized;
  throw lace::FileFormatError("unknown quadrature method '" + s + "'");
}

RunConfig parse_config(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw lace::FileFormatError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config",
             {"kernel", "model", "induction", "z", "N", "kset", "quadrature",
              "seed", "out_dir", "tolerances", "certify", "asymptotics",
              "kernel_constants", "grid", "fit"});
  RunConfig c;

  if (!j.contains("kernel")) throw lace::FileFormatError("config needs a kernel");
  {
    const auto& k = j["kernel"];
    check_keys(k, "kernel", {"type", "d", "L", "include_origin", "path"});
    const auto type = k.at("type").get<std::string>();
    if (type == "uniform_box") {
      c.kd = k.at("d").get<int>();
      c.kL = k.at("L").get<int>();
      if (k.contains("include_origin"))
        c.include_origin = k["include_origin"].get<bool>();
    } else if (type == "file") {
      c.kernel_from_file = true;
      c.kernel_path = k.at("path").get<std::string>();
    } else {
      throw lace::FileFormatError("unknown kernel type '" + type + "'");
    }
  }

  if (!j.contains("model")) throw lace::FileFormatError("config needs a model");
  {
    const auto& m = j["model"];
    check_keys(m, "model", {"type", "beta0", "beta_e", "theta", "path"});
    const auto type = m.at("type").get<std::string>();
    if (type == "pure_random_walk") {
      c.model_kind = RunConfig::ModelKind::PureRW;
    } else if (type == "synthetic_theta") {
      c.model_kind = RunConfig::ModelKind::Synthetic;
      c.beta0 = m.at("beta0").get<double>();
      c.mtheta = m.at("theta").get<double>();
      if (m.contains("beta_e")) c.beta_e = m["beta_e"].get<double>();
    } else if (type == "file") {
      c.model_kind = RunConfig::ModelKind::File;
      c.model_path = m.at("path").get<std::string>();
    } else {
      throw lace::FileFormatError("unknown model type '" + type + "'");
    }
  }

  if (j.contains("induction")) {
    const auto& i = j["induction"];
    check_keys(i, "induction",
               {"theta", "epsilon", "pstar", "p_list", "gamma", "delta", "lambda",
                "K1", "K2", "K3", "K4", "K5", "c", "Ce", "Cg", "gg_ratio"});
    auto& cfg = c.induction;
    if (i.contains("theta")) cfg.theta = i["theta"].get<double>();
    if (i.contains("epsilon")) cfg.epsilon = i["epsilon"].get<double>();
    if (i.contains("pstar")) cfg.pstar = i["pstar"].get<double>();
    if (i.contains("p_list")) cfg.p_list = i["p_list"].get<std::vector<double>>();
    if (i.contains("gamma")) cfg.gamma = i["gamma"].get<double>();
    if (i.contains("delta")) cfg.delta = i["delta"].get<double>();
    if (i.contains("lambda")) cfg.lambda = i["lambda"].get<double>();
    if (i.contains("K1")) cfg.K1 = i["K1"].get<double>();
    if (i.contains("K2")) cfg.K2 = i["K2"].get<double>();
    if (i.contains("K3")) cfg.K3 = i["K3"].get<double>();
    if (i.contains("K4")) cfg.K4 = i["K4"].get<double>();
    if (i.contains("K5")) cfg.K5 = i["K5"].get<double>();
    if (i.contains("c")) cfg.c = i["c"].get<double>();
    if (i.contains("gg_ratio")) cfg.gg_ratio = i["gg_ratio"].get<double>();
    auto parse_constfn = [](const ordered_json& v) {
      lace::ConstFn f;
      if (v.is_number()) {
        f.value = v.get<double>();
      } else {
        for (const auto& row : v)
          f.table.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
      }
      return f;
    };
    if (i.contains("Ce")) cfg.Ce = parse_constfn(i["Ce"]);
    if (i.contains("Cg")) cfg.Cg = parse_constfn(i["Cg"]);
  }

  if (j.contains("z")) {
    if (j["z"].is_string()) {
      if (j["z"].get<std::string>() != "critical")
        throw lace::FileFormatError("z must be a number or \"critical\"");
      c.z_critical = true;
    } else {
      c.z_critical = false;
      c.z_value = j["z"].get<double>();
    }
  }
  if (j.contains("N")) c.N = j["N"].get<int>();

  if (j.contains("kset")) {
    const auto& k = j["kset"];
    check_keys(k, "kset", {"gap_targets", "explicit"});
    if (k.contains("gap_targets"))
      c.gap_targets = k["gap_targets"].get<std::vector<double>>();
    if (k.contains("explicit"))
      c.explicit_k = k["explicit"].get<std::vector<std::vector<double>>>();
  }

  if (j.contains("quadrature")) {
    const auto& q = j["quadrature"];
    check_keys(q, "quadrature",
               {"method", "nodes_per_axis", "samples", "target_rel_accuracy"});
    if (q.contains("method")) c.quad.method = parse_method(q["method"].get<std::string>());
    if (q.contains("nodes_per_axis"))
      c.quad.nodes_per_axis = q["nodes_per_axis"].get<int>();
    if (q.contains("samples")) c.quad.samples = q["samples"].get<long>();
    if (q.contains("target_rel_accuracy"))
      c.quad.target_rel_accuracy = q["target_rel_accuracy"].get<double>();
  }

  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("fit")) c.fit = j["fit"].get<bool>();

  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    check_keys(t, "tolerances",
               {"critical_tol", "tail_tol", "M_max", "max_n_critical"});
    if (t.contains("critical_tol")) c.critical_tol = t["critical_tol"].get<double>();
    if (t.contains("tail_tol")) c.tail_tol = t["tail_tol"].get<double>();
    if (t.contains("M_max")) c.M_max = t["M_max"].get<int>();
    if (t.contains("max_n_critical"))
      c.max_n_critical = t["max_n_critical"].get<int>();
  }

  if (j.contains("certify")) {
    const auto& t = j["certify"];
    check_keys(t, "certify", {"K", "Ce", "Cg", "cA_C", "fder_C", "eps_primes"});
    if (t.contains("K")) c.K_fbdsp = t["K"].get<double>();
    if (t.contains("Ce")) c.Ce = t["Ce"].get<double>();
    if (t.contains("Cg")) c.Cg = t["Cg"].get<double>();
    if (t.contains("cA_C")) c.cA_C = t["cA_C"].get<double>();
    if (t.contains("fder_C")) c.fder_C = t["fder_C"].get<double>();
    if (t.contains("eps_primes"))
      c.eps_primes = t["eps_primes"].get<std::vector<double>>();
  }

  if (j.contains("asymptotics")) {
    const auto& a = j["asymptotics"];
    check_keys(a, "asymptotics",
               {"n_list", "k_magnitudes", "diagonal_direction", "z_list"});
    if (a.contains("n_list")) c.n_list = a["n_list"].get<std::vector<int>>();
    if (a.contains("k_magnitudes"))
      c.k_magnitudes = a["k_magnitudes"].get<std::vector<double>>();
    if (a.contains("diagonal_direction"))
      c.diagonal_direction = a["diagonal_direction"].get<bool>();
    if (a.contains("z_list")) c.z_list = a["z_list"].get<std::vector<double>>();
  }

  if (j.contains("kernel_constants")) {
    const auto& d = j["kernel_constants"];
    check_keys(d, "kernel_constants", {"eta", "c1", "c2", "C", "eps"});
    if (d.contains("eta")) c.dconst.eta = d["eta"].get<double>();
    if (d.contains("c1")) c.dconst.c1 = d["c1"].get<double>();
    if (d.contains("c2")) c.dconst.c2 = d["c2"].get<double>();
    if (d.contains("C")) c.dconst.C = d["C"].get<double>();
    if (d.contains("eps")) c.dconst.eps = d["eps"].get<double>();
  }

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    check_keys(g, "grid", {"tensor_per_axis", "lowdisc"});
    if (g.contains("tensor_per_axis"))
      c.grid.tensor_per_axis = g["tensor_per_axis"].get<int>();
    if (g.contains("lowdisc")) c.grid.lowdisc = g["lowdisc"].get<int>();
  }

  c.echo = j;
  return c;
}

// ------------------------------------------------------------------ setup

lace::StepKernel build_kernel(const RunConfig& c) {
  if (c.kernel_from_file) return lace::StepKernel::load(c.kernel_path);
  return lace::build_uniform_box(c.kd, c.kL, c.include_origin);
}

std::unique_ptr<lace::ModelCoefficients> build_model(const RunConfig& c,
                                                     lace::StepKernel kernel) {
  switch (c.model_kind) {
    case RunConfig::ModelKind::PureRW:
      return lace::pure_random_walk(std::move(kernel));
    case RunConfig::ModelKind::Synthetic: {
      lace::SyntheticFamilySpec s;
      s.beta0 = c.beta0;
      s.beta_e = c.beta_e;
      s.theta = c.mtheta;
      return lace::synthetic_theta(std::move(kernel), s);
    }
    case RunConfig::ModelKind::File:
      return lace::load_xspace_model(c.model_path, std::move(kernel));
  }
  throw lace::InvalidParameter("unreachable model kind");
}

lace::InductionConfig induction_for(const RunConfig& c, const lace::StepKernel& D) {
  lace::InductionConfig cfg = c.induction;
  cfg.d = D.dim();
  cfg.beta = lace::compute_beta(D.range(), D.dim(), cfg.pstar);
  return cfg;
}

// Gap targets solved along the first axis; unreachable targets are clamped
// to just under the axis maximum.
std::vector<lace::FourierPoint> build_kset(const RunConfig& c,
                                           const lace::StepKernel& D) {
  const int d = D.dim();
  std::vector<lace::FourierPoint> kset{lace::FourierPoint::zero(d)};
  auto a_of = [&](double t) { return D.gap(lace::FourierPoint::axis(d, 0, t)); };
  double t_peak = 3.14159265358979323846;
  double a_prev = 0.0;
  for (double t = 1e-3; t <= 3.141; t += 1e-3) {
    const double a = a_of(t);
    if (a < a_prev) {
      t_peak = t;
      break;
    }
    a_prev = a;
  }
  const double a_max = a_of(t_peak);
  for (double target : c.gap_targets) {
    const double goal = std::min(target, 0.98 * a_max);
    double lo = 0.0, hi = t_peak;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (a_of(mid) < goal ? lo : hi) = mid;
    }
    kset.push_back(lace::FourierPoint::axis(d, 0, 0.5 * (lo + hi)));
  }
  for (const auto& v : c.explicit_k) kset.push_back(lace::FourierPoint(v));
  return kset;
}

double resolve_z(const RunConfig& c, const lace::ModelCoefficients& model,
                 lace::CriticalPointResult* out_cp = nullptr) {
  if (!c.z_critical) return c.z_value;
  const auto cp = lace::critical_point(model, c.max_n_critical, c.critical_tol);
  if (out_cp) *out_cp = cp;
  return cp.z_c;
}

ordered_json critical_point_json(const lace::CriticalPointResult& cp) {
  ordered_json j;
  j["z_c"] = cp.z_c;
  j["error_bound"] = cp.error_bound;
  j["n_used"] = cp.n_used;
  j["tail_converged"] = cp.tail_converged;
  return j;
}

// ------------------------------------------------------------------ commands

int cmd_certify_kernel(const RunConfig& c, Manifest& man) {
  const auto D = build_kernel(c);
  man.failed_stage = "certify-kernel";
  // Cover both gap regimes: the full torus and ||k||_inf <= 1/L.
  auto grid = lace::torus_grid(D.dim(), c.grid);
  const auto small = lace::smallk_grid(D.dim(), 1.0 / D.range(), c.grid);
  grid.insert(grid.end(), small.begin(), small.end());
  const auto rep = lace::certify_assumption_D(D, c.dconst, grid);
  man.write_output("kernel_certificate.json", rep.to_json_string() + "\n");
  man.write_output("kernel_certificate.csv", rep.to_csv_string());
  if (c.fit) {
    const auto f = lace::fit_assumption_D(D, grid);
    ordered_json j;
    j["c1"] = f.c1;
    j["c2"] = f.c2;
    j["eta"] = f.eta;
    j["C"] = f.C;
    man.write_output("kernel_fitted_constants.json", j.dump(2) + "\n");
  }
  man.failed_stage.clear();
  return rep.all_pass() ? 0 : 1;
}

int cmd_critical_point(const RunConfig& c, Manifest& man) {
  const auto model = build_model(c, build_kernel(c));
  man.failed_stage = "critical-point";
  const auto cp = lace::critical_point(*model, c.max_n_critical, c.critical_tol);
  man.write_output("critical_point.json", critical_point_json(cp).dump(2) + "\n");
  const auto zs = lace::zn_sequence(*model, std::min(c.N, cp.n_used));
  std::ostringstream os;
  os << "n,z_n\r\n";
  for (std::size_t n = 0; n < zs.size(); ++n) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", zs[n]);
    os << n << "," << buf << "\r\n";
  }
  man.write_output("zn_sequence.csv", os.str());
  man.failed_stage.clear();
  return 0;
}

int cmd_run(const RunConfig& c, Manifest& man) {
  const auto D = build_kernel(c);
  const auto model = build_model(c, D);
  const auto cfg = induction_for(c, D);

  man.failed_stage = "validate-config";
  const auto vrep = lace::validate_config(cfg);
  man.write_output("config_validation.json", vrep.to_json_string() + "\n");

  man.failed_stage = "critical-point";
  lace::CriticalPointResult cp{c.z_value, 0.0, 0, true};
  const double z = resolve_z(c, *model, &cp);
  man.write_output("critical_point.json", critical_point_json(cp).dump(2) + "\n");

  man.failed_stage = "evolve";
  auto qspec = c.quad;
  qspec.seed = c.seed;
  const auto kset = build_kset(c, D);
  lace::EvolveOptions eopt;
  eopt.compensated = c.N > 10000;
  const auto trace = lace::evolve(*model, z, kset, c.N, eopt);
  man.write_output("trace.csv", lace::trace_to_csv(trace));

  man.failed_stage = "constants";
  const auto lc = lace::constants_Av(*model, z, c.M_max, c.tail_tol);
  man.write_output("constants.json", lc.to_json_string() + "\n");

  man.failed_stage = "certify-induction";
  const auto hrep = lace::check_H1_H4(trace, D, cfg);
  man.write_output("certificate_h.json", hrep.to_json_string() + "\n");
  man.write_output("certificate_h.csv", hrep.to_csv_string());

  man.failed_stage = "gaussian";
  std::vector<std::vector<double>> ks;
  for (double m : c.k_magnitudes) {
    std::vector<double> axis(D.dim(), 0.0);
    axis[0] = m;
    ks.push_back(axis);
    if (c.diagonal_direction && D.dim() > 1)
      ks.push_back(std::vector<double>(D.dim(), m / std::sqrt(double(D.dim()))));
  }
  std::vector<int> n_list = c.n_list;
  std::sort(n_list.begin(), n_list.end());
  const auto gres = lace::gaussian_profile(*model, lc, n_list, ks, cfg.gamma);
  man.write_output("gaussian.csv", lace::gaussian_to_csv(gres));

  man.failed_stage.clear();
  return hrep.all_pass() ? 0 : 1;
}

int cmd_certify_induction(const RunConfig& c, Manifest& man) {
  const auto D = build_kernel(c);
  const auto model = build_model(c, D);
  const auto cfg = induction_for(c, D);

  man.failed_stage = "validate-config";
  const auto vrep = lace::validate_config(cfg);
  man.write_output("config_validation.json", vrep.to_json_string() + "\n");

  man.failed_stage = "critical-point";
  const double z = resolve_z(c, *model);

  man.failed_stage = "evolve";
  const auto kset = build_kset(c, D);
  lace::EvolveOptions eopt;
  eopt.compensated = c.N > 10000;
  const auto trace = lace::evolve(*model, z, kset, c.N, eopt);

  man.failed_stage = "certify-induction";
  lace::CertificateReport rep = lace::check_H1_H4(trace, D, cfg);
  auto qspec = c.quad;
  qspec.seed = c.seed;
  rep.append(lace::check_fbdsp(*model, trace, cfg, c.K_fbdsp, c.N, qspec));
  const auto kgrid = build_kset(c, D);
  rep.append(lace::check_assumptions_EG(*model, z, cfg, c.Ce, c.Cg,
                                        std::max(1, c.N - 1), kgrid, c.eps_primes));
  rep.append(lace::check_lemma_cA(trace, D, cfg, c.cA_C));
  rep.append(lace::check_lemma_fder(trace, cfg, c.fder_C));
  man.write_output("certificate_induction.json", rep.to_json_string() + "\n");
  man.write_output("certificate_induction.csv", rep.to_csv_string());

  if (c.fit) {
    const auto fh = lace::fit_H_constants(trace, D, cfg);
    const auto feg = lace::fit_EG_constants(*model, z, cfg, std::max(1, c.N - 1),
                                            kgrid, c.eps_primes);
    ordered_json j;
    j["K1"] = fh.K1;
    j["K2"] = fh.K2;
    j["K3"] = fh.K3;
    j["K4"] = fh.K4;
    j["K5"] = fh.K5;
    j["Ce"] = feg.Ce;
    j["Cg"] = feg.Cg;
    j["cA_C"] = lace::fit_lemma_cA(trace, D, cfg);
    j["fder_C"] = lace::fit_lemma_fder(trace, cfg);
    man.write_output("fitted_constants.json", j.dump(2) + "\n");
  }
  man.failed_stage.clear();
  return rep.all_pass() ? 0 : 1;
}

int cmd_gaussian_check(const RunConfig& c, Manifest& man) {
  const auto D = build_kernel(c);
  const auto model = build_model(c, D);
  const auto cfg = induction_for(c, D);
  man.failed_stage = "critical-point";
  lace::CriticalPointResult cp{c.z_value, 0.0, 0, true};
  const double zc = resolve_z(c, *model, &cp);
  man.failed_stage = "constants";
  auto lc = lace::constants_Av(*model, zc, c.M_max, c.tail_tol);
  man.failed_stage = "gaussian";
  std::vector<std::vector<double>> ks;
  for (double m : c.k_magnitudes) {
    std::vector<double> axis(D.dim(), 0.0);
    axis[0] = m;
    ks.push_back(axis);
    if (c.diagonal_direction && D.dim() > 1)
      ks.push_back(std::vector<double>(D.dim(), m / std::sqrt(double(D.dim()))));
  }
  std::vector<int> n_list = c.n_list;
  std::sort(n_list.begin(), n_list.end());
  const auto res = lace::gaussian_profile(*model, lc, n_list, ks, cfg.gamma);
  man.write_output("gaussian.csv", lace::gaussian_to_csv(res));
  const auto env = lace::fit_gaussian_envelope(res, cfg.theta, cfg.delta);
  ordered_json j;
  j["z_c"] = lc.z_c;
  j["A"] = lc.A;
  j["v"] = lc.v;
  ordered_json per_n = ordered_json::array();
  for (const auto& r : res) {
    ordered_json o;
    o["n"] = r.n;
    o["max_deviation"] = r.max_deviation;
    o["included"] = r.included;
    o["excluded"] = r.excluded;
    per_n.push_back(std::move(o));
  }
  j["per_n"] = std::move(per_n);
  j["envelope_slope"] = env.slope;
  j["envelope_C_k2"] = env.C_k2;
  j["envelope_C_theta"] = env.C_theta;
  man.write_output("gaussian_summary.json", j.dump(2) + "\n");
  man.failed_stage.clear();
  return 0;
}

int cmd_norms(const RunConfig& c, Manifest& man) {
  const auto D = build_kernel(c);
  const auto model = build_model(c, D);
  const auto cfg = induction_for(c, D);
  man.failed_stage = "critical-point";
  const double z = resolve_z(c, *model);
  man.failed_stage = "norms";
  auto qspec = c.quad;
  qspec.seed = c.seed;
  lace::RegionSpec regions;
  regions.enabled = true;
  regions.gamma = cfg.gamma;
  const auto sweep = lace::lp_norm_D2f(*model, z, c.N, cfg.p_list, qspec, regions);
  man.write_output("norms.csv", sweep.to_csv());
  ordered_json j;
  j["method"] = sweep.method;
  j["nodes"] = sweep.nodes;
  j["seed"] = sweep.seed;
  j["z"] = z;
  j["accuracy_met"] = sweep.accuracy_met;
  man.write_output("norms_meta.json", j.dump(2) + "\n");
  man.failed_stage.clear();
  return 0;
}

int cmd_susceptibility(const RunConfig& c, Manifest& man) {
  const auto D = build_kernel(c);
  const auto model = build_model(c, D);
  man.failed_stage = "susceptibility";
  std::vector<double> zs = c.z_list;
  if (zs.empty()) zs = {0.5, 0.8, 0.9, 0.95};
  const auto res = lace::chi_identity_check(*model, zs, c.N);
  man.write_output("susceptibility.csv", lace::chi_to_csv(res));
  ordered_json j;
  j["z_c_prime"] = res.z_c_prime;
  j["divergence_exponent"] = res.divergence_exponent;
  ordered_json rows = ordered_json::array();
  for (const auto& r : res.rows) {
    ordered_json o;
    o["z"] = r.z;
    o["chi_N"] = r.chi_N;
    o["closed_form"] = r.closed_form;
    o["rel_gap"] = r.rel_gap;
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  man.write_output("susceptibility.json", j.dump(2) + "\n");
  man.failed_stage.clear();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lacekit: recursion engine and certification toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  long long seed_override = -1;
  bool fit_override = false;

  const std::vector<std::pair<std::string, std::string>> cmds = {
      {"certify-kernel", "certify the kernel gap and moment bounds"},
      {"run", "full pipeline: evolve, constants, certificates, profile"},
      {"critical-point", "locate the critical point"},
      {"certify-induction", "certify the induction hypotheses and lemmas"},
      {"gaussian-check", "compare the scaled profile with the Gaussian"},
      {"norms", "Lp norm sweep of D^2 f_n"},
      {"susceptibility", "partial sums against the closed form"},
  };
  for (const auto& [name, desc] : cmds) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "config JSON path")->required();
    sub->add_option("--out", out_override, "output directory (overrides config)");
    sub->add_option("--seed", seed_override, "root seed (overrides config)");
    sub->add_flag("--fit", fit_override, "also emit fitted constants");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  std::string config_text;
  try {
    std::ifstream in(config_path);
    if (!in) throw lace::FileFormatError("cannot open config: " + config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    config_text = buf.str();
    cfg = parse_config(config_text);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  if (fit_override) cfg.fit = true;
  cfg.quad.seed = cfg.seed;

  Manifest man;
  man.dir = cfg.out_dir;
  man.command = cmd;
  man.seed = cfg.seed;
  man.config_hash = fnv1a64(config_text);
  man.config_echo = cfg.echo;

  int rc = 0;
  try {
    if (cmd == "certify-kernel")
      rc = cmd_certify_kernel(cfg, man);
    else if (cmd == "run")
      rc = cmd_run(cfg, man);
    else if (cmd == "critical-point")
      rc = cmd_critical_point(cfg, man);
    else if (cmd == "certify-induction")
      rc = cmd_certify_induction(cfg, man);
    else if (cmd == "gaussian-check")
      rc = cmd_gaussian_check(cfg, man);
    else if (cmd == "norms")
      rc = cmd_norms(cfg, man);
    else if (cmd == "susceptibility")
      rc = cmd_susceptibility(cfg, man);
  } catch (const std::exception& e) {
    man.error = e.what();
    man.finalize();
    std::cerr << "stage '" << man.failed_stage << "' failed: " << e.what() << "\n";
    return 3;
  }
  man.finalize();
  if (rc != 0) std::cerr << "certification produced failing records\n";
  return rc;
}
