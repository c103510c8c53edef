#include "lace/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "fmt_util.hpp"
#include "lace/errors.hpp"
#include "lace/parallel.hpp"

namespace lace {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::size_t kChunk = 64;  // fixed so results ignore thread count

QuadMethod resolve(QuadMethod m, int d) {
  if (m != QuadMethod::Auto) return m;
  return d <= 3 ? QuadMethod::TensorGrid : QuadMethod::MonteCarlo;
}

struct NodeSet {
  std::vector<FourierPoint> k;
  double weight = 0.0;  // uniform weight per node, sums to 1
};

NodeSet tensor_nodes(int d, int per_axis) {
  NodeSet ns;
  long long total = 1;
  for (int i = 0; i < d; ++i) {
    total *= per_axis;
    if (total > 20'000'000LL)
      throw InvalidParameter("tensor grid too large; use Monte Carlo for this d");
  }
  ns.k.reserve(static_cast<std::size_t>(total));
  std::vector<int> idx(d, 0);
  for (;;) {
    std::vector<double> k(d);
    for (int i = 0; i < d; ++i)
      k[i] = -kPi + 2.0 * kPi * (idx[i] + 0.5) / per_axis;
    ns.k.push_back(FourierPoint(std::move(k)));
    int i = 0;
    for (; i < d; ++i) {
      if (idx[i] + 1 < per_axis) {
        ++idx[i];
        break;
      }
      idx[i] = 0;
    }
    if (i == d) break;
  }
  ns.weight = 1.0 / static_cast<double>(total);
  return ns;
}

// splitmix64: stable across platforms, unlike distribution adapters.
struct SplitMix64 {
  std::uint64_t s;
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

NodeSet mc_nodes(int d, long samples, std::uint64_t seed) {
  if (samples < 2) throw InvalidParameter("Monte Carlo needs >= 2 samples");
  NodeSet ns;
  ns.k.reserve(static_cast<std::size_t>(samples));
  SplitMix64 rng{seed};
  for (long s = 0; s < samples; ++s) {
    std::vector<double> k(d);
    for (int i = 0; i < d; ++i) k[i] = (2.0 * rng.uniform() - 1.0) * kPi;
    ns.k.push_back(FourierPoint(std::move(k)));
  }
  ns.weight = 1.0 / static_cast<double>(samples);
  return ns;
}

// Chunked deterministic reduction of per-node values; also returns the sum
// of squares for MC standard errors.
struct Accum {
  double sum = 0.0;
  double sumsq = 0.0;
};

Accum reduce_nodes(const NodeSet& ns,
                   const std::function<double(const FourierPoint&)>& f) {
  const std::size_t n = ns.k.size();
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<Accum> partial(n_chunks);
  parallel_for(n_chunks, [&](std::size_t c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    Accum a;
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = f(ns.k[i]);
      a.sum += v;
      a.sumsq += v * v;
    }
    partial[c] = a;
  });
  Accum total;
  for (const auto& a : partial) {
    total.sum += a.sum;
    total.sumsq += a.sumsq;
  }
  return total;
}

}  // namespace

QuadResult torus_integrate(const std::function<double(const FourierPoint&)>& f,
                           int d, const QuadratureSpec& spec, int min_per_axis) {
  if (d < 1) throw InvalidParameter("torus_integrate needs d >= 1");
  const QuadMethod method = resolve(spec.method, d);
  QuadResult r;
  if (method == QuadMethod::ProductFactorized)
    throw InvalidParameter(
        "product-factorized integration needs torus_integrate_product");
  if (method == QuadMethod::TensorGrid) {
    const int fine = std::max({spec.nodes_per_axis, min_per_axis, 4});
    const int coarse = std::max(fine / 2, 2);
    const auto nf = tensor_nodes(d, fine);
    const auto nc = tensor_nodes(d, coarse);
    const double vf = reduce_nodes(nf, f).sum * nf.weight;
    const double vc = reduce_nodes(nc, f).sum * nc.weight;
    r.value = vf;
    r.error = std::abs(vf - vc);
    r.method = "tensor";
  } else {
    const auto ns = mc_nodes(d, spec.samples, spec.seed);
    const auto acc = reduce_nodes(ns, f);
    const double n = static_cast<double>(ns.k.size());
    const double mean = acc.sum / n;
    const double var = std::max(0.0, acc.sumsq / n - mean * mean);
    r.value = mean;
    r.error = std::sqrt(var / n);
    r.method = "monte-carlo";
  }
  r.accuracy_met =
      r.error <= spec.target_rel_accuracy * std::max(std::abs(r.value), 1e-300);
  return r;
}

QuadResult torus_integrate_product(const std::function<double(double)>& phi, int d,
                                   const QuadratureSpec& spec, int min_per_axis) {
  if (d < 1) throw InvalidParameter("torus_integrate_product needs d >= 1");
  const int fine = std::max({spec.nodes_per_axis, min_per_axis, 4});
  auto axis_value = [&](int nodes) {
    double s = 0.0;
    for (int i = 0; i < nodes; ++i)
      s += phi(-kPi + 2.0 * kPi * (i + 0.5) / nodes);
    return s / nodes;
  };
  const double v1 = axis_value(fine);
  const double v1c = axis_value(std::max(fine / 2, 2));
  QuadResult r;
  r.value = std::pow(v1, d);
  const double e1 = std::abs(v1 - v1c);
  r.error = d * std::pow(std::abs(v1) + e1, d - 1) * e1;
  r.method = "product";
  r.accuracy_met =
      r.error <= spec.target_rel_accuracy * std::max(std::abs(r.value), 1e-300);
  return r;
}

namespace {

struct SweepAccum {
  // acc[n * n_p + ip] over nodes; region-resolved when enabled.
  std::vector<double> sum, sumsq;
  std::vector<std::array<double, 4>> region;
};

// Per-node pass shared by the fine and coarse evaluations.
void sweep_nodes(const ModelCoefficients& model, double z, int n_max,
                 const std::vector<double>& p_list, const NodeSet& ns,
                 const RegionSpec& regions, SweepAccum& out) {
  const std::size_t n_terms = static_cast<std::size_t>(n_max + 1) * p_list.size();
  const std::size_t n_nodes = ns.k.size();
  const std::size_t n_chunks = (n_nodes + kChunk - 1) / kChunk;
  const double L = model.kernel().range();

  std::vector<SweepAccum> partial(n_chunks);
  parallel_for(n_chunks, [&](std::size_t ci) {
    auto& acc = partial[ci];
    acc.sum.assign(n_terms, 0.0);
    acc.sumsq.assign(n_terms, 0.0);
    if (regions.enabled) acc.region.assign(n_terms, {});
    std::vector<double> gp(n_max), ep(n_max), fk;
    const std::size_t lo = ci * kChunk;
    const std::size_t hi = std::min(n_nodes, lo + kChunk);
    for (std::size_t i = lo; i < hi; ++i) {
      const FourierPoint& k = ns.k[i];
      if (n_max >= 1) {
        model.g_profile(k, z, n_max, gp);
        model.e_profile(k, z, n_max, ep);
      }
      fk.assign(n_max + 1, 0.0);
      fk[0] = 1.0;
      for (int np1 = 1; np1 <= n_max; ++np1) {
        double s = ep[np1 - 1];
        for (int m = 1; m <= np1; ++m) s += gp[m - 1] * fk[np1 - m];
        fk[np1] = s;
      }
      const double dh = model.kernel().fourier(k);
      const double d2 = dh * dh;
      const double a = 1.0 - dh;
      const bool small_k = k.inf_norm() <= 1.0 / L;
      for (int n = 0; n <= n_max; ++n) {
        const double base = std::abs(d2 * fk[n]);
        for (std::size_t ip = 0; ip < p_list.size(); ++ip) {
          const double term = std::pow(base, p_list[ip]);
          const std::size_t at = static_cast<std::size_t>(n) * p_list.size() + ip;
          acc.sum[at] += term;
          acc.sumsq[at] += term * term;
          if (regions.enabled && n >= 3) {
            const double thr = regions.gamma * std::log(static_cast<double>(n)) / n;
            const int ri = (a <= thr ? 0 : 2) + (small_k ? 0 : 1);
            acc.region[at][ri] += term;
          }
        }
      }
    }
  });

  out.sum.assign(n_terms, 0.0);
  out.sumsq.assign(n_terms, 0.0);
  if (regions.enabled) out.region.assign(n_terms, {});
  for (const auto& a : partial) {
    for (std::size_t t = 0; t < n_terms; ++t) {
      out.sum[t] += a.sum[t];
      out.sumsq[t] += a.sumsq[t];
      if (regions.enabled)
        for (int ri = 0; ri < 4; ++ri) out.region[t][ri] += a.region[t][ri];
    }
  }
}

}  // namespace

NormSweep lp_norm_D2f(const ModelCoefficients& model, double z, int n_max,
                      const std::vector<double>& p_list, const QuadratureSpec& spec,
                      const RegionSpec& regions) {
  if (n_max < 0) throw InvalidParameter("lp_norm_D2f needs n_max >= 0");
  if (p_list.empty()) throw InvalidParameter("lp_norm_D2f needs a p list");
  for (double p : p_list)
    if (!(p >= 1.0)) throw InvalidParameter("lp_norm_D2f needs p >= 1");
  const int d = model.dim();
  const QuadMethod method = resolve(spec.method, d);
  if (method == QuadMethod::ProductFactorized)
    throw InvalidParameter("lp_norm_D2f supports tensor or Monte Carlo only");

  NormSweep sweep;
  sweep.seed = spec.seed;
  SweepAccum fine, coarse;
  double node_weight = 0.0, coarse_weight = 0.0;
  bool have_coarse = false;
  long n_nodes = 0;

  if (method == QuadMethod::TensorGrid) {
    const int min_axis = 4 * model.kernel().range();
    const int per = std::max({spec.nodes_per_axis, min_axis, 4});
    const auto nf = tensor_nodes(d, per);
    const auto nc = tensor_nodes(d, std::max(per / 2, 2));
    sweep_nodes(model, z, n_max, p_list, nf, regions, fine);
    sweep_nodes(model, z, n_max, p_list, nc, regions, coarse);
    node_weight = nf.weight;
    coarse_weight = nc.weight;
    have_coarse = true;
    n_nodes = static_cast<long>(nf.k.size());
    sweep.method = "tensor";
  } else {
    const auto ns = mc_nodes(d, spec.samples, spec.seed);
    sweep_nodes(model, z, n_max, p_list, ns, regions, fine);
    node_weight = ns.weight;
    n_nodes = static_cast<long>(ns.k.size());
    sweep.method = "monte-carlo";
  }
  sweep.nodes = n_nodes;

  for (int n = 0; n <= n_max; ++n) {
    for (std::size_t ip = 0; ip < p_list.size(); ++ip) {
      const double p = p_list[ip];
      const std::size_t at = static_cast<std::size_t>(n) * p_list.size() + ip;
      const double integral = fine.sum[at] * node_weight;
      NormSweepRow row;
      row.n = n;
      row.p = p;
      row.norm = std::pow(integral, 1.0 / p);
      double int_err = 0.0;
      if (have_coarse) {
        int_err = std::abs(integral - coarse.sum[at] * coarse_weight);
      } else {
        const double cnt = static_cast<double>(n_nodes);
        const double mean = fine.sum[at] / cnt;
        const double var = std::max(0.0, fine.sumsq[at] / cnt - mean * mean);
        int_err = std::sqrt(var / cnt);
      }
      row.error = integral > 0.0 ? row.norm * int_err / (p * integral) : int_err;
      if (row.error > spec.target_rel_accuracy * std::max(row.norm, 1e-300))
        sweep.accuracy_met = false;
      if (regions.enabled && n >= 3) {
        row.region_valid = true;
        for (int ri = 0; ri < 4; ++ri)
          row.region[ri] = fine.region[at][ri] * node_weight;
      }
      sweep.rows.push_back(row);
    }
  }
  return sweep;
}

std::string NormSweep::to_csv() const {
  using detail::fmt;
  std::ostringstream os;
  os << "n,p,norm,error,r1,r2,r3,r4\r\n";
  for (const auto& r : rows) {
    os << r.n << "," << fmt(r.p) << "," << fmt(r.norm) << "," << fmt(r.error);
    for (int i = 0; i < 4; ++i) {
      os << ",";
      if (r.region_valid) os << fmt(r.region[i]);
    }
    os << "\r\n";
  }
  return os.str();
}

}  // namespace lace
