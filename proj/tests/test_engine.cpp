#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "lace/engine.hpp"
#include "lace/errors.hpp"
#include "lace/fitting.hpp"
#include "oracles.hpp"

using namespace lace;

namespace {
constexpr double kPi = 3.14159265358979323846;

RecursionTrace rw_trace(int d, int L, double z, std::vector<FourierPoint> kset,
                        int N) {
  const auto model = pure_random_walk(build_uniform_box(d, L));
  return evolve(*model, z, std::move(kset), N);
}
}  // namespace

TEST_CASE("evolve on the pure walk is the power sequence") {
  SUBCASE("z=0.9 at k=0") {
    const auto t = rw_trace(1, 1, 0.9, {FourierPoint::zero(1)}, 5);
    for (int n = 0; n <= 5; ++n)
      CHECK(t.f0(n) == doctest::Approx(std::pow(0.9, n)).epsilon(1e-14));
  }
  SUBCASE("k=pi/2 in d=1 L=1 kills f_n") {
    const auto t =
        rw_trace(1, 1, 1.0, {FourierPoint::zero(1), FourierPoint({kPi / 2})}, 4);
    for (int n = 1; n <= 4; ++n) CHECK(std::abs(t.f[1][n]) < 1e-15);
  }
  SUBCASE("machine-precision match across kernels, z, k, n <= 1000") {
    for (int d : {1, 2}) {
      for (int L : {1, 2, 3}) {
        const auto D = build_uniform_box(d, L);
        const auto model = pure_random_walk(D);
        std::vector<FourierPoint> kset{FourierPoint::zero(d)};
        kset.push_back(FourierPoint::axis(d, 0, 0.37));
        kset.push_back(FourierPoint(std::vector<double>(d, 1.21)));
        for (double z : {0.9, 1.0}) {
          const auto t = evolve(*model, z, kset, 1000);
          for (std::size_t ki = 0; ki < kset.size(); ++ki) {
            const double zd = z * D.fourier(kset[ki]);
            double expect = 1.0;
            for (int n = 0; n <= 1000; ++n) {
              const double diff = std::abs(t.f[ki][n] - expect);
              CHECK(diff <= 1e-12 * std::max(1.0, std::abs(expect)));
              expect *= zd;
            }
          }
        }
      }
    }
  }
}

TEST_CASE("evolve on the synthetic family matches a hand-unrolled recursion") {
  const auto model =
      synthetic_theta(build_uniform_box(1, 2), helpers::synth(0.01, 3.0));
  const auto t = evolve(*model, 1.0, {FourierPoint::zero(1)}, 3);
  CHECK(t.f0(0) == 1.0);
  CHECK(t.f0(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(t.f0(2) == doctest::Approx(1.00125).epsilon(1e-14));
  CHECK(t.f0(3) ==
        doctest::Approx(1.00125 + 0.00125 + 0.01 / 27.0).epsilon(1e-14));
}

TEST_CASE("hessian recursion") {
  SUBCASE("pure walk gives -n z^n sigma^2 at z=1") {
    const auto lap11 = evolve_hessian(*pure_random_walk(build_uniform_box(1, 1)), 1.0, 8);
    const auto lap12 = evolve_hessian(*pure_random_walk(build_uniform_box(1, 2)), 1.0, 8);
    CHECK(lap11[0] == 0.0);
    for (int n = 1; n <= 8; ++n) {
      CHECK(lap11[n] == doctest::Approx(-1.0 * n).epsilon(1e-13));
      CHECK(lap12[n] == doctest::Approx(-2.5 * n).epsilon(1e-13));
    }
  }
  SUBCASE("matches the 5-point finite-difference Laplacian") {
    const int N = 200;
    {
      const auto model = pure_random_walk(build_uniform_box(2, 1));
      const auto lap = evolve_hessian(*model, 1.0, N);
      const double h = 0.05 / std::sqrt(model->kernel().sigma2() * N);
      const auto fd = oracle::fd_laplacian(*model, 1.0, N, h);
      for (int n = 1; n <= N; ++n)
        CHECK(fd[n] == doctest::Approx(lap[n]).epsilon(1e-6));
    }
    {
      const auto model =
          synthetic_theta(build_uniform_box(2, 2), helpers::synth(0.02, 2.5));
      const auto lap = evolve_hessian(*model, 0.97, N);
      const double h = 0.05 / std::sqrt(model->kernel().sigma2() * N);
      const auto fd = oracle::fd_laplacian(*model, 0.97, N, h);
      for (int n = 1; n <= N; ++n)
        CHECK(fd[n] == doctest::Approx(lap[n]).epsilon(1e-6));
    }
  }
}

TEST_CASE("critical point recursion") {
  SUBCASE("pure walk: z_n is identically 1") {
    const auto model = pure_random_walk(build_uniform_box(2, 1));
    const auto zs = zn_sequence(*model, 64);
    for (double z : zs) CHECK(z == 1.0);
    const auto cp = critical_point(*model, 1000, 1e-12);
    CHECK(cp.z_c == 1.0);
    CHECK(cp.error_bound == 0.0);
    CHECK(cp.tail_converged);
  }
  SUBCASE("synthetic one-step value") {
    const auto model =
        synthetic_theta(build_uniform_box(1, 2), helpers::synth(0.01, 3.0));
    const auto zs = zn_sequence(*model, 2);
    CHECK(zs[0] == 1.0);
    CHECK(zs[1] == 1.0);
    CHECK(zs[2] == doctest::Approx(0.99875).epsilon(1e-15));
  }
  SUBCASE("synthetic beta0=+0.01 theta=3 agrees with the fixed-point oracle") {
    const auto model =
        synthetic_theta(build_uniform_box(5, 3), helpers::synth(0.01, 3.0));
    const double zc_oracle = oracle::synthetic_zc(0.01, 3.0, 100000);
    CHECK(zc_oracle == doctest::Approx(0.997992257074).epsilon(1e-11));  // frozen
    const auto cp = critical_point(*model, 20000, 1e-10);
    CHECK(cp.tail_converged);
    CHECK(cp.z_c == doctest::Approx(zc_oracle).epsilon(1e-9));
  }
  SUBCASE("negative beta0 sits above 1") {
    const auto model =
        synthetic_theta(build_uniform_box(5, 3), helpers::synth(-0.01, 3.0));
    const double zc_oracle = oracle::synthetic_zc(-0.01, 3.0, 2000);
    CHECK(zc_oracle > 1.0);
    const auto cp = critical_point(*model, 20000, 1e-10);
    CHECK(cp.z_c > 1.0);
    CHECK(cp.z_c == doctest::Approx(zc_oracle).epsilon(1e-5));
  }
  SUBCASE("diverging iteration raises no-convergence") {
    const auto model =
        synthetic_theta(build_uniform_box(1, 2), helpers::synth(-5.0, 2.5));
    CHECK_THROWS_AS(critical_point(*model, 5000, 1e-10), NoConvergence);
  }
}

TEST_CASE("zeta") {
  const auto rw = pure_random_walk(build_uniform_box(2, 1));
  for (int n : {0, 1, 5, 20}) {
    CHECK(zeta(*rw, 1.0, n) == doctest::Approx(0.0));
    CHECK(zeta(*rw, 0.95, n) == doctest::Approx(-0.05).epsilon(1e-14));
  }
  SUBCASE("decay exponent at the critical point") {
    const auto model =
        synthetic_theta(build_uniform_box(5, 3), helpers::synth(0.01, 3.0));
    const auto cp = critical_point(*model, 20000, 1e-11);
    std::vector<double> ns, zs;
    for (int n = 10; n <= 100; n += 5) {
      ns.push_back(n + 1);
      zs.push_back(std::abs(zeta(*model, cp.z_c, n)));
    }
    const auto fit = loglog_fit(ns, zs);
    CHECK(fit.slope < -1.7);  // bound form (n+1)^(-theta+1) = -2 with drift
    CHECK(fit.slope > -2.6);
  }
}

TEST_CASE("limit constants") {
  SUBCASE("pure walk collapses to A = v = 1 with zero residual") {
    const auto model = pure_random_walk(build_uniform_box(2, 1));
    const auto lc = constants_Av(*model, 1.0, 1000, 1e-12);
    CHECK(lc.A == 1.0);
    CHECK(lc.v == 1.0);
    CHECK(lc.residuals.at("one_minus_sum_g") == 0.0);
  }
  SUBCASE("synthetic values against direct series sums") {
    const double beta0 = 0.01, theta = 3.0, beta_e = 0.005;
    const auto D = build_uniform_box(1, 2);
    const auto model = synthetic_theta(D, helpers::synth(beta0, theta, beta_e));
    const double zc = oracle::synthetic_zc(beta0, theta, 100000);
    // direct sums, test-side
    double Sg = zc, Smg = zc, Se = 0.0, Slap = -zc * D.sigma2();
    double zp = zc;
    for (int m = 2; m <= 100000; ++m) {
      zp *= zc;
      const double mt = std::pow(m, -theta);
      Sg += beta0 * zp * mt;
      Smg += m * beta0 * zp * mt;
      Se += beta_e * zp * mt;
      Slap += -2.0 * D.sigma2() * beta0 * zp * mt;
    }
    const auto lc = constants_Av(*model, zc, 100000, 1e-13);
    CHECK(lc.A == doctest::Approx((1.0 + Se) / Smg).epsilon(1e-10));
    CHECK(lc.v == doctest::Approx(-Slap / (D.sigma2() * Smg)).epsilon(1e-10));
    CHECK(std::abs(lc.residuals.at("one_minus_sum_g")) ==
          doctest::Approx(std::abs(1.0 - Sg)).epsilon(1e-8));
    CHECK(std::abs(1.0 - Sg) < 1e-10);
  }
  SUBCASE("degenerate model is reported") {
    // beta0 tuned so the denominator sum m g_m(0;z) sits near zero at z=0.2.
    const auto model =
        synthetic_theta(build_uniform_box(1, 1), helpers::synth(-10.0, 2.2));
    CHECK_THROWS_AS(constants_Av(*model, 0.2, 50, 0.05), DegenerateModel);
  }
}

TEST_CASE("susceptibility") {
  SUBCASE("geometric series") {
    const auto model = pure_random_walk(build_uniform_box(1, 1));
    const auto s = susceptibility(*model, 0.5, 64);
    CHECK(s.chi_N == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.closed_form == doctest::Approx(2.0).epsilon(1e-15));
    const auto s99 = susceptibility(*model, 0.99, 2000);
    CHECK(std::abs(s99.chi_N - 100.0) < 1e-6);
    CHECK(!s99.diverging);
  }
  SUBCASE("synthetic partial sums reach the closed form") {
    const auto model =
        synthetic_theta(build_uniform_box(5, 3), helpers::synth(0.01, 3.0));
    const auto s = susceptibility(*model, 0.99, 3000);
    CHECK(std::abs(s.chi_N - s.closed_form) / std::abs(s.closed_form) < 1e-8);
  }
  SUBCASE("supercritical growth is flagged") {
    const auto model = pure_random_walk(build_uniform_box(1, 1));
    const auto s = susceptibility(*model, 1.1, 300);
    CHECK(s.diverging);
  }
}

TEST_CASE("ratio extraction") {
  SUBCASE("pure walk at z=1 has vanishing remainders") {
    const auto t = rw_trace(2, 1, 1.0,
                            {FourierPoint::zero(2), FourierPoint({0.3, 0.1})}, 50);
    const auto r = extract_r(t, 1);
    for (int i = 1; i <= 50; ++i) CHECK(std::abs(r[i]) < 1e-13);
    const auto s = extract_s(t, 1);
    for (int i = 1; i <= 50; ++i) CHECK(std::abs(s[i]) < 1e-13);
  }
  SUBCASE("pure walk at z=0.9, k=0: r = z - 1") {
    const auto t = rw_trace(1, 2, 0.9, {FourierPoint::zero(1)}, 30);
    const auto r = extract_r(t, 0);
    for (int i = 1; i <= 30; ++i)
      CHECK(r[i] == doctest::Approx(-0.1).epsilon(1e-12));
  }
  SUBCASE("underflowing f raises ratio breakdown") {
    const auto t =
        rw_trace(1, 1, 1.0, {FourierPoint::zero(1), FourierPoint({kPi / 2})}, 40);
    CHECK_THROWS_AS(extract_r(t, 1), RatioBreakdown);
  }
  SUBCASE("degenerate product factor") {
    RecursionTrace t;
    t.z = 1.0;
    t.N = 1;
    t.dim = 1;
    t.sigma2 = 1.0;
    t.range = 1;
    t.kset = {FourierPoint::zero(1), FourierPoint({0.5})};
    t.gap = {0.0, 0.1};
    t.f = {{1.0, 1e-12}, {1.0, 0.5}};
    t.b = {1.0, 1.0};
    t.c = {0.0, 0.0};
    t.v = {1.0, 1.0};
    t.zeta = {-1.0, 0.0};
    CHECK_THROWS_AS(extract_s(t, 1), DegenerateFactor);
  }
}

TEST_CASE("product reconstruction identity") {
  const auto model =
      synthetic_theta(build_uniform_box(5, 3), helpers::synth(0.01, 2.5));
  const auto D = model->kernel();
  std::vector<FourierPoint> kset{FourierPoint::zero(5)};
  for (double target : {1e-3, 3e-3})
    kset.push_back(FourierPoint::axis(5, 0, helpers::solve_gap_target(D, target)));
  const auto t = evolve(*model, 0.9966, kset, 200);
  for (int ki = 1; ki <= 2; ++ki) {
    for (int j : {1, 7, 50, 200}) {
      const double rebuilt = reconstruct_from_s(t, ki, j);
      CHECK(rebuilt == doctest::Approx(t.f[ki][j]).epsilon(1e-10));
    }
  }
}

TEST_CASE("x-space oracle equivalence for a tabulated model") {
  // d=2, range-1 tables: g_2 = c (D*D), e_2 = c_e (D*D) truncated to range 1.
  const auto D = build_uniform_box(2, 1);
  oracle::DenseTable Dt = oracle::DenseTable::zero(2, 1);
  for (const auto& s : D.support()) Dt.at(s.x) = s.w.value();

  // Build the model file: g_2(x) = (1/50) (D*D)(x), z power 2.
  std::ostringstream os;
  os << R"({"M": 2, "z_powers": [2], "g": [{"m": 2, "entries": [)";
  const auto DD = oracle::convolve(Dt, Dt);
  bool first = true;
  for (long long i = 0; i < DD.cells(); ++i) {
    const double w = DD.w[static_cast<std::size_t>(i)];
    if (w == 0.0) continue;
    const auto x = DD.unpack(i);
    // weights are multiples of 1/64; divide by 50 exactly
    const long long num = std::llround(w * 64);
    if (!first) os << ",";
    first = false;
    os << "{\"x\": [" << x[0] << "," << x[1] << "], \"w\": \"" << num << "/3200\"}";
  }
  os << "]}]}";
  const auto model = xspace_model_from_json_string(os.str(), D);

  const double z = 0.95;
  const int N = 50;
  // oracle evolution with z-scaled tables
  std::vector<oracle::DenseTable> g_eff;
  {
    auto g1 = Dt;
    for (auto& w : g1.w) w *= z;
    auto g2 = DD;
    for (auto& w : g2.w) w *= z * z / 50.0;
    g_eff = {g1, g2};
  }
  const auto fx = oracle::evolve_xspace(g_eff, {}, N);

  std::vector<FourierPoint> kset{FourierPoint::zero(2)};
  std::uint64_t state = 42;
  auto rnd = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return (static_cast<double>(state >> 11) * 0x1.0p-53 * 2.0 - 1.0) * kPi;
  };
  for (int i = 0; i < 16; ++i) kset.push_back(FourierPoint({rnd(), rnd()}));
  const auto t = evolve(*model, z, kset, N);
  for (std::size_t ki = 0; ki < kset.size(); ++ki) {
    for (int n = 0; n <= N; ++n) {
      const double direct = oracle::fourier_sum(fx[n], kset[ki].comps());
      CHECK(std::abs(t.f[ki][n] - direct) <=
            1e-10 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("x-space oracle equivalence in d=3") {
  const auto D = build_uniform_box(3, 1);
  oracle::DenseTable Dt = oracle::DenseTable::zero(3, 1);
  for (const auto& s : D.support()) Dt.at(s.x) = s.w.value();
  // single order-2 table g_2 = (D*D)/20, z power 2
  const auto DD = oracle::convolve(Dt, Dt);
  std::vector<XSpaceModel::OrderTable> tables(1);
  tables[0].z_power = 2;
  for (long long i = 0; i < DD.cells(); ++i) {
    const double w = DD.w[static_cast<std::size_t>(i)];
    if (w == 0.0) continue;
    const long long num = std::llround(w * 26 * 26);
    tables[0].g.push_back(
        Site{DD.unpack(i), Rational(num, 26LL * 26 * 20)});
  }
  const XSpaceModel model(D, 2, std::move(tables), true, std::nullopt, 0.0);

  const double z = 0.97;
  const int N = 10;
  std::vector<oracle::DenseTable> g_eff;
  {
    auto g1 = Dt;
    for (auto& w : g1.w) w *= z;
    auto g2 = DD;
    for (auto& w : g2.w) w *= z * z / 20.0;
    g_eff = {g1, g2};
  }
  const auto fx = oracle::evolve_xspace(g_eff, {}, N);
  std::vector<FourierPoint> kset{FourierPoint::zero(3)};
  kset.push_back(FourierPoint({0.3, -1.2, 2.1}));
  kset.push_back(FourierPoint({1.9, 0.4, -0.8}));
  const auto t = evolve(model, z, kset, N);
  for (std::size_t ki = 0; ki < kset.size(); ++ki) {
    for (int n = 0; n <= N; ++n) {
      const double direct = oracle::fourier_sum(fx[n], kset[ki].comps());
      CHECK(std::abs(t.f[ki][n] - direct) <=
            1e-10 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("nested intervals shrink and nest") {
  const auto model =
      synthetic_theta(build_uniform_box(5, 3), helpers::synth(0.01, 2.5));
  const auto zs = zn_sequence(*model, 120);
  const auto cfg = helpers::doc_config();
  const auto iv = nested_intervals(zs, cfg.K1 * cfg.beta, cfg.theta);
  for (std::size_t j = 1; j < iv.size(); ++j) CHECK(iv[j - 1].contains(iv[j]));
}

TEST_CASE("velocity sequence is Cauchy with the H2 rate") {
  const auto model =
      synthetic_theta(build_uniform_box(5, 3), helpers::synth(0.01, 2.5));
  const auto t = evolve(*model, 0.9966, {FourierPoint::zero(5)}, 400);
  std::vector<double> ns, dv;
  for (int j = 5; j <= 400; ++j) {
    ns.push_back(j);
    dv.push_back(std::abs(t.v[j] - t.v[j - 1]));
  }
  const auto fit = loglog_fit_last_decade(ns, dv);
  CHECK(fit.slope < -(2.5 - 2.0) + 0.3);  // at least the -(theta-2) rate
}

TEST_CASE("evolve input validation") {
  const auto model = pure_random_walk(build_uniform_box(1, 1));
  CHECK_THROWS_AS(evolve(*model, 1.0, {FourierPoint({0.2})}, 5), InvalidParameter);
  CHECK_THROWS_AS(evolve(*model, 1.0, {FourierPoint::zero(1)}, 0), InvalidParameter);
  CHECK_THROWS_AS(evolve(*model, 1.0, {}, 5), InvalidParameter);

  SUBCASE("insufficient declared order") {
    const std::string text = R"({"M": 2, "higher_orders": "unknown"})";
    const auto tab = xspace_model_from_json_string(text, build_uniform_box(1, 1));
    CHECK_THROWS_AS(evolve(*tab, 1.0, {FourierPoint::zero(1)}, 10), TruncationError);
  }
}

TEST_CASE("compensated summation mode changes nothing at small N") {
  const auto model =
      synthetic_theta(build_uniform_box(2, 1), helpers::synth(0.05, 2.5));
  EvolveOptions plain, comp;
  comp.compensated = true;
  const auto t1 = evolve(*model, 0.98, {FourierPoint::zero(2)}, 300, plain);
  const auto t2 = evolve(*model, 0.98, {FourierPoint::zero(2)}, 300, comp);
  for (int n = 0; n <= 300; ++n)
    CHECK(t1.f0(n) == doctest::Approx(t2.f0(n)).epsilon(1e-12));
}

TEST_CASE("trace CSV shape") {
  const auto t = rw_trace(1, 1, 1.0, {FourierPoint::zero(1), FourierPoint({0.4})}, 3);
  const auto csv = trace_to_csv(t);
  CHECK(csv.find("n,k_index,f,b,c,v,z_n,zeta\r\n") == 0);
  // 4 n-values x 2 k-points + header
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 9);
}
