#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "lace/errors.hpp"
#include "lace/model.hpp"
#include "oracles.hpp"

using namespace lace;

TEST_CASE("pure random walk coefficients") {
  const auto model = pure_random_walk(build_uniform_box(1, 1));
  CHECK(model->g(1, FourierPoint::zero(1), 0.9) == doctest::Approx(0.9));
  CHECK(model->g(2, FourierPoint({1.1}), 0.7) == 0.0);
  CHECK(model->g(7, FourierPoint({0.2}), 1.3) == 0.0);
  CHECK(model->g_lap(1, 1.0) == doctest::Approx(-1.0));  // -z sigma^2
  CHECK(*model->g_dz(1, 0.5) == doctest::Approx(1.0));
  CHECK(model->e(1, FourierPoint({0.3}), 1.0) == 0.0);
  CHECK(model->e(5, FourierPoint({0.3}), 1.0) == 0.0);
  CHECK(model->e_lap(3, 1.0) == 0.0);
}

TEST_CASE("synthetic family closed forms") {
  CHECK_THROWS_AS(synthetic_theta(build_uniform_box(1, 2), helpers::synth(0.01, 2.0)),
                  InvalidParameter);
  CHECK_THROWS_AS(synthetic_theta(build_uniform_box(1, 2), helpers::synth(0.01, 1.5)),
                  InvalidParameter);

  const auto m3 = synthetic_theta(build_uniform_box(1, 2), helpers::synth(0.01, 3.0));
  CHECK(m3->g(2, FourierPoint::zero(1), 1.0) == doctest::Approx(0.00125).epsilon(1e-14));
  CHECK(m3->g_lap(2, 1.0) == doctest::Approx(-0.00625).epsilon(1e-12));  // -2*2.5*0.01/8
  CHECK(m3->g(1, FourierPoint::zero(1), 0.9) == doctest::Approx(0.9));
  CHECK(*m3->g_dz(2, 1.0) == doctest::Approx(0.01 * 2.0 / 8.0).epsilon(1e-13));

  SUBCASE("Taylor remainder is exactly beta0 z^m m^-theta a^2") {
    const auto& D = m3->kernel();
    const double t = helpers::solve_gap_target(D, 0.1);
    const FourierPoint k({t});
    const double a = D.gap(k);
    CHECK(a == doctest::Approx(0.1).epsilon(1e-10));
    const double g0 = m3->g(2, FourierPoint::zero(1), 1.0);
    const double remainder =
        m3->g(2, k, 1.0) - g0 - a * m3->g_lap(2, 1.0) / D.sigma2();
    CHECK(remainder == doctest::Approx(0.01 * std::pow(2.0, -3.0) * a * a)
                           .epsilon(1e-10));
    CHECK(remainder == doctest::Approx(1.25e-5).epsilon(1e-4));
  }

  SUBCASE("profiles match scalar evaluators") {
    const auto model =
        synthetic_theta(build_uniform_box(2, 1), helpers::synth(0.03, 2.5, 0.01));
    const FourierPoint k({0.4, -0.9});
    std::vector<double> gp(12), ep(12), gl(12), el(12);
    model->g_profile(k, 0.95, 12, gp);
    model->e_profile(k, 0.95, 12, ep);
    model->g_lap_profile(0.95, 12, gl);
    model->e_lap_profile(0.95, 12, el);
    for (int m = 1; m <= 12; ++m) {
      CHECK(gp[m - 1] == doctest::Approx(model->g(m, k, 0.95)).epsilon(1e-13));
      CHECK(ep[m - 1] == doctest::Approx(model->e(m, k, 0.95)).epsilon(1e-13));
      CHECK(gl[m - 1] == doctest::Approx(model->g_lap(m, 0.95)).epsilon(1e-13));
      CHECK(el[m - 1] == doctest::Approx(model->e_lap(m, 0.95)).epsilon(1e-13));
    }
  }
}

TEST_CASE("exact Laplacians match finite differences") {
  const double h = 1e-3;
  auto fd_lap = [&](const ModelCoefficients& m, int order, double z) {
    const int d = m.dim();
    double acc = 0.0;
    for (int ax = 0; ax < d; ++ax) {
      const double fp = m.g(order, FourierPoint::axis(d, ax, h), z);
      const double fm = m.g(order, FourierPoint::axis(d, ax, -h), z);
      const double fp2 = m.g(order, FourierPoint::axis(d, ax, 2 * h), z);
      const double fm2 = m.g(order, FourierPoint::axis(d, ax, -2 * h), z);
      const double f0 = m.g(order, FourierPoint::zero(d), z);
      acc += (-fp2 + 16 * fp - 30 * f0 + 16 * fm - fm2) / (12 * h * h);
    }
    return acc;
  };
  const auto rw = pure_random_walk(build_uniform_box(2, 1));
  CHECK(fd_lap(*rw, 1, 0.9) == doctest::Approx(rw->g_lap(1, 0.9)).epsilon(1e-6));
  const auto sy = synthetic_theta(build_uniform_box(2, 2), helpers::synth(0.05, 2.5));
  for (int order : {1, 2, 3, 5}) {
    CHECK(fd_lap(*sy, order, 0.9) ==
          doctest::Approx(sy->g_lap(order, 0.9)).epsilon(1e-6));
  }
}

TEST_CASE("mixed partials vanish at the origin") {
  const auto sy = synthetic_theta(build_uniform_box(2, 1), helpers::synth(0.05, 2.5));
  const double h = 1e-3;
  auto at = [&](double kx, double ky) {
    return sy->g(2, FourierPoint({kx, ky}), 1.0);
  };
  const double mixed =
      (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
  CHECK(std::abs(mixed) < 1e-8);
}

namespace {

// D*D for the d=1, L=2 box, tabulated exactly: counts over 16 ordered pairs.
// Support {-4..4} minus odd gaps; scaled by beta0 * 2^-theta = 1/800.
std::string convolution_model_json() {
  std::ostringstream os;
  os << R"({"M": 2, "z_powers": [2], "higher_orders": "zero", "g": [{"m": 2, "entries": [)";
  // (D*D)(x) * 16 for x = -4..4; the origin collects the 4 cancelling pairs.
  const int counts[] = {1, 2, 1, 2, 4, 2, 1, 2, 1};
  bool first = true;
  for (int x = -4; x <= 4; ++x) {
    if (!first) os << ",";
    first = false;
    os << "{\"x\": [" << x << "], \"w\": \"" << counts[x + 4] << "/12800\"}";
  }
  os << "]}]}";
  return os.str();
}

}  // namespace

TEST_CASE("tabulated x-space model") {
  SUBCASE("file reproducing the pure walk evaluates identically") {
    const std::string text = R"({"M": 1})";
    const auto tab = xspace_model_from_json_string(text, build_uniform_box(1, 2));
    const auto rw = pure_random_walk(build_uniform_box(1, 2));
    for (double t : {0.0, 0.4, 1.9}) {
      const FourierPoint k({t});
      for (double z : {0.8, 1.0, 1.1}) {
        CHECK(tab->g(1, k, z) == doctest::Approx(rw->g(1, k, z)).epsilon(1e-15));
        CHECK(tab->g(2, k, z) == 0.0);
        CHECK(tab->e(2, k, z) == 0.0);
      }
    }
    CHECK(tab->g_lap(1, 1.0) == doctest::Approx(rw->g_lap(1, 1.0)).epsilon(1e-15));
  }

  SUBCASE("convolution table gives beta0 2^-theta D^(k)^2") {
    // g_2(x) = beta0 2^-theta (D*D)(x) with beta0 = 0.01, theta = 3.
    const auto D = build_uniform_box(1, 2);
    const auto tab = xspace_model_from_json_string(convolution_model_json(), D);
    for (double t : {0.0, 0.3, 1.2, 2.9}) {
      const FourierPoint k({t});
      const double dh = D.fourier(k);
      CHECK(tab->g(2, k, 1.0) ==
            doctest::Approx(0.01 * 0.125 * dh * dh).epsilon(1e-12));
    }
    // z power declared as 2
    CHECK(tab->g(2, FourierPoint::zero(1), 0.5) ==
          doctest::Approx(0.01 * 0.125 * 0.25).epsilon(1e-12));
    CHECK(*tab->g_dz(2, 1.0) == doctest::Approx(2.0 * 0.01 * 0.125).epsilon(1e-12));
  }

  SUBCASE("asymmetric table is rejected with the violating pair") {
    const std::string bad =
        R"({"M": 2, "g": [{"m": 2, "entries": [{"x": [1], "w": "1/2"}, {"x": [-1], "w": "1/4"}]}]})";
    CHECK_THROWS_WITH_AS(xspace_model_from_json_string(bad, build_uniform_box(1, 2)),
                         doctest::Contains("symmetry"), FileFormatError);
  }

  SUBCASE("m=1 table inconsistent with z D^ is rejected") {
    const std::string bad =
        R"({"M": 1, "g": [{"m": 1, "entries": [{"x": [1], "w": "1/2"}, {"x": [-1], "w": "1/2"}]}]})";
    CHECK_THROWS_WITH_AS(xspace_model_from_json_string(bad, build_uniform_box(1, 2)),
                         doctest::Contains("inconsistent"), FileFormatError);
  }

  SUBCASE("e_1 table is rejected") {
    const std::string bad =
        R"({"M": 1, "e": [{"m": 1, "entries": [{"x": [0], "w": "1"}]}]})";
    CHECK_THROWS_AS(xspace_model_from_json_string(bad, build_uniform_box(1, 2)),
                    FileFormatError);
  }

  SUBCASE("unknown fields and malformed headers are rejected") {
    CHECK_THROWS_AS(xspace_model_from_json_string(R"({"M":1,"bogus":2})",
                                                  build_uniform_box(1, 1)),
                    FileFormatError);
    CHECK_THROWS_AS(xspace_model_from_json_string(R"({"M":3,"z_powers":[2]})",
                                                  build_uniform_box(1, 1)),
                    FileFormatError);
    CHECK_THROWS_AS(xspace_model_from_json_string("not json", build_uniform_box(1, 1)),
                    FileFormatError);
  }
}
