#include <benchmark/benchmark.h>

#include "lace/certifier.hpp"
#include "lace/engine.hpp"
#include "lace/model.hpp"
#include "lace/quadrature.hpp"

using namespace lace;

namespace {

std::unique_ptr<ModelCoefficients> bench_model() {
  SyntheticFamilySpec s;
  s.beta0 = 0.01;
  s.theta = 2.5;
  return synthetic_theta(build_uniform_box(5, 3), s);
}

InductionConfig bench_config() {
  InductionConfig cfg;
  cfg.d = 5;
  cfg.beta = compute_beta(3, 5, cfg.pstar);
  return cfg;
}

void BM_KernelFourier(benchmark::State& state) {
  const auto D = build_uniform_box(5, 3);
  const FourierPoint k({0.3, -0.7, 1.1, 0.05, 2.2});
  for (auto _ : state) benchmark::DoNotOptimize(D.fourier(k));
}
BENCHMARK(BM_KernelFourier);

void BM_Evolve(benchmark::State& state) {
  const auto model = bench_model();
  const int N = static_cast<int>(state.range(0));
  const std::vector<FourierPoint> kset{FourierPoint::zero(5),
                                       FourierPoint::axis(5, 0, 0.02)};
  EvolveOptions opt;
  opt.with_z_sequence = false;
  for (auto _ : state) {
    auto t = evolve(*model, 0.9966, kset, N, opt);
    benchmark::DoNotOptimize(t.f0(N));
  }
  state.SetComplexityN(N);
}
BENCHMARK(BM_Evolve)->Arg(200)->Arg(1000)->Arg(4000)->Complexity();

void BM_ZnSequence(benchmark::State& state) {
  const auto model = bench_model();
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto zs = zn_sequence(*model, N);
    benchmark::DoNotOptimize(zs.back());
  }
}
BENCHMARK(BM_ZnSequence)->Arg(500)->Arg(2000);

void BM_LpNormMonteCarlo(benchmark::State& state) {
  const auto model = bench_model();
  QuadratureSpec qs;
  qs.method = QuadMethod::MonteCarlo;
  qs.samples = state.range(0);
  for (auto _ : state) {
    auto sweep = lp_norm_D2f(*model, 0.9966, 50, {2.0}, qs);
    benchmark::DoNotOptimize(sweep.rows.back().norm);
  }
}
BENCHMARK(BM_LpNormMonteCarlo)->Arg(1024)->Arg(4096);

void BM_CheckH1H4(benchmark::State& state) {
  const auto model = bench_model();
  const auto& D = model->kernel();
  const auto cfg = bench_config();
  std::vector<FourierPoint> kset{FourierPoint::zero(5),
                                 FourierPoint::axis(5, 0, 0.01),
                                 FourierPoint::axis(5, 0, 0.5)};
  const auto trace = evolve(*model, 0.9966, kset, 150);
  for (auto _ : state) {
    auto rep = check_H1_H4(trace, D, cfg);
    benchmark::DoNotOptimize(rep.failures());
  }
}
BENCHMARK(BM_CheckH1H4);

void BM_ConvLemma(benchmark::State& state) {
  for (auto _ : state) {
    auto rep = check_conv_lemma(2.5, 1.5, state.range(0));
    benchmark::DoNotOptimize(rep.records.back().actual);
  }
}
BENCHMARK(BM_ConvLemma)->Arg(2000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
