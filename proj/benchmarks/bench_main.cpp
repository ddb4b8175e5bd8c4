#include <benchmark/benchmark.h>

#include <cmath>

#include "rmt/anchored.hpp"
#include "rmt/fredholm.hpp"
#include "rmt/montecarlo.hpp"
#include "rmt/quadrature.hpp"
#include "rmt/specfun.hpp"

namespace {

void BM_Airy(benchmark::State& state) {
  double x = -20.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rmt::airy(x));
    x = x > 20.0 ? -20.0 : x + 0.37;
  }
}
BENCHMARK(BM_Airy);

void BM_BesselJ(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rmt::bessel_j(2.0, x));
    x = x > 60.0 ? 0.1 : x + 0.53;
  }
}
BENCHMARK(BM_BesselJ);

void BM_GaussLegendre(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rmt::gauss_legendre(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_GaussLegendre)->Arg(80)->Arg(240)->Arg(1000);

void BM_GueLogCdf(benchmark::State& state) {
  const auto spec = rmt::EnsembleSpec::gue(static_cast<int>(state.range(0)));
  const double s = std::sqrt(2.0 * spec.n);
  for (auto _ : state) benchmark::DoNotOptimize(rmt::gap_logcdf(spec, s, {}));
}
BENCHMARK(BM_GueLogCdf)->Arg(5)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_LueLogCdf(benchmark::State& state) {
  const auto spec = rmt::EnsembleSpec::lue(static_cast<int>(state.range(0)), 0.0);
  const double r = std::sqrt(static_cast<double>(spec.n));
  for (auto _ : state) benchmark::DoNotOptimize(rmt::gap_logcdf(spec, 4.0 * r * r, {}));
}
BENCHMARK(BM_LueLogCdf)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_AiryGap(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rmt::airy_gap_logcdf(-2.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_AiryGap)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_AnchoredGue(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = rmt::EnsembleSpec::gue(n);
  const auto win = rmt::auto_window(spec);
  rmt::AnchoredOptions opt;
  opt.n_anchors = static_cast<int>(std::lround(80.0 * (win.s_max - win.s_min) / 6.0));
  for (auto _ : state) benchmark::DoNotOptimize(rmt::anchored_cdf(spec, rmt::sigma_piv(n), win, opt));
}
BENCHMARK(BM_AnchoredGue)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_ThetaMax(benchmark::State& state) {
  rmt::McConfig c;
  c.N = static_cast<int>(state.range(0));
  c.n1 = 2 * c.N;
  c.n2 = 3 * c.N;
  c.M = 100;
  for (auto _ : state) benchmark::DoNotOptimize(rmt::sample_theta_max(c));
  state.SetItemsProcessed(state.iterations() * c.M);
}
BENCHMARK(BM_ThetaMax)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();
