#include <benchmark/benchmark.h>

#include "bbr/bessel.hpp"
#include "bbr/bilinear_ops.hpp"
#include "bbr/bumps.hpp"
#include "bbr/grid.hpp"
#include "bbr/linear_ops.hpp"

using namespace bbr;

namespace {

const SmoothBump& profile() {
  static const SmoothBump p = cn_normalize(standard_bump(-1.0, 1.0), 8).first;
  return p;
}

void BM_Transform2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  TorusGrid g{2, 100.0, n};
  Field f = random_bandlimited(g, 1.05, 1);
  for (auto _ : state) {
    Field out = transform_inverse(f);
    benchmark::DoNotOptimize(out.values().data());
  }
  state.SetItemsProcessed(state.iterations() * g.size());
}
BENCHMARK(BM_Transform2D)->Arg(256)->Arg(512);

void BM_ShellOp2D(benchmark::State& state) {
  TorusGrid g{2, 100.0, 512};
  Field f = random_bandlimited(g, 1.05, 2);
  ShellSpec spec{0.75, 1.0 / 32.0, &profile()};
  for (auto _ : state) {
    Field out = shell_op(f, spec);
    benchmark::DoNotOptimize(out.values().data());
  }
}
BENCHMARK(BM_ShellOp2D);

void BM_ShellProduct(benchmark::State& state) {
  const double delta = 1.0 / state.range(0);
  TorusGrid g{2, 100.0, 512};
  Field f = random_bandlimited(g, 1.05, 3);
  Field h = random_bandlimited(g, 1.05, 4);
  for (auto _ : state) {
    Field out = bilinear_shell_product(f, h, delta, 1.0, profile(), profile());
    benchmark::DoNotOptimize(out.values().data());
  }
}
BENCHMARK(BM_ShellProduct)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BtildeExact(benchmark::State& state) {
  const double delta = 1.0 / state.range(0);
  TorusGrid g{2, 100.0, 512};
  SmoothBump psi = dyadic_psi(1.0);
  Field f = random_bandlimited(g, 1.05, 5);
  Field h = random_bandlimited(g, 1.05, 6);
  for (auto _ : state) {
    Field out = btilde_delta(f, h, delta, psi);
    benchmark::DoNotOptimize(out.values().data());
  }
}
BENCHMARK(BM_BtildeExact)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BesselJ(benchmark::State& state) {
  double nu = 2.5, x = 0.0;
  for (auto _ : state) {
    x += 0.37;
    if (x > 200.0) x = 0.1;
    benchmark::DoNotOptimize(bessel_j(nu, x));
  }
}
BENCHMARK(BM_BesselJ);

void BM_BumpJet(benchmark::State& state) {
  const SmoothBump& p = profile();
  double t = -1.0;
  for (auto _ : state) {
    t += 0.001;
    if (t > 1.0) t = -0.999;
    benchmark::DoNotOptimize(p.derivative(t, 8));
  }
}
BENCHMARK(BM_BumpJet);

}  // namespace

BENCHMARK_MAIN();
