// serial reference against the OpenMP path for the parallel kernels
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "so12/interference.hpp"
#include "so12/phase_dist.hpp"
#include "so12/squeeze.hpp"

using namespace so12;

namespace {

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

void BM_conjugation_sweep(benchmark::State& st) {
  // paired lists: entry i conjugates with reps[i] and ws[i]
  std::vector<RepParams> reps;
  std::vector<SqueezeParams> ws;
  for (int i = 0; i < 6; ++i) {
    reps.push_back({0.5 + 0.25 * i, 96});
    ws.push_back(SqueezeParams::boost(std::polar(0.3 + 0.1 * i, 0.7 * i)));
  }
  for (auto _ : st) benchmark::DoNotOptimize(conjugation_sweep(reps, ws, OpId::K1, mode(st)));
}

void BM_husimi_grid(benchmark::State& st) {
  DensityOperator rho = thermal_state(0.5, 0.3, 48);
  for (auto _ : st) benchmark::DoNotOptimize(husimi_grid(HusimiKind::S, rho, -3, 3, -3, 3, 32, 32, mode(st)));
}

void BM_radial_integrate(benchmark::State& st) {
  auto g = [](double r) { return cplx(std::pow(r, 5) * std::exp(-r * r) * std::cos(r)); };
  for (auto _ : st) benchmark::DoNotOptimize(radial_integrate(g, {}, mode(st)));
}

void BM_bracket_closure_residual(benchmark::State& st) {
  Sp4Algebra alg = sp4_algebra();
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<TwoModePoint> pts;
  for (int i = 0; i < 400; ++i) pts.push_back({u(rng), u(rng), u(rng), u(rng)});
  for (auto _ : st) benchmark::DoNotOptimize(bracket_closure_residual(alg, pts, false, mode(st)));
}

}  // namespace

BENCHMARK(BM_conjugation_sweep)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_husimi_grid)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_radial_integrate)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_bracket_closure_residual)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
