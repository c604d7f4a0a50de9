// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "pim/alternating.hpp"
#include "pim/phase_mm.hpp"

namespace {

pim::ScenarioConfig make_cfg(int k, int m, int n) {
  return pim::snr_config(k, m, n, 20.0, pim::RateFloorMode::snr_scaled());
}

void BM_MMIteration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto cfg = make_cfg(8, 8, n);
  const pim::RngSeed seed{42, 0};
  const auto ch = pim::generate_channels(cfg, seed);
  const auto map = pim::build_reduced_map(ch, pim::VectorXd());
  pim::Rng rng = pim::Rng::stream(seed, 1);
  const auto x0 = pim::PhaseVector::random(n, rng).conjugate_coefficients();
  for (auto _ : state) {
    auto st = pim::mm_loop(map, x0, 0.0, 1, pim::MMKind::Spectral);
    benchmark::DoNotOptimize(st.x);
  }
}
BENCHMARK(BM_MMIteration)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_Waterfill(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  pim::WaterfillInput inp;
  inp.weights = pim::VectorXd::LinSpaced(k, 0.5, 2.0);
  inp.p_floor = pim::VectorXd::Constant(k, 0.5);
  inp.p_max = 100.0;
  inp.noise_power = 1.0;
  for (auto _ : state) {
    auto alloc = pim::waterfill_exact(inp);
    benchmark::DoNotOptimize(alloc.p);
  }
}
BENCHMARK(BM_Waterfill)->Arg(4)->Arg(16)->Arg(64);

void BM_FullSolve(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto cfg = make_cfg(dim, dim, dim);
  const pim::RngSeed seed{7, 0};
  const auto ch = pim::generate_channels(cfg, seed);
  for (auto _ : state) {
    auto sol = pim::solve(ch, cfg, seed);
    benchmark::DoNotOptimize(sol.sum_rate);
  }
}
BENCHMARK(BM_FullSolve)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
