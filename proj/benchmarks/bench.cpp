#include <benchmark/benchmark.h>

#include "bmo/bmo.hpp"

using namespace bmo;

static void BM_SolveDelta(benchmark::State& state) {
  double eps = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_delta(0.25, eps));
    eps = eps < 0.9 ? eps + 1e-3 : 0.1;
  }
}
BENCHMARK(BM_SolveDelta);

static void BM_Norms(benchmark::State& state) {
  Rng rng(1);
  const auto depth = static_cast<int>(state.range(0));
  const SimpleFunction phi = random_function(rng, build_dyadic_tree(2, depth), static_cast<std::size_t>(depth), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(bmo_norms(phi));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(phi.tree().size()));
}
BENCHMARK(BM_Norms)->DenseRange(2, 8, 2);

static void BM_VerifyJn(benchmark::State& state) {
  Rng rng(2);
  const auto depth = static_cast<int>(state.range(0));
  const double eps = 0.9 * jn_threshold(0.25);
  const SimpleFunction phi = random_function(rng, build_dyadic_tree(2, depth), static_cast<std::size_t>(depth), eps);
  for (auto _ : state) benchmark::DoNotOptimize(verify_jn(phi, 0.25, eps));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(phi.tree().size()));
}
BENCHMARK(BM_VerifyJn)->DenseRange(2, 6, 2);

static void BM_CheckAlphaShape(benchmark::State& state) {
  const JnParams p = solve_delta(0.25, 0.5);
  CheckConfig cfg;
  cfg.alpha = 0.25;
  cfg.eps = 0.5;
  cfg.samples = 10000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        check_alpha_shape([&](const OmegaPoint& x) { return jn_bellman(x, p); }, Shape::kConcave, cfg));
    ++cfg.seed;
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_CheckAlphaShape);

static void BM_SelectRemovable(benchmark::State& state) {
  const std::vector<double> w{0.25, 0.25, 0.25, 0.25};
  const std::vector<OmegaPoint> pts{{-0.5, 0.25}, {0.5, 0.25}, {-0.5, 0.5}, {0.5, 0.5}};
  for (auto _ : state) benchmark::DoNotOptimize(select_removable_point(w, pts, 0.8));
}
BENCHMARK(BM_SelectRemovable);

static void BM_ExpAverage(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(exp_average_phi_a(2, 0.5, 0.0, 200));
}
BENCHMARK(BM_ExpAverage);
BENCHMARK_MAIN();
