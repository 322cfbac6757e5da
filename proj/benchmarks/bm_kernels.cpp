#include <benchmark/benchmark.h>

#include "qrobust/optimizers.hpp"
#include "qrobust/rng.hpp"

namespace {

using namespace qrobust;

CMatrix random_hermitian(std::size_t dim, Rng& rng) {
  CMatrix h(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    h(r, r) = rng.uniform(-2.0, 2.0);
    for (std::size_t c = r + 1; c < dim; ++c) {
      const cdouble v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      h(r, c) = v;
      h(c, r) = std::conj(v);
    }
  }
  return h;
}

void BM_HermitianEig(benchmark::State& state) {
  Rng rng(7);
  const CMatrix h = random_hermitian(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hermitian_eig(h));
  }
}
BENCHMARK(BM_HermitianEig)->Arg(16)->Arg(64)->Arg(128);

void BM_FidelityGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const QaoaInstance inst = build_chain_two(n);
  FidelityEvaluator eval(inst);
  Rng rng(11);
  const std::vector<double> theta = rng.uniform_in(inst.theta_box);
  const std::vector<double> delta{0.1};
  eval.fidelity(theta, delta);  // warm the per-sample cache
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval.fidelity_gradient(theta, delta));
  }
}
BENCHMARK(BM_FidelityGradient)->Arg(5)->Arg(7);

void BM_EpigraphLp(benchmark::State& state) {
  Rng rng(13);
  const std::size_t n = 16;
  const std::size_t scenarios = 25;
  std::vector<LinearSurrogate> surrogates(scenarios);
  for (LinearSurrogate& s : surrogates) {
    s.base_value = rng.uniform(0.5, 1.0);
    s.gradient.resize(n);
    for (double& g : s.gradient) g = rng.uniform(-1.0, 1.0);
  }
  std::vector<double> theta(n, 1.0);
  const Box box = Box::uniform(n, 0.0, 2.0);
  const EpigraphLP lp = build_epigraph(surrogates, theta, box, TrustRegion{0.2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_lp(lp));
  }
}
BENCHMARK(BM_EpigraphLp);

void BM_WorstAverage(benchmark::State& state) {
  const QaoaInstance inst = build_chain_two_init_error(7);
  FidelityEvaluator eval(inst);
  Rng rng(17);
  const std::vector<double> theta = rng.uniform_in(inst.theta_box);
  const SampleSet grid = sample_grid(Box({0.0, 0.0}, {0.1, 0.1}), 5);
  worst_and_average(eval, theta, grid);  // warm the cache
  for (auto _ : state) {
    benchmark::DoNotOptimize(worst_and_average(eval, theta, grid));
  }
}
BENCHMARK(BM_WorstAverage);

}  // namespace

BENCHMARK_MAIN();
