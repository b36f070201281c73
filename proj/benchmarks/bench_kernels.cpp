#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "crdctl/simulator.hpp"

using namespace crdctl;

namespace {

std::vector<DepressedCubic> make_cubics(std::size_t n) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> expo(-6.0, 6.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<DepressedCubic> cubics;
  cubics.reserve(n);
  while (cubics.size() < n) {
    DepressedCubic c{std::pow(10.0, expo(rng)) * (sign(rng) ? 1 : -1),
                     std::pow(10.0, expo(rng)) * (sign(rng) ? 1 : -1)};
    if (c.beta < 0.0) {
      const double qmin = 2.0 * std::pow(-c.beta, 1.5) / (3.0 * std::sqrt(3.0));
      if (std::abs(c.q) < qmin) c.q = std::copysign(qmin * 1.01, c.q);
    }
    cubics.push_back(c);
  }
  return cubics;
}

GridState blowup_profile(const Grid& grid, double amplitude) {
  GridState u(grid.n_nodes());
  for (int i = 0; i < grid.n_nodes(); ++i) {
    u(i) = -amplitude * (std::cos(10.0 * std::numbers::pi * grid.nodes(i)) - 1.0);
  }
  return u;
}

SimConfig bench_config() {
  SimConfig c;
  c.epsilon = 0.0002;
  c.convection = Convection::FlowNegative;
  c.reaction.terms = {{0.01, 3}};
  c.grid_n = 500;
  c.dt = 1e-4;
  c.t_final = 1.0;
  return c;
}

void BM_CardanoRealRoot(benchmark::State& state) {
  const auto cubics = make_cubics(4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cardano_real_root(cubics[i++ & 4095]));
  }
}
BENCHMARK(BM_CardanoRealRoot);

void BM_ControllerEval(benchmark::State& state) {
  const ControllerSpec spec{ControllerKind::FlowNegative, {1.0, 1.0}, 0.0002, RootBranch::Plus};
  const FeedbackMap map = make_controller(spec);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::vector<FeedbackInputs> inputs(4096);
  for (auto& in : inputs) in = {std::abs(u(rng)), u(rng), u(rng) * 1e4};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(map(inputs[i++ & 4095]));
  }
}
BENCHMARK(BM_ControllerEval);

void BM_FeedbackInputs(benchmark::State& state) {
  const Grid grid = build_grid(static_cast<int>(state.range(0)));
  const DiffOps ops = build_fd_diff_ops(grid);
  const GridState u = blowup_profile(grid, 1.0);
  const auto reaction = [](double v) { return 0.01 * v * v * v; };
  for (auto _ : state) {
    benchmark::DoNotOptimize(feedback_inputs(u, ops, reaction, 0.0002, BoundarySide::Left));
  }
}
BENCHMARK(BM_FeedbackInputs)->Arg(100)->Arg(500);

void BM_CnStep(benchmark::State& state) {
  SimConfig c = bench_config();
  c.grid_n = static_cast<int>(state.range(0));
  const Grid grid = build_grid(c.grid_n);
  const DiffOps ops = build_fd_diff_ops(grid);
  const CnSystem cn = cn_matrices(c, ops);
  GridState u = blowup_profile(grid, 1.0);
  for (auto _ : state) {
    u = step(u, -1.0, cn, c, ops);
    benchmark::DoNotOptimize(u.data());
  }
  benchmark::ClobberMemory();
}
BENCHMARK(BM_CnStep)->Arg(100)->Arg(500);

void BM_BuildRbfOps(benchmark::State& state) {
  const Grid grid = build_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_rbf_diff_ops(grid, 1e-9));
  }
}
BENCHMARK(BM_BuildRbfOps)->Unit(benchmark::kMillisecond)->Arg(100)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
