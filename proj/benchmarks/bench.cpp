#include <benchmark/benchmark.h>

#include <random>

#include "ramulus/experiments.hpp"
#include "ramulus/local_branch.hpp"
#include "ramulus/measures.hpp"
#include "ramulus/optimizer.hpp"
#include "ramulus/solver.hpp"
#include "ramulus/topology.hpp"

using namespace ramulus;

namespace {

Point pt(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

Boundary random_boundary(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Atom> atoms;
  double sum = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double w = (i % 2 ? 1.0 : -1.0) * (0.2 + u(rng));
    atoms.push_back({pt(u(rng), u(rng)), w});
    sum += w;
  }
  atoms.push_back({pt(u(rng), u(rng)), -sum});
  return Boundary(AtomicMeasure(std::move(atoms)));
}

void BM_Solve(benchmark::State& state) {
  std::mt19937_64 rng(42);
  const Boundary b = random_boundary(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_gilbert(b, 0.5).value);
}
BENCHMARK(BM_Solve)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_EnumerateTopologies(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_topologies(static_cast<int>(state.range(0))).size());
}
BENCHMARK(BM_EnumerateTopologies)->DenseRange(3, 6);

void BM_Placement(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const int n = static_cast<int>(state.range(0));
  const Boundary b = random_boundary(rng, n);
  const Topology t = full_topologies(n).front();
  std::vector<double> w;
  std::vector<Point> terminals;
  for (const auto& a : b.atoms()) {
    w.push_back(a.weight);
    terminals.push_back(a.position);
  }
  const PlacementProblem p{t, edge_flows(t, w), terminals, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(minimize_placement(p).value);
}
BENCHMARK(BM_Placement)->DenseRange(4, 8, 2)->Unit(benchmark::kMicrosecond);

void BM_FlatNorm(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<Atom> atoms;
  for (int i = 0; i < state.range(0); ++i) atoms.push_back({pt(u(rng), u(rng)), i % 2 ? 1.0 : -1.0});
  const AtomicMeasure m(std::move(atoms));
  for (auto _ : state) benchmark::DoNotOptimize(flat_norm_0(m));
}
BENCHMARK(BM_FlatNorm)->RangeMultiplier(4)->Range(4, 256);

void BM_ClassifyFourPoint(benchmark::State& state) {
  const FourPointInstance inst{pt(-4, 0.008), pt(-0.5, 0), pt(0.5, 0), pt(4, -0.008), 1.0, 16, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(classify_four_point(inst).label);
}
BENCHMARK(BM_ClassifyFourPoint)->Unit(benchmark::kMillisecond);

void BM_Dyadic(benchmark::State& state) {
  std::vector<Atom> atoms;
  const int side = 64;
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) atoms.push_back({pt((i + 0.5) / side, (j + 0.5) / side), 1.0});
  const AtomicMeasure mu(std::move(atoms));
  for (auto _ : state) benchmark::DoNotOptimize(dyadic_transport(mu, 0.75, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Dyadic)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
