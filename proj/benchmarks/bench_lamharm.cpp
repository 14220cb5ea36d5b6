#include <benchmark/benchmark.h>

#include <random>

#include "generators.hpp"
#include "lamharm/axis.hpp"
#include "lamharm/field.hpp"
#include "lamharm/radial.hpp"
#include "lamharm/spectral.hpp"
#include "lamharm/transform.hpp"

using namespace lamharm;

namespace {

ProblemSpec bench_spec(std::size_t m, std::size_t n) {
  std::mt19937_64 rng(11);
  return lamharm::testing::random_spec(rng, lamharm::testing::spec_shape(static_cast<int>(m), static_cast<int>(n), 2));
}

void BM_PropagatePairs(benchmark::State& state) {
  const ProblemSpec spec = bench_spec(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_pairs(spec, 12));
}
BENCHMARK(BM_PropagatePairs)->Arg(1)->Arg(2)->Arg(3);

void BM_SolveMode(benchmark::State& state) {
  const ProblemSpec spec = bench_spec(2, static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(3);
  const ModeData data = lamharm::testing::random_mode_data(rng, spec);
  for (auto _ : state) benchmark::DoNotOptimize(solve_mode(spec, 7, data));
}
BENCHMARK(BM_SolveMode)->Arg(1)->Arg(3)->Arg(6);

void BM_ModeViaInfluence(benchmark::State& state) {
  const ProblemSpec spec = bench_spec(2, static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(3);
  const ModeData data = lamharm::testing::random_mode_data(rng, spec);
  const ModeBasis basis = propagate_pairs(spec, 7);
  for (auto _ : state) benchmark::DoNotOptimize(mode_solution_via_hstar(spec, basis, data));
}
BENCHMARK(BM_ModeViaInfluence)->Arg(1)->Arg(3)->Arg(6);

void BM_SolveField(benchmark::State& state) {
  ProblemSpec spec = bench_spec(2, 2);
  std::mt19937_64 rng(5);
  spec.boundary_data = lamharm::testing::random_surface_data(rng, 2, 2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve(spec));
}
BENCHMARK(BM_SolveField)->Arg(8)->Arg(32);

void BM_ZonalKernel(benchmark::State& state) {
  const ProblemSpec spec = dirichlet_preset(1, {1.0, 0.6}, {});
  const int band = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const ZonalKernel k(spec, 1, Source::boundary(), 0.5, band);
    benchmark::DoNotOptimize(k(0.3));
  }
}
BENCHMARK(BM_ZonalKernel)->Arg(50)->Arg(200);

void BM_RobinQuadrature(benchmark::State& state) {
  const Matrix H = Matrix::from_rows({{2, 1}, {1, 2}});
  std::mt19937_64 rng(6);
  const ModeSeries u = lamharm::testing::random_series(rng, 2, 2, 10);
  const RobinTransform t(H);
  for (auto _ : state) benchmark::DoNotOptimize(t.quadrature(u, {0.3, -0.4, 0}));
}
BENCHMARK(BM_RobinQuadrature);

void BM_ReflectionSeries(benchmark::State& state) {
  const Matrix K = Matrix::from_rows({{2, 0.5}, {0.5, 1.5}});
  std::mt19937_64 rng(7);
  const ModeSeries u = lamharm::testing::random_series(rng, 2, 2, 8);
  const ReflectionSeries s(K, 0.5, u);
  for (auto _ : state) benchmark::DoNotOptimize(s.evaluate({0.3, 0.6, 0}));
}
BENCHMARK(BM_ReflectionSeries);

void BM_AxisRoundTrip(benchmark::State& state) {
  const AxisSpec spec = continuity_axis({0.0}, {1.0, 2.0});
  const std::vector<double> xs = AxisGrid{}.points();
  ComplexVector f;
  for (double x : xs) f.push_back(std::exp(-2.0 * x * x));
  const AxisQuadrature q = default_axis_quadrature(0.5, 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(axis_roundtrip(spec, xs, f, q));
}
BENCHMARK(BM_AxisRoundTrip)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
