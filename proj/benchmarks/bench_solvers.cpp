#include <benchmark/benchmark.h>

#include <regflux/hyperbolic.hpp>
#include <regflux/parabolic.hpp>
#include <regflux/vvlimit.hpp>

using namespace regflux;

namespace {

InterfaceFlux interface() {
  return InterfaceFlux(catalog::concave_quadratic(1.0), catalog::concave_quadratic(2.0),
                       PiecewiseLinearCurve::line(0.0, 1.0, 0.0, 0.3));
}

// Cells per unit length is the argument; T = 0.25.
void BM_FiniteVolume(benchmark::State& state) {
  const auto f = interface().field();
  const Grid1D g = Grid1D::with_spacing(-2.0, 2.0, 1.0 / static_cast<double>(state.range(0)));
  const auto u0 = Profile::bump(-0.5, 0.8, 0.8).cell_averages(g);
  FvParams p;
  p.time_samples = 1;
  std::size_t steps = 0;
  for (auto _ : state) {
    auto sol = solve_fv(f, g, u0, 0.02, 0.25, p);
    steps = sol.steps;
    benchmark::DoNotOptimize(sol);
  }
  state.counters["steps"] = static_cast<double>(steps);
}
BENCHMARK(BM_FiniteVolume)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_MildBlocks(benchmark::State& state) {
  const auto f = make_flux(catalog::burgers());
  const Grid1D g(-1.0, 2.0, static_cast<std::size_t>(state.range(0)));
  const auto u0 = Profile::viscous_shock(0.0, 0.05).cell_averages(g);
  MildParams p;
  p.time_samples = 2;
  for (auto _ : state) benchmark::DoNotOptimize(solve_mild(f, g, u0, 0.05, 0.1, p));
}
BENCHMARK(BM_MildBlocks)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_Godunov(benchmark::State& state) {
  const auto g = ScalarFlux::make(catalog::cubic(), ConvexityClass::C2, -1.0, 1.0, 0.0);
  const Grid1D grid(-2.0, 2.0, static_cast<std::size_t>(state.range(0)));
  const auto v0 = Profile::gaussian(0.0, 0.3, 0.8).cell_averages(grid);
  GodunovParams p;
  p.time_samples = 1;
  for (auto _ : state) benchmark::DoNotOptimize(solve_godunov(g, grid, v0, 0.5, p));
}
BENCHMARK(BM_Godunov)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

// Flux segments is the argument; alternating data make many interactions.
void BM_FrontTracking(benchmark::State& state) {
  const auto pl = PiecewiseLinearFlux::interpolate(catalog::burgers(), 0.0, 1.0, static_cast<std::size_t>(state.range(0)));
  std::vector<double> breaks, values{0.0};
  for (int k = 0; k < 20; ++k) {
    breaks.push_back(0.25 * k);
    values.push_back(k % 2 ? 0.0 : 1.0);
  }
  std::size_t fronts = 0;
  for (auto _ : state) {
    auto sol = solve_front_tracking(pl, breaks, values, 4.0);
    fronts = sol.waves().fronts.size();
    benchmark::DoNotOptimize(sol);
  }
  state.counters["fronts"] = static_cast<double>(fronts);
}
BENCHMARK(BM_FrontTracking)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Extraction(benchmark::State& state) {
  const auto pl = PiecewiseLinearFlux::interpolate(catalog::burgers(), 0.0, 1.0, 64);
  const auto sol = solve_front_tracking(pl, {0.0, 1.0}, {0.0, 1.0, 0.0}, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(extract_regulated(sol, 0.25, Rectangle{4.0, -1.0, 3.0}));
}
BENCHMARK(BM_Extraction)->Unit(benchmark::kMillisecond);

void BM_Jensen(benchmark::State& state) {
  const auto f = interface().field();
  double v = 0.1;
  for (auto _ : state) {
    v = v > 0.9 ? 0.1 : v + 0.013;
    benchmark::DoNotOptimize(jensen_I(f, 0.5, 0.2, v, 0.05));
  }
}
BENCHMARK(BM_Jensen);

}  // namespace

BENCHMARK_MAIN();
