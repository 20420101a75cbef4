#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <regflux/error.hpp>
#include <regflux/parabolic.hpp>

#include "oracles.hpp"

using namespace regflux;

TEST_CASE("theta and block length closed forms") {
  CHECK(diffusion_theta(0.25) == 0.5);
  CHECK(diffusion_theta(1.0) == 0.5);
  CHECK(diffusion_theta(2.0) == doctest::Approx(0.75));
  CHECK(contraction_block(16.0 / M_PI, 1.0) == doctest::Approx(1.0));
  CHECK(contraction_block(0.1, 2.0) == doctest::Approx(M_PI * 0.1 / 64.0));
  // The Picard bound at the contraction block is exactly one half.
  for (double eps : {0.01, 0.3, 5.0}) {
    for (double L : {0.5, 1.0, 3.0}) {
      CHECK(picard_ratio_bound(eps, L, contraction_block(eps, L)) == doctest::Approx(0.5));
    }
  }
  CHECK(default_pad(2.0, 0.04, 1.0) == doctest::Approx(4.0));
}

TEST_CASE("mild solution of the heat equation") {
  const Grid1D g(-8.0, 8.0, 3200);
  const auto u0 = Profile::heat_kernel(1.0).cell_averages(g);
  MildParams p;
  p.time_samples = 2;
  const auto sol = solve_mild(make_flux(catalog::zero()), g, u0, 0.1, 0.5, p);
  const auto& pr = sol.profiles;
  const std::size_t k0 = sol.grid().cell_of(g.center(0));
  double err = 0.0;
  for (std::size_t j = 0; j < g.n_cells(); ++j) {
    const double xl = g.edge(j), xr = g.edge(j + 1);
    const double exact = oracle::simpson([](double x) { return oracle::gauss(1.05, x); }, xl, xr, 8) / g.dx();
    err = std::max(err, std::abs(pr.values.back()[k0 + j] - exact));
  }
  CHECK(err < 1e-6);
}

TEST_CASE("finite volume conserves mass of compact data") {
  const Grid1D g(-1.0, 1.0, 200);
  const auto u0 = Profile::bump(0.0, 0.5, 0.9).cell_averages(g);
  FvParams p;
  p.time_samples = 8;
  const auto sol = solve_fv(make_flux(catalog::burgers()), g, u0, 0.01, 1.0, p);
  CHECK(sol.mass_drift() <= 1e-13 * sol.initial_l1);
  CHECK(mass_balance_drift(sol, make_flux(catalog::burgers())) <= 1e-13 * sol.initial_l1);
}

TEST_CASE("boundary inflow enters the mass balance") {
  const Grid1D g(-1.0, 1.0, 200);
  const auto u0 = Profile::riemann(1.0, 0.0).cell_averages(g);
  const auto f = make_flux(catalog::burgers());
  const auto sol = solve_fv(f, g, u0, 0.02, 1.0);
  CHECK(sol.mass_drift() == doctest::Approx(0.5).epsilon(1e-6));  // f(1) - f(0) per unit time
  CHECK(mass_balance_drift(sol, f) < 1e-12);
}

TEST_CASE("constant states are steady") {
  const Grid1D g(0.0, 1.0, 50);
  const std::vector<double> u0(50, 0.3);
  const auto sol = solve_fv(make_flux(catalog::concave_quadratic()), g, u0, 0.05, 0.5);
  for (double v : sol.profiles.values.back()) CHECK(v == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("ordered data stay ordered and contract in L1") {
  const Grid1D g(-1.0, 1.0, 200);
  const auto f = make_flux(catalog::burgers());
  const auto u0 = Profile::bump(-0.2, 0.5, 0.6).cell_averages(g);
  auto v0 = u0;
  for (std::size_t j = 50; j < 150; ++j) v0[j] = std::min(1.0, v0[j] + (j % 7 == 0 ? 0.3 : 0.1));
  FvParams p;
  p.time_samples = 16;
  const auto a = solve_fv(f, g, u0, 0.01, 1.0, p);
  const auto b = solve_fv(f, g, v0, 0.01, 1.0, p);
  double prev = HUGE_VAL;
  for (std::size_t k = 0; k < a.times().size(); ++k) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.grid().n_cells(); ++j) {
      CHECK(a.at(k)[j] <= b.at(k)[j] + 1e-12);
      d += (b.at(k)[j] - a.at(k)[j]) * a.grid().dx();
    }
    CHECK(d <= prev + 1e-12);
    prev = d;
  }
}

TEST_CASE("solver configuration errors") {
  const Grid1D g(0.0, 1.0, 10);
  const std::vector<double> u0(10, 0.5);
  const auto f = make_flux(catalog::burgers());
  FvParams p;
  p.cfl = 0.6;
  CHECK_THROWS_AS(solve_fv(f, g, u0, 0.1, 1.0, p), ConfigError);
  p.cfl = 0.5;
  p.speed_bound = 0.5;
  CHECK_THROWS_AS(solve_fv(f, g, u0, 0.1, 1.0, p), ConfigError);
  CHECK_THROWS_AS(solve_fv(f, g, std::vector<double>(9, 0.5), 0.1, 1.0), InputError);
  CHECK_THROWS_AS(solve_fv(f, g, u0, -0.1, 1.0), InputError);
}

TEST_CASE("mild Picard ratio respects the block bound") {
  const Grid1D g(-3.0, 3.0, 300);
  const auto u0 = Profile::bump(0.0, 1.0, 0.8).cell_averages(g);
  const auto sol = solve_mild(make_flux(catalog::concave_quadratic()), g, u0, 0.2, 0.5);
  REQUIRE_FALSE(sol.block_ratios.empty());
  for (std::size_t i = 0; i < sol.block_ratios.size(); ++i) {
    CHECK(sol.block_ratios[i] <= picard_ratio_bound(0.2, 1.0, sol.block_lengths[i]) + 1e-9);
  }
}
