#include <doctest.h>

#include <cmath>

#include <regflux/error.hpp>
#include <regflux/vvlimit.hpp>

#include "oracles.hpp"

using namespace regflux;

TEST_CASE("integrated profile and mass left of a point") {
  const std::vector<double> u{1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};
  const auto U = integrate_profile(u, 0.5);
  CHECK(U[0] == 0.5);
  CHECK(U[3] == 5.0);
  CHECK(U[7] == 18.0);
  const Grid1D g(0.0, 1.0, 8);
  CHECK(mass_left_of(g, u, 0.1875) == doctest::Approx(0.25));
  CHECK(mass_left_of(g, u, -1.0) == 0.0);
  CHECK(mass_left_of(g, u, 2.0) == doctest::Approx(4.5));
}

TEST_CASE("cauchy status from the last three gaps") {
  CHECK(cauchy_status({1.0, 0.5, 0.25, 0.125}, 0.8) == CauchyStatus::Pass);
  CHECK(cauchy_status({1.0, 0.9, 0.85, 0.8}, 0.8) == CauchyStatus::Fail);
  CHECK(cauchy_status({1.0, 2.0, 1.0, 0.5, 0.25}, 0.8) == CauchyStatus::Pass);
  CHECK(cauchy_status({1.0, 0.5}, 0.8) == CauchyStatus::Indeterminate);
  CHECK(to_string(CauchyStatus::Pass) == "pass");
}

TEST_CASE("tail mass matches quadrature of the variance-2 kernel") {
  for (double d : {0.5, 2.0, 4.0}) {
    const double q = oracle::simpson([](double x) { return oracle::gauss(1.0, x); }, d, d + 40.0);
    CHECK(tail_mass(1.0, 1.0, 1.0, d) == doctest::Approx(q).epsilon(1e-9));
  }
  // Scaling: delta0 / sqrt(tau eps) is the only argument, times the mass.
  CHECK(tail_mass(3.0, 0.25, 0.04, 0.2) == doctest::Approx(3.0 * tail_mass(1.0, 1.0, 1.0, 2.0)));
}

TEST_CASE("jensen functional closed forms") {
  const auto b = make_flux(catalog::burgers());
  CHECK(jensen_I(b, 0.0, 0.0, 1.0, 0.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  // (v - w)^4 / 12 for burgers.
  CHECK(jensen_I(b, 0.0, 0.0, 0.7, 0.2) == doctest::Approx(std::pow(0.5, 4) / 12.0).epsilon(1e-12));
  const auto lin = make_flux(catalog::linear(2.0));
  CHECK(std::abs(jensen_I(lin, 0.0, 0.0, 0.9, 0.1)) <= 1e-12);
}

TEST_CASE("entropy fluxes in closed form") {
  const auto b = make_flux(catalog::burgers());
  CHECK(entropy_flux(entropies::identity(), b, 0.0, 0.0, 0.6) == doctest::Approx(0.18));
  CHECK(entropy_flux(entropies::half_square(), b, 0.0, 0.0, 0.6) == doctest::Approx(0.072));
  // Kruzkov with k = 0: q = sign-weighted flux, close to f for small delta.
  CHECK(entropy_flux(entropies::smoothed_kruzkov(0.0, 1e-6), b, 0.0, 0.0, 0.6) == doctest::Approx(0.18).epsilon(1e-5));
  const auto k = entropies::smoothed_kruzkov(0.3, 0.1);
  CHECK(k.d_eta(0.3) == 0.0);
  CHECK(k.d2_eta(0.3) == doctest::Approx(10.0));
}

TEST_CASE("weak residual vanishes for a constant state") {
  TimeProfiles pr;
  pr.grid = Grid1D(-2.0, 2.0, 400);
  for (int k = 0; k <= 1000; ++k) {
    pr.times.push_back(k * 0.001);
    pr.values.emplace_back(400, 0.4);
  }
  const auto tests = test_function_catalog(-2.0, 2.0, 1.0);
  CHECK(tests.size() == 5);
  // Only the time quadrature of the initial term is inexact here.
  for (double r : weak_residual(pr, make_flux(catalog::burgers()), tests)) CHECK(std::abs(r) < 1e-6);
  CHECK_THROWS_AS(weak_residual(pr, make_flux(catalog::burgers()), {TestFunction{0.5, 0.3, 1.9, 0.5}}), InputError);
}

TEST_CASE("test function derivatives") {
  const TestFunction phi{0.5, 0.4, 0.1, 0.7};
  const double h = 1e-6;
  CHECK(phi.dt(0.6, 0.3) == doctest::Approx((phi(0.6 + h, 0.3) - phi(0.6 - h, 0.3)) / (2 * h)).epsilon(1e-6));
  CHECK(phi.dx(0.6, 0.3) == doctest::Approx((phi(0.6, 0.3 + h) - phi(0.6, 0.3 - h)) / (2 * h)).epsilon(1e-6));
  CHECK(phi(0.5, 0.1) == doctest::Approx(1.0));
}

TEST_CASE("small sweep on a burgers riemann problem") {
  SweepParams p;
  p.time_samples = 8;
  p.jobs = 2;
  const auto rep = eps_sweep(make_flux(catalog::burgers()), Profile::riemann(1.0, 0.0), -1.0, 1.0,
                             {0.2, 0.1, 0.05, 0.025}, 0.5, p);
  REQUIRE(rep.consecutive_gaps.size() == 3);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(rep.pairwise_gaps[i][i] == 0.0);
    for (std::size_t j = 0; j < 4; ++j) CHECK(rep.pairwise_gaps[i][j] == rep.pairwise_gaps[j][i]);
  }
  CHECK(rep.consecutive_gaps[2] < rep.consecutive_gaps[0]);
  CHECK(rep.runs.size() == 4);
  CHECK(rep.limit_estimate.epsilon == 0.025);
  CHECK_THROWS_AS(eps_sweep(make_flux(catalog::burgers()), Profile::riemann(1.0, 0.0), -1.0, 1.0, {0.1, 0.2}, 0.5),
                  InputError);
}

TEST_CASE("comparison and tail checks on a single run") {
  const Grid1D g(-2.0, 2.0, 200);
  const auto f = make_flux(catalog::concave_quadratic());
  const auto u0 = Profile::bump(0.0, 0.8, 0.7).cell_averages(g);
  FvParams p;
  p.time_samples = 8;
  const auto run = solve_fv(f, g, u0, 0.05, 1.0, p);
  CHECK(check_integrated_comparison(run, run, [](double) { return 0.0; }, 0.0).pass);
  const auto tail = check_tail_bound(run, 0.0, 0.0, 10.0 * std::sqrt(0.05), 1.0);
  CHECK(tail.pass);
  CHECK(tail.margin > 0.0);
  const auto fs = check_finite_speed(run, run, 1.0, 1.0);
  CHECK(fs.lhs == 0.0);
  SpaceTimeWindow w{0.0, 1.0, -1.0, 1.0};
  CHECK(entropy_dissipation(run, w) > 0.0);
}
