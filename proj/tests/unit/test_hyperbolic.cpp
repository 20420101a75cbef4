#include <doctest.h>

#include <cmath>

#include <regflux/error.hpp>
#include <regflux/hyperbolic.hpp>

using namespace regflux;

namespace {

ScalarFlux burgers() { return ScalarFlux::make(catalog::burgers(), ConvexityClass::C1, 0.0, 1.0); }

double l1_distance_coarse(const std::vector<double>& coarse, const std::vector<double>& fine, double dx) {
  double d = 0.0;
  for (std::size_t j = 0; j < coarse.size(); ++j) d += std::abs(coarse[j] - 0.5 * (fine[2 * j] + fine[2 * j + 1])) * dx;
  return d;
}

}  // namespace

TEST_CASE("convexity classes are verified") {
  CHECK(burgers().convexity == ConvexityClass::C1);
  CHECK_THROWS_AS(ScalarFlux::make(catalog::concave_quadratic(), ConvexityClass::C1, 0.0, 1.0), AssumptionError);
  const auto c = ScalarFlux::make(catalog::cubic(), ConvexityClass::C2, -1.0, 1.0, 0.0);
  CHECK(verify_convexity_class(c));
  CHECK_THROWS_AS(ScalarFlux::make(catalog::cubic(), ConvexityClass::C2, -1.0, 1.0), InputError);
}

TEST_CASE("godunov flux by extremes over the state interval") {
  const auto q = ScalarFlux::make(catalog::concave_quadratic(), ConvexityClass::Other, 0.0, 1.0);
  CHECK(q.godunov(0.2, 0.8) == doctest::Approx(0.16));
  CHECK(q.godunov(0.8, 0.2) == doctest::Approx(0.25));
  CHECK(q.godunov(0.3, 0.4) == doctest::Approx(0.21));
  const auto b = burgers();
  CHECK(b.godunov(1.0, 0.0) == doctest::Approx(0.5));
  CHECK(b.godunov(0.0, 1.0) == doctest::Approx(0.0));
  CHECK(b.max_speed(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("piecewise linear interpolant of burgers") {
  const auto pl = PiecewiseLinearFlux::interpolate(catalog::burgers(), 0.0, 1.0, 4);
  CHECK(pl(0.5) == doctest::Approx(0.125));
  CHECK(pl.speed(0.3) == doctest::Approx(0.375));
  CHECK(pl.speed(0.5) == doctest::Approx(0.5));
  CHECK(pl.max_node_spacing() == doctest::Approx(0.25));
  CHECK_THROWS_AS(PiecewiseLinearFlux({0.0, 0.5, 1.0}, {0.0, 0.5, 0.6}), AssumptionError);
}

TEST_CASE("front tracking riemann problems") {
  const auto pl = PiecewiseLinearFlux::interpolate(catalog::burgers(), 0.0, 1.0, 4);
  const auto shock = solve_front_tracking(pl, {0.0}, {1.0, 0.0}, 2.0);
  REQUIRE(shock.waves().fronts.size() == 1);
  CHECK(shock.waves().fronts[0].shock);
  CHECK(shock.waves().fronts[0].speed == doctest::Approx(0.5));  // Rankine-Hugoniot
  CHECK(shock(1.0, 0.49) == 1.0);
  CHECK(shock(1.0, 0.51) == 0.0);
  CHECK(shock.left_value(1.0, 0.5) == 1.0);

  const auto fan = solve_front_tracking(pl, {0.0}, {0.0, 1.0}, 2.0);
  CHECK(fan.waves().fronts.size() == 4);
  CHECK(fan(1.0, 0.5) == 0.5);  // between contacts of speed 0.375 and 0.625
  CHECK(fan(1.0, 0.1) == 0.0);
  CHECK(fan(1.0, 0.9) == 1.0);
}

TEST_CASE("rarefaction catches the shock at the predicted time") {
  const auto pl = PiecewiseLinearFlux::interpolate(catalog::burgers(), 0.0, 1.0, 4);
  const auto sol = solve_front_tracking(pl, {0.0, 1.0}, {0.0, 1.0, 0.0}, 4.0);
  // Fastest contact (speed 7/8 from x=0) meets the shock (speed 1/2 from x=1).
  bool found = false;
  for (const auto& f : sol.waves().fronts) {
    if (!f.shock && f.t_birth == 0.0 && std::abs(f.speed - 0.875) < 1e-12) {
      CHECK(f.t_death == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
      found = true;
    }
  }
  CHECK(found);
  CHECK(sol.waves().interactions >= 1);
  CHECK(sol.total_variation(3.9) <= sol.initial_tv() + 1e-12);
}

TEST_CASE("godunov scheme riemann solution and self-convergence") {
  const auto b = burgers();
  const Grid1D g(-1.0, 2.0, 600);
  const auto v0 = Profile::riemann(1.0, 0.0).cell_averages(g);
  const auto sol = solve_godunov(b, g, v0, 1.0);
  CHECK(sol(1.0, 0.3) == doctest::Approx(1.0));
  CHECK(sol(1.0, 0.7) == doctest::Approx(0.0));
  CHECK(sol.grid().max_tv_excess <= 1e-12);

  const auto c = ScalarFlux::make(catalog::cubic(), ConvexityClass::C2, -1.0, 1.0, 0.0);
  auto run = [&](std::size_t n) {
    const Grid1D gg(-1.0, 1.0, n);
    return solve_godunov(c, gg, Profile::gaussian(0.0, 0.3, 0.8).cell_averages(gg), 0.5).grid().profiles.values.back();
  };
  const auto a = run(100), m = run(200), f = run(400);
  const double d1 = l1_distance_coarse(a, m, 0.02);
  const double d2 = l1_distance_coarse(m, f, 0.01);
  CHECK(d2 < d1);
}

TEST_CASE("oleinik one-sided bound for rarefaction and shock") {
  const Grid1D g(-1.0, 4.0, 1000);
  const auto v0 = Profile::piecewise_constant({0.0, 1.0}, {0.2, 1.0, 0.2}).cell_averages(g);
  const auto sol = solve_godunov(burgers(), g, v0, 2.0);
  const auto rep = check_oleinik(sol, 1.0, {0.5, 1.0, 2.0});
  CHECK(rep.pass());
  CHECK_THROWS_AS(check_oleinik(sol, 0.0, {1.0}), InputError);
}

TEST_CASE("minimal characteristic follows a shock") {
  const auto pl = PiecewiseLinearFlux::interpolate(catalog::burgers(), 0.0, 1.0, 4);
  const auto sol = solve_front_tracking(pl, {0.0}, {1.0, 0.0}, 2.0);
  const auto ch = min_forward_characteristic(sol, 0.0, 0.0, 2.0);
  CHECK(ch.curve(1.0) == doctest::Approx(0.5));
  CHECK(ch.curve(2.0) == doctest::Approx(1.0));
  CHECK_FALSE(ch.truncated);
}

TEST_CASE("regulated extraction of a single shock") {
  const auto pl = PiecewiseLinearFlux::interpolate(catalog::burgers(), 0.0, 1.0, 16);
  const auto sol = solve_front_tracking(pl, {0.0}, {1.0, 0.0}, 1.0);
  const auto ex = extract_regulated(sol, 0.25, Rectangle{1.0, -1.0, 2.0});
  CHECK(validate_field(ex.field).pass());
  CHECK(ex.field.uncovered_measure() <= 0.25);
  const auto sd = sup_distance(ex.field, [&](double t, double x) { return sol(t, x); }, SampleGrid{100, 100});
  CHECK(sd.max() <= 0.25);

  const auto c = ScalarFlux::make(catalog::cubic(), ConvexityClass::C2, -1.0, 1.0, 0.0);
  const Grid1D g(-1.0, 1.0, 100);
  const auto gs = solve_godunov(c, g, Profile::riemann(1.0, -1.0).cell_averages(g), 0.5);
  CHECK_THROWS_AS(extract_regulated(gs, 0.25, Rectangle{0.5, -1.0, 1.0}), UnsupportedClass);
}

TEST_CASE("front csv layout") {
  const auto pl = PiecewiseLinearFlux::interpolate(catalog::burgers(), 0.0, 1.0, 4);
  const auto sol = solve_front_tracking(pl, {0.0}, {1.0, 0.0}, 1.0);
  const auto csv = fronts_csv(sol.waves());
  CHECK(csv.rfind("front_id,t_birth,t_death,x_birth,speed_segments,left_state,right_state\n", 0) == 0);
}
