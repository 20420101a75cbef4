#include "regflux/triangular.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "regflux/error.hpp"

namespace regflux {

namespace {

struct WaveSnapshot {
  const EntropySolution* owner = nullptr;
  double t = -1.0;
  std::vector<double> positions;
  std::vector<double> left_states;
};

}  // namespace

CompositeFlux::Coefficient coefficient_from(const EntropySolution& v) {
  auto sol = std::make_shared<const EntropySolution>(v);
  if (!sol->is_wave()) {
    return [sol](double t, double x) { return sol->left_value(t, x); };
  }
  return [sol](double t, double x) {
    thread_local WaveSnapshot snap;
    if (snap.owner != sol.get() || snap.t != t) {
      snap.owner = sol.get();
      snap.t = t;
      snap.positions.clear();
      snap.left_states.clear();
      for (const Front* f : sol->alive_fronts(t)) {
        snap.positions.push_back(f->position(t));
        snap.left_states.push_back(f->left);
      }
    }
    const auto it = std::lower_bound(snap.positions.begin(), snap.positions.end(), x);
    if (it == snap.positions.end()) return sol->waves().far_right;
    return snap.left_states[static_cast<std::size_t>(it - snap.positions.begin())];
  };
}

namespace {

EntropySolution solve_v(const TriangularScenario& sc) {
  if (!sc.v_profile) {
    if (sc.v_values.size() != sc.v_breaks.size() + 1) {
      throw InputError("solve_triangular: v0 needs one more value than breaks");
    }
    if (sc.g_class == ConvexityClass::C1) {
      const auto pl = PiecewiseLinearFlux::interpolate(sc.g, sc.v_min, sc.v_max, sc.pl_segments);
      return solve_front_tracking(pl, sc.v_breaks, sc.v_values, sc.T);
    }
  }
  const ScalarFlux g = ScalarFlux::make(sc.g, sc.g_class, sc.v_min, sc.v_max, sc.inflection);
  const Profile v0 = sc.v_profile ? *sc.v_profile : Profile::piecewise_constant(sc.v_breaks, sc.v_values);
  const double reach = g.max_speed(sc.v_min, sc.v_max) * sc.T;
  const Grid1D grid(sc.x_min - reach - 1.0, sc.x_max + reach + 1.0, sc.godunov_cells);
  GodunovParams gp;
  gp.time_samples = sc.godunov_samples;
  return solve_godunov(g, grid, v0.cell_averages(grid), sc.T, gp);
}

// Range of v over the computed solution; bounds the composite flux tighter
// than [v_min, v_max].
std::pair<double, double> value_range(const EntropySolution& v) {
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  auto take = [&](double a) {
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  };
  if (v.is_wave()) {
    take(v.waves().far_left);
    take(v.waves().far_right);
    for (const auto& f : v.waves().fronts) {
      take(f.left);
      take(f.right);
    }
  } else {
    for (const auto& row : v.grid().profiles.values) {
      for (double a : row) take(a);
    }
  }
  return {lo, hi};
}

}  // namespace

TriangularResult solve_triangular(const TriangularScenario& sc) {
  if (sc.schedule.empty()) throw InputError("solve_triangular: empty eps schedule");
  if (!(sc.x_min < sc.x_max) || !(sc.T > 0.0)) throw InputError("solve_triangular: bad domain");
  {
    const Grid1D probe(sc.x_min, sc.x_max, 1024);
    for (double w : sc.u0.cell_averages(probe)) {
      if (w < -1e-12 || w > 1.0 + 1e-12) throw InputError("solve_triangular: u0 must take values in [0,1]");
    }
  }

  TriangularResult res{solve_v(sc), {}, {}, {}, {}, {}, {}, {}, {}, {}};
  switch (sc.g_class) {
    case ConvexityClass::C1: res.membership = "C1"; break;
    case ConvexityClass::C2: res.membership = "C2 (extraction not implemented)"; break;
    default: res.membership = "unknown"; break;
  }

  if (sc.g_class == ConvexityClass::C1) {
    res.extraction = extract_regulated(res.v, sc.eps_reg, Rectangle{sc.T, sc.x_min, sc.x_max});
    res.validation = validate_field(res.extraction->field);
    const EntropySolution& v = res.v;
    res.certificate = sup_distance(res.extraction->field, [&v](double t, double x) { return v(t, x); },
                                   SampleGrid{sc.certificate_samples, sc.certificate_samples});
  } else {
    res.warnings.push_back("extraction skipped: g is not uniformly convex");
  }

  const auto [a_lo, a_hi] = value_range(res.v);
  const CompositeFlux composite(sc.F, coefficient_from(res.v), a_lo, a_hi);
  const FluxField flux = composite.field();
  res.sweep = eps_sweep(flux, sc.u0, sc.x_min, sc.x_max, sc.schedule, sc.T, sc.sweep);
  res.tests = test_function_catalog(sc.x_min, sc.x_max, sc.T);
  res.residuals = weak_residual(res.sweep.limit_estimate.profiles, flux, res.tests);

  if (sc.refine_residuals) {
    const auto& base = res.sweep.limit_estimate;
    const Grid1D window(sc.x_min, sc.x_max, 2 * base.window.n_cells());
    FvParams fp;
    fp.cfl = sc.sweep.cfl;
    fp.time_samples = sc.sweep.time_samples;
    fp.pad = (base.grid().n_cells() - base.window.n_cells()) / 2 * base.grid().dx();
    const auto refined = solve_fv(flux, window, sc.u0.cell_averages(window), 0.5 * sc.schedule.back(), sc.T, fp);
    res.residuals_refined = weak_residual(refined.profiles, flux, res.tests);
  }
  return res;
}

}  // namespace regflux
