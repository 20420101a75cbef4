#include "regflux/vvlimit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "regflux/error.hpp"

namespace regflux {

using boost::math::quadrature::gauss_kronrod;

std::vector<double> integrate_profile(std::span<const double> u, double dx) {
  std::vector<double> U(u.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    acc += u[j] * dx;
    U[j] = acc;
  }
  return U;
}

IntegratedProfile integrate_profiles(const TimeProfiles& profiles) {
  IntegratedProfile out;
  out.grid = profiles.grid;
  out.times = profiles.times;
  for (const auto& u : profiles.values) out.values.push_back(integrate_profile(u, profiles.grid.dx()));
  return out;
}

std::string to_string(CauchyStatus s) {
  switch (s) {
    case CauchyStatus::Pass: return "pass";
    case CauchyStatus::Fail: return "fail";
    default: return "indeterminate";
  }
}

CauchyStatus cauchy_status(const std::vector<double>& gaps, double max_ratio) {
  if (gaps.size() < 3) return CauchyStatus::Indeterminate;
  for (std::size_t k = gaps.size() - 2; k < gaps.size(); ++k) {
    if (!(gaps[k] < gaps[k - 1]) || gaps[k] > max_ratio * gaps[k - 1]) return CauchyStatus::Fail;
  }
  return CauchyStatus::Pass;
}

namespace {

struct MemberResult {
  ViscousSolution run;
  std::vector<std::vector<double>> U;  // on the coarse lattice, per stored time
};

std::size_t worker_count(std::size_t requested, std::size_t tasks) {
  std::size_t n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, tasks));
}

}  // namespace

EpsSequenceReport eps_sweep(const FluxField& flux, const Profile& u0, double x_min, double x_max,
                            const std::vector<double>& schedule, double T, const SweepParams& params) {
  if (schedule.empty()) throw InputError("eps_sweep: empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0)) throw InputError("eps_sweep: eps must be positive");
    if (i > 0 && !(schedule[i] < schedule[i - 1])) throw InputError("eps_sweep: schedule must strictly decrease");
  }
  if (!(params.cells_per_eps > 0.0)) throw ConfigError("eps_sweep: cells_per_eps must be positive");
  if (!(x_min < x_max)) throw InputError("eps_sweep: empty window");

  const double L = flux.lipschitz();
  const auto n0 = static_cast<std::size_t>(std::ceil((x_max - x_min) * params.cells_per_eps / schedule.front() - 1e-9));
  const Grid1D coarse(x_min, x_max, std::max<std::size_t>(n0, 8));
  const double dx0 = coarse.dx();
  double pad = params.pad.value_or(default_pad(L, schedule.front(), T));
  pad = std::ceil(pad / dx0 - 1e-9) * dx0;
  const Grid1D lattice = coarse.padded(pad);

  const std::size_t m = schedule.size();
  std::vector<std::size_t> refine(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double target = schedule[i] / params.cells_per_eps;
    refine[i] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(dx0 / target - 1e-9)));
  }

  std::vector<MemberResult> results(m);
  std::vector<std::exception_ptr> errors(m);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < m; i = next++) {
      try {
        const std::size_t r = refine[i];
        const Grid1D window(x_min, x_max, coarse.n_cells() * r);
        const auto data = u0.cell_averages(window);
        FvParams fp;
        fp.cfl = params.cfl;
        fp.time_samples = params.time_samples;
        fp.pad = pad;
        MemberResult res;
        res.run = solve_fv(flux, window, data, schedule[i], T, fp);
        const auto& g = res.run.grid();
        if (g.n_cells() != lattice.n_cells() * r) throw Error("eps_sweep: padded grids are not nested");
        std::vector<double> avg(lattice.n_cells());
        for (const auto& u : res.run.profiles.values) {
          for (std::size_t c = 0; c < avg.size(); ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < r; ++k) s += u[c * r + k];
            avg[c] = s / static_cast<double>(r);
          }
          res.U.push_back(integrate_profile(avg, dx0));
        }
        results[i] = std::move(res);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t nw = worker_count(params.jobs, m);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < nw; ++w) pool.emplace_back(worker);
    worker();
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw SweepError("eps_sweep: member eps=" + std::to_string(schedule[i]) + " failed: " + e.what(), schedule[i]);
    }
  }

  EpsSequenceReport rep;
  rep.eps_schedule = schedule;
  rep.lattice = lattice;
  rep.times = results.front().run.times();
  rep.pairwise_gaps.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double gap = 0.0;
      for (std::size_t k = 0; k < results[i].U.size(); ++k) {
        const auto& a = results[i].U[k];
        const auto& b = results[j].U[k];
        for (std::size_t c = 0; c < a.size(); ++c) gap = std::max(gap, std::abs(a[c] - b[c]));
      }
      rep.pairwise_gaps[i][j] = gap;
      rep.pairwise_gaps[j][i] = gap;
    }
  }
  for (std::size_t i = 0; i + 1 < m; ++i) rep.consecutive_gaps.push_back(rep.pairwise_gaps[i][i + 1]);
  for (std::size_t i = 0; i + 1 < rep.consecutive_gaps.size(); ++i) {
    rep.ratios.push_back(rep.consecutive_gaps[i + 1] / rep.consecutive_gaps[i]);
  }
  rep.status = cauchy_status(rep.consecutive_gaps, params.cauchy_ratio);
  rep.limit_estimate = results.back().run;
  if (params.keep_runs) {
    for (auto& r : results) rep.runs.push_back(std::move(r.run));
  }
  return rep;
}

namespace {

void require_same_runs(const ViscousSolution& a, const ViscousSolution& b, const char* who) {
  if (!a.grid().same_as(b.grid()) || a.times().size() != b.times().size()) {
    throw InputError(std::string(who) + ": runs do not share grid and times");
  }
  for (std::size_t k = 0; k < a.times().size(); ++k) {
    if (std::abs(a.times()[k] - b.times()[k]) > 1e-12 * (1.0 + std::abs(a.times()[k]))) {
      throw InputError(std::string(who) + ": runs do not share stored times");
    }
  }
}

}  // namespace

ComparisonReport check_integrated_comparison(const ViscousSolution& run, const ViscousSolution& run_sharp,
                                             const std::function<double(double)>& eta, double eta_bar,
                                             double slack) {
  require_same_runs(run, run_sharp, "check_integrated_comparison");
  if (run.epsilon != run_sharp.epsilon) throw InputError("check_integrated_comparison: runs differ in eps");
  ComparisonReport rep;
  const Grid1D& g = run.grid();
  for (std::size_t k = 0; k < run.times().size(); ++k) {
    const double t = run.times()[k];
    const double drift = t > 0.0 ? gauss_kronrod<double, 31>::integrate(eta, 0.0, t, 10, 1e-12) : 0.0;
    const auto U = integrate_profile(run.at(k), g.dx());
    const auto Us = integrate_profile(run_sharp.at(k), g.dx());
    for (std::size_t j = 0; j < U.size(); ++j) {
      const double margin = Us[j] + eta_bar + drift - U[j];
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_time = t;
        rep.worst_x = g.edge(j + 1);
      }
    }
  }
  rep.pass = rep.worst_margin >= -slack;
  return rep;
}

double tail_mass(double l1, double tau, double eps, double delta0) {
  if (delta0 <= 0.0) return 0.5 * l1;
  if (tau * eps <= 0.0) return 0.0;
  return l1 * 0.5 * std::erfc(delta0 / (2.0 * std::sqrt(tau * eps)));
}

double mass_left_of(const Grid1D& grid, std::span<const double> u, double x) {
  if (x <= grid.x_min()) return 0.0;
  const double dx = grid.dx();
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double a = grid.edge(j);
    if (a >= x) break;
    s += u[j] * std::min(dx, x - a);
  }
  return s;
}

TailReport check_tail_bound(const ViscousSolution& run, double t0, double x0, double delta0, double t,
                            double slack) {
  if (!(t > t0) || t0 < 0.0) throw InputError("check_tail_bound: need t > t0 >= 0");
  if (delta0 < 0.0) throw InputError("check_tail_bound: delta0 must be >= 0");
  const auto& pr = run.profiles;
  const std::size_t k0 = pr.nearest_time_index(t0);
  const std::size_t k = pr.nearest_time_index(t);
  const double tau = pr.times[k] - pr.times[k0];
  TailReport rep;
  rep.lhs = mass_left_of(pr.grid, pr.values[k], x0 - delta0 - run.lipschitz * tau);
  rep.bound = tail_mass(run.initial_l1, tau, run.epsilon, delta0);
  rep.rhs = mass_left_of(pr.grid, pr.values[k0], x0) + rep.bound;
  rep.margin = rep.rhs - rep.lhs;
  rep.pass = rep.margin >= -slack * std::max(run.initial_l1, 1.0);
  return rep;
}

TailReport check_finite_speed(const ViscousSolution& run, const ViscousSolution& run_hat, double xi, double t,
                              double slack) {
  require_same_runs(run, run_hat, "check_finite_speed");
  if (run.epsilon != run_hat.epsilon) throw InputError("check_finite_speed: runs differ in eps");
  if (!(t > 0.0) || xi < 0.0) throw InputError("check_finite_speed: need t > 0 and xi >= 0");
  const auto& pr = run.profiles;
  const std::size_t k = pr.nearest_time_index(t);
  const double tk = pr.times[k];
  const double L = std::max(run.lipschitz, run_hat.lipschitz);
  const double x = -L * tk - xi;
  TailReport rep;
  rep.lhs = std::abs(mass_left_of(pr.grid, pr.values[k], x) - mass_left_of(pr.grid, run_hat.at(k), x));
  rep.bound = 4.0 * tail_mass(run.initial_l1, tk, run.epsilon, xi);
  rep.rhs = rep.bound;
  rep.margin = rep.rhs - rep.lhs;
  rep.pass = rep.margin >= -slack * std::max(run.initial_l1, 1.0);
  return rep;
}

namespace entropies {

EntropyPair identity() {
  return {"identity", [](double w) { return w; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
}

EntropyPair half_square() {
  return {"half_square", [](double w) { return 0.5 * w * w; }, [](double w) { return w; },
          [](double) { return 1.0; }};
}

EntropyPair smoothed_kruzkov(double k, double delta) {
  if (!(delta > 0.0)) throw InputError("smoothed_kruzkov: delta must be positive");
  return {"smoothed_kruzkov",
          [k, delta](double w) { return std::hypot(w - k, delta); },
          [k, delta](double w) { return (w - k) / std::hypot(w - k, delta); },
          [k, delta](double w) {
            const double r = std::hypot(w - k, delta);
            return delta * delta / (r * r * r);
          }};
}

}  // namespace entropies

double entropy_flux(const EntropyPair& pair, const FluxField& flux, double t, double x, double w) {
  if (w == 0.0) return 0.0;
  auto integrand = [&](double s) { return pair.d_eta(s) * flux.d_omega(t, x, s); };
  double err = 0.0;
  const double lo = std::min(0.0, w);
  const double hi = std::max(0.0, w);
  const double q = gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 15, 1e-13, &err);
  if (!(err <= 1e-8 * (1.0 + std::abs(q)))) {
    throw ConvergenceError("entropy_flux: quadrature did not converge", err);
  }
  return w > 0.0 ? q : -q;
}

double jensen_I(const FluxField& flux, double t, double x, double v, double w) {
  if (v == w) return 0.0;
  const double lo = std::min(v, w);
  const double hi = std::max(v, w);
  auto sq = [&](double s) {
    const double d = flux.d_omega(t, x, s);
    return d * d;
  };
  const double integral = gauss_kronrod<double, 61>::integrate(sq, lo, hi, 4, 1e-12);
  const double df = flux(t, x, v) - flux(t, x, w);
  return (hi - lo) * integral - df * df;
}

double entropy_dissipation(const ViscousSolution& run, const SpaceTimeWindow& window) {
  if (!(window.t1 >= window.t0) || !(window.x2 > window.x1)) throw InputError("entropy_dissipation: bad window");
  const Grid1D& g = run.grid();
  const double dx = g.dx();
  if (window.x1 < g.x_min() || window.x2 > g.x_max()) {
    throw InputError("entropy_dissipation: window outside the computational grid");
  }
  const auto rate = [&](const std::vector<double>& u) {
    double s = 0.0;
    for (std::size_t j = 0; j + 1 < u.size(); ++j) {
      if (g.center(j) < window.x1 || g.center(j + 1) > window.x2) continue;
      const double d = (u[j + 1] - u[j]) / dx;
      s += d * d * dx;
    }
    return run.epsilon * s;
  };
  const auto& ts = run.times();
  const double tol = 1e-12 * (1.0 + std::abs(window.t1));
  double total = 0.0;
  double prev_t = 0.0;
  double prev_r = 0.0;
  bool have_prev = false;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (ts[k] < window.t0 - tol || ts[k] > window.t1 + tol) continue;
    const double r = rate(run.at(k));
    if (have_prev) total += 0.5 * (r + prev_r) * (ts[k] - prev_t);
    prev_t = ts[k];
    prev_r = r;
    have_prev = true;
  }
  return total;
}

namespace {

double bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double bump_d(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return bump(s) * (-2.0 * s / (q * q));
}

}  // namespace

double TestFunction::operator()(double t, double x) const { return bump((t - tc) / tr) * bump((x - xc) / xr); }

double TestFunction::dt(double t, double x) const {
  return bump_d((t - tc) / tr) / tr * bump((x - xc) / xr);
}

double TestFunction::dx(double t, double x) const {
  return bump((t - tc) / tr) * bump_d((x - xc) / xr) / xr;
}

std::vector<double> weak_residual(const TimeProfiles& u, const FluxField& flux,
                                  const std::vector<TestFunction>& tests) {
  const Grid1D& g = u.grid;
  if (u.times.size() < 2) throw InputError("weak_residual: need at least two stored times");
  const double T = u.times.back();
  const double dx = g.dx();
  std::vector<double> out;
  for (const auto& phi : tests) {
    if (!(phi.tr > 0.0) || !(phi.xr > 0.0)) throw InputError("weak_residual: test radii must be positive");
    if (phi.xc - phi.xr < g.x_min() || phi.xc + phi.xr > g.x_max() || phi.tc + phi.tr > T) {
      throw InputError("weak_residual: test function support exceeds the domain");
    }
    const std::size_t j0 = g.cell_of(phi.xc - phi.xr);
    const std::size_t j1 = g.cell_of(phi.xc + phi.xr);
    auto slice = [&](std::size_t k) {
      const double t = u.times[k];
      const auto& v = u.values[k];
      double s = 0.0;
      for (std::size_t j = j0; j <= j1; ++j) {
        const double x = g.center(j);
        s += v[j] * phi.dt(t, x) + flux(t, x, v[j]) * phi.dx(t, x);
      }
      return s * dx;
    };
    double r = 0.0;
    double prev = slice(0);
    for (std::size_t k = 1; k < u.times.size(); ++k) {
      const double cur = slice(k);
      r += 0.5 * (prev + cur) * (u.times[k] - u.times[k - 1]);
      prev = cur;
    }
    double initial = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) initial += u.values[0][j] * phi(u.times[0], g.center(j));
    out.push_back(r + initial * dx);
  }
  return out;
}

std::vector<TestFunction> test_function_catalog(double x_min, double x_max, double T) {
  const double w = x_max - x_min;
  std::vector<TestFunction> out;
  for (int k = 0; k < 5; ++k) {
    TestFunction phi;
    phi.xc = x_min + w * (1.0 + 1.0 * k) / 6.0;
    phi.xr = w / 6.0;
    if (k % 2 == 0) {
      phi.tc = 0.5 * T;
      phi.tr = 0.45 * T;
    } else {
      phi.tc = 0.3 * T;
      phi.tr = 0.6 * T;
    }
    out.push_back(phi);
  }
  return out;
}

double galilean_consistency(const ViscousSolution& run, const ViscousSolution& frame_run, double speed) {
  const double t = run.times().back();
  if (std::abs(frame_run.times().back() - t) > 1e-12 * (1.0 + t)) {
    throw InputError("galilean_consistency: runs end at different times");
  }
  const Grid1D& g = run.grid();
  const Grid1D& gf = frame_run.grid();
  const auto& u = run.at(run.times().size() - 1);
  const auto& w = frame_run.at(frame_run.times().size() - 1);
  const double shift = speed * t;
  double l1 = 0.0;
  double left = mass_left_of(gf, w, g.edge(0) - shift);
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double right = mass_left_of(gf, w, g.edge(j + 1) - shift);
    l1 += std::abs(u[j] * g.dx() - (right - left));
    left = right;
  }
  return l1;
}

}  // namespace regflux
