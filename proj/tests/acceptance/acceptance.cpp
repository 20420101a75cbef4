// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <regflux/hyperbolic.hpp>
#include <regflux/parabolic.hpp>
#include <regflux/triangular.hpp>
#include <regflux/vvlimit.hpp>

#ifdef REGFLUX_WITH_CLI
#include "regflux/scenario.hpp"
#endif

using namespace regflux;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("[%s] %2d %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs);
  std::fflush(stdout);
}

void info(const char* title, const std::string& detail) {
  std::printf("[INFO]    %s: %s\n", title, detail.c_str());
  std::fflush(stdout);
}

const std::vector<double> kSchedule{0.2, 0.1, 0.05, 0.025, 0.0125};
const std::vector<double> kTriangularSchedule{0.1, 0.05, 0.025, 0.0125, 0.00625};

Profile interface_data() { return Profile::piecewise_constant({-1.0, 0.0, 1.0}, {0.0, 0.3, 0.6, 0.0}); }

InterfaceFlux interface_flux(double speed) {
  return InterfaceFlux(catalog::concave_quadratic(1.0), catalog::concave_quadratic(2.0),
                       PiecewiseLinearCurve::line(0.0, 1.0, 0.0, speed));
}

// Index of the first window cell inside a padded solution grid.
std::size_t offset_of(const ViscousSolution& sol) { return sol.grid().cell_of(sol.window.center(0)); }

double l1_on_window(const ViscousSolution& sol, std::size_t k, const std::vector<double>& ref) {
  const std::size_t k0 = offset_of(sol);
  double d = 0.0;
  for (std::size_t j = 0; j < ref.size(); ++j) d += std::abs(sol.at(k)[k0 + j] - ref[j]) * sol.grid().dx();
  return d;
}

// Coefficient v of the flagship triangular system (Burgers shock 1 | 0).
EntropySolution burgers_shock(double T) {
  const auto pl = PiecewiseLinearFlux::interpolate(catalog::burgers(), 0.0, 1.0, 64);
  return solve_front_tracking(pl, {0.0}, {1.0, 0.0}, T);
}

struct Scenario {
  std::string name;
  std::function<FluxField(double T)> flux;  // T: horizon the flux must cover
  Profile u0;
  double x_min = -2.0;
  double x_max = 2.0;
  double eps = 0.05;
  bool integrable = true;  // u0 >= 0 in L1, the hypothesis of the tail bound
};

// The shipped scenarios (those of the demo), at one viscosity.
std::vector<Scenario> shipped() {
  std::vector<Scenario> s;
  s.push_back({"traveling_wave", [](double) { return make_flux(catalog::burgers()); },
               Profile::viscous_shock(0.0, 0.05), -1.0, 2.0, 0.05, false});
  s.push_back({"interface_static", [](double) { return interface_flux(0.0).field(); }, interface_data()});
  s.push_back({"interface_moving",
               [](double T) {
                 return InterfaceFlux(catalog::concave_quadratic(1.0), catalog::concave_quadratic(2.0),
                                      PiecewiseLinearCurve::line(0.0, T, 0.0, 0.3))
                     .field();
               },
               interface_data()});
  s.push_back({"paired_base",
               [](double) {
                 return InterfaceFlux(catalog::concave_quadratic(), catalog::concave_quadratic(),
                                      PiecewiseLinearCurve::line(0.0, 1.0, 0.0, 0.0))
                     .field();
               },
               interface_data()});
  s.push_back({"triangular",
               [](double T) {
                 auto v = std::make_shared<EntropySolution>(burgers_shock(T));
                 auto c = coefficient_from(*v);
                 return CompositeFlux(catalog::one_plus_alpha_concave(), [v, c](double t, double x) { return c(t, x); },
                                      0.0, 1.0)
                     .field();
               },
               Profile::bump(-0.5, 0.8, 0.8)});
  return s;
}

Verdict heat_kernel() {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid1D w(-8.0, 8.0, 16 * 400);
  MildParams mp;
  mp.time_samples = 4;
  const auto sol = solve_mild(make_flux(catalog::zero()), w, Profile::heat_kernel(1.0).cell_averages(w), 0.1, 1.0, mp);
  double err = 0.0;
  for (std::size_t k = 0; k < sol.times().size(); ++k) {
    const auto ex = Profile::heat_kernel(1.0 + 0.1 * sol.times()[k]).cell_averages(sol.grid());
    for (std::size_t j = 0; j < ex.size(); ++j) err = std::max(err, std::abs(sol.at(k)[j] - ex[j]));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {err <= 1e-6 && secs <= 10.0, "sup error " + fmt("%.3e", err) + " <= 1e-6, runtime " + fmt("%.2f", secs) + " s <= 10 s"};
}

Verdict contraction() {
  const double eps = 16.0 / M_PI;
  const Grid1D w(-4.0, 4.0, 160);
  const auto u0 = Profile::bump(0.0, 2.0, 0.8).cell_averages(w);
  MildParams mp;
  mp.block_fraction = 1.0;
  mp.time_samples = 3;
  const std::vector<std::pair<std::string, FluxField>> fluxes = {
      {"burgers", make_flux(catalog::burgers())},
      {"concave", make_flux(catalog::concave_quadratic())},
      {"interface", InterfaceFlux(catalog::concave_quadratic(), catalog::concave_quadratic(0.5),
                                  PiecewiseLinearCurve::line(0.0, 3.0, 0.0, 0.0))
                        .field()}};
  bool pass = true;
  std::string detail;
  for (const auto& [name, f] : fluxes) {
    const auto sol = solve_mild(f, w, u0, eps, 3.0, mp);
    const double worst = *std::max_element(sol.block_ratios.begin(), sol.block_ratios.end());
    pass = pass && f.lipschitz() == 1.0 && worst <= 0.55 && std::abs(sol.block_lengths.front() - 1.0) < 1e-12;
    detail += name + " " + fmt("%.3f", worst) + "; ";
  }
  return {pass, "max Picard ratio per block (L=1, block 1) " + detail + "bound 0.55"};
}

// Runs of at least 1e4 FV steps: the horizon is stretched to fit.
Verdict conservation() {
  bool pass = true;
  std::string detail;
  for (const auto& sc : shipped()) {
    const double dx = sc.eps / 8.0;
    const Grid1D w = Grid1D::with_spacing(sc.x_min, sc.x_max, dx);
    const double L = sc.flux(1.0).lipschitz();
    const double T = 1e4 * 0.5 * w.dx() / L;
    const auto f = sc.flux(T);
    FvParams p;
    p.time_samples = 10;
    const auto sol = solve_fv(f, w, sc.u0.cell_averages(w), sc.eps, T, p);
    const double rel = mass_balance_drift(sol, f) / sol.initial_l1;
    pass = pass && sol.steps >= 10000 && rel <= 1e-12;
    detail += sc.name + " " + fmt("%.1e", rel) + " (" + std::to_string(sol.steps) + " steps); ";
  }
  return {pass, "relative mass drift " + detail + "bound 1e-12"};
}

Profile random_steps(std::mt19937_64& rng, double lo_value) {
  std::uniform_real_distribution<double> pos(-1.5, 1.5), val(0.0, 1.0);
  std::vector<double> breaks(4);
  for (auto& b : breaks) b = pos(rng);
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> values{0.0};
  for (int k = 0; k < 3; ++k) values.push_back(lo_value + (1.0 - lo_value) * val(rng));
  values.push_back(0.0);
  return Profile::piecewise_constant(breaks, values);
}

Verdict comparison() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Grid1D w(-2.0, 2.0, 400);
  const std::vector<std::pair<std::string, FluxField>> fluxes = {{"burgers", make_flux(catalog::burgers())},
                                                                 {"interface", interface_flux(0.0).field()}};
  double worst_order = 0.0;
  double worst_growth = 0.0;
  for (const auto& [name, f] : fluxes) {
    for (int pair = 0; pair < 20; ++pair) {
      const auto u0 = random_steps(rng, 0.0).cell_averages(w);
      const auto bump = random_steps(rng, 0.0).cell_averages(w);
      std::vector<double> v0(u0.size());
      for (std::size_t j = 0; j < u0.size(); ++j) v0[j] = std::min(1.0, u0[j] + unit(rng) * bump[j]);
      FvParams p;
      p.time_samples = 16;
      const auto a = solve_fv(f, w, u0, 0.02, 1.0, p);
      const auto b = solve_fv(f, w, v0, 0.02, 1.0, p);
      double prev = HUGE_VAL;
      for (std::size_t k = 0; k < a.times().size(); ++k) {
        double d = 0.0;
        for (std::size_t j = 0; j < a.grid().n_cells(); ++j) {
          worst_order = std::max(worst_order, a.at(k)[j] - b.at(k)[j]);
          d += std::abs(a.at(k)[j] - b.at(k)[j]) * a.grid().dx();
        }
        if (k > 0) worst_growth = std::max(worst_growth, d - prev);
        prev = d;
      }
    }
  }
  return {worst_order <= 1e-12 && worst_growth <= 1e-10,
          "40 ordered pairs: max(u - v) " + fmt("%.1e", worst_order) + " <= 1e-12, max L1 increase " +
              fmt("%.1e", worst_growth) + " <= 1e-10"};
}

Verdict traveling_wave() {
  const double eps = 0.05;
  const auto f = make_flux(catalog::burgers());
  const Grid1D w(-1.0, 2.0, 3 * 400);
  const auto u0 = Profile::viscous_shock(0.0, eps).cell_averages(w);
  const auto exact = Profile::viscous_shock(0.5, eps).cell_averages(w);
  FvParams fp;
  fp.time_samples = 8;
  MildParams mp;
  mp.time_samples = 8;
  const auto a = solve_fv(f, w, u0, eps, 1.0, fp);
  const auto b = solve_mild(f, w, u0, eps, 1.0, mp);
  const double ea = l1_on_window(a, 8, exact);
  const double eb = l1_on_window(b, 8, exact);
  std::vector<double> bw(b.at(8).begin() + static_cast<long>(offset_of(b)),
                         b.at(8).begin() + static_cast<long>(offset_of(b) + w.n_cells()));
  const double cross = l1_on_window(a, 8, bw);
  return {ea <= 1e-3 && eb <= 1e-3 && cross <= 5e-3,
          "L1 error fv " + fmt("%.2e", ea) + ", mild " + fmt("%.2e", eb) + " <= 1e-3; cross " + fmt("%.2e", cross) +
              " <= 5e-3"};
}

Verdict tails() {
  double worst_tail = HUGE_VAL;
  std::string detail;
  for (const auto& sc : shipped()) {
    if (!sc.integrable) {
      detail += sc.name + " n/a (u0 -> 1 at -inf, not integrable); ";
      continue;
    }
    const Grid1D w = Grid1D::with_spacing(sc.x_min, sc.x_max, sc.eps / 8.0);
    FvParams p;
    p.time_samples = 16;
    const auto sol = solve_fv(sc.flux(1.0), w, sc.u0.cell_averages(w), sc.eps, 1.0, p);
    double m = HUGE_VAL;
    for (std::size_t k = 1; k < sol.times().size(); ++k) {
      const double t = sol.times()[k];
      for (double x0 : {sc.x_min, 0.0, sc.x_max}) {
        m = std::min(m, check_tail_bound(sol, 0.0, x0, 10.0 * std::sqrt(t * sc.eps), t).margin);
      }
    }
    worst_tail = std::min(worst_tail, m);
    detail += sc.name + " " + fmt("%.1e", m) + "; ";
  }
  // Paired fluxes agreeing on x <= 0, sharing the time step.
  const auto base = InterfaceFlux(catalog::concave_quadratic(), catalog::concave_quadratic(),
                                  PiecewiseLinearCurve::line(0.0, 1.0, 0.0, 0.0)).field();
  const auto hat = interface_flux(0.0).field();
  const Grid1D w = Grid1D::with_spacing(-2.0, 2.0, 0.05 / 8.0);
  FvParams p;
  p.time_samples = 16;
  p.speed_bound = 2.0;
  const auto u0 = interface_data().cell_averages(w);
  const auto a = solve_fv(base, w, u0, 0.05, 1.0, p);
  const auto b = solve_fv(hat, w, u0, 0.05, 1.0, p);
  double worst_fs = HUGE_VAL;
  for (std::size_t k = 1; k < a.times().size(); ++k) {
    const double t = a.times()[k];
    worst_fs = std::min(worst_fs, check_finite_speed(a, b, 8.0 * std::sqrt(t * 0.05), t).margin);
  }
  return {worst_tail > 0.0 && worst_fs > 0.0,
          "tail margins " + detail + "finite-speed margin (paired) " + fmt("%.2e", worst_fs) + "; all > 0"};
}

Verdict cauchy(double speed, EpsSequenceReport& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = eps_sweep(interface_flux(speed).field(), interface_data(), -2.0, 2.0, kSchedule, 1.0);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool pass = out.ratios.size() == kSchedule.size() - 2 && secs <= 300.0;
  std::string r;
  for (double q : out.ratios) {
    pass = pass && q <= 0.8;
    r += fmt("%.3f ", q);
  }
  for (std::size_t k = 1; k < out.consecutive_gaps.size(); ++k) {
    pass = pass && out.consecutive_gaps[k] < out.consecutive_gaps[k - 1];
  }
  pass = pass && out.status == CauchyStatus::Pass;
  return {pass, "gap ratios " + r + "<= 0.8, strictly decreasing, status " + to_string(out.status) + ", sweep " +
                    fmt("%.1f", secs) + " s <= 300 s"};
}

Verdict galilean() {
  const double eps = 0.05;
  const auto itf = interface_flux(0.3);
  const Grid1D w = Grid1D::with_spacing(-2.0, 2.0, eps / 8.0);
  const auto u0 = interface_data().cell_averages(w);
  FvParams p;
  p.time_samples = 8;
  p.pad = 3.0;
  const auto lab = solve_fv(itf.field(), w, u0, eps, 1.0, p);
  const auto frame = solve_fv(galilean_shift(itf), w, u0, eps, 1.0, p);
  const double d = galilean_consistency(lab, frame, 0.3);
  return {d <= 5.0 * w.dx(), "L1 distance lab vs shifted frame " + fmt("%.2e", d) + " <= 5 dx = " + fmt("%.2e", 5.0 * w.dx())};
}

Verdict oleinik() {
  const auto g = ScalarFlux::make(catalog::burgers(), ConvexityClass::C1, 0.0, 1.0);
  const Grid1D w(-1.0, 4.0, 2000);
  const double lambda = g.min_curvature(0.0, 1.0);
  const auto run = [&](const Profile& v0) {
    return check_oleinik(solve_godunov(g, w, v0.cell_averages(w), 2.0), lambda, {0.5, 1.0, 2.0});
  };
  const auto rep = run(Profile::piecewise_constant({0.0, 1.0}, {0.2, 1.0, 0.2}));
  std::string d;
  for (const auto& s : rep.samples) d += "t=" + fmt("%.1f", s.t) + " excess " + fmt("%.1e", s.max_excess) + "/slack " + fmt("%.1e", s.slack) + "; ";
  const auto transonic = run(Profile::piecewise_constant({0.0, 1.0}, {0.0, 1.0, 0.0}));
  std::string t;
  for (const auto& s : transonic.samples) t += "t=" + fmt("%.1f", s.t) + " excess/slack " + fmt("%.2f", s.max_excess / s.slack) + "; ";
  info("transonic rarefaction (sonic point at the left state, not a criterion)", t);
  return {rep.pass(), "lambda " + fmt("%.2f", lambda) + ", " + d};
}

Verdict extraction() {
  const auto pl = PiecewiseLinearFlux::interpolate(catalog::burgers(), 0.0, 1.0, 64);
  const auto sol = solve_front_tracking(pl, {0.0, 1.0}, {0.0, 1.0, 0.0}, 4.0);
  const auto ex = extract_regulated(sol, 0.25, Rectangle{4.0, -1.0, 3.0});
  const auto val = validate_field(ex.field);
  const auto sd = sup_distance(ex.field, [&](double t, double x) { return sol(t, x); }, SampleGrid{200, 200});
  return {sol.initial_tv() == 2.0 && val.pass() && val.uncovered_measure <= 0.25 && sd.max() <= 0.25,
          "TV(v0) " + fmt("%.0f", sol.initial_tv()) + ", " + std::to_string(ex.interaction_times.size()) +
              " interaction times, validate " + (val.pass() ? "ok" : "failed") + ", uncovered " +
              fmt("%.4f", val.uncovered_measure) + " <= 0.25, sup distance " + fmt("%.4f", sd.max()) + " <= 0.25"};
}

Verdict weak_solution() {
  TriangularScenario sc;
  sc.v_breaks = {0.0};
  sc.v_values = {1.0, 0.0};
  sc.u0 = Profile::bump(-0.5, 0.8, 0.8);
  sc.schedule = kTriangularSchedule;
  const auto res = solve_triangular(sc);
  bool pass = res.residuals.size() == 5 && res.residuals_refined.size() == 5;
  std::string d;
  for (std::size_t i = 0; i < res.residuals.size() && pass; ++i) {
    pass = pass && std::abs(res.residuals[i]) <= 0.01 && std::abs(res.residuals_refined[i]) < std::abs(res.residuals[i]);
    d += fmt("%.2e", std::abs(res.residuals[i])) + "->" + fmt("%.2e", std::abs(res.residuals_refined[i])) + " ";
  }
  return {pass, "|R| at eps " + fmt("%g", sc.schedule.back()) + " -> refined: " + d + "(<= 0.01, decreasing)"};
}

Verdict jensen() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto pl = burgers_shock(1.0);
  auto coeff = coefficient_from(pl);
  const std::vector<FluxField> fluxes = {
      make_flux(catalog::burgers()), make_flux(catalog::concave_quadratic()), make_flux(catalog::cubic()),
      interface_flux(0.3).field(),
      CompositeFlux(catalog::one_plus_alpha_concave(), coeff, 0.0, 1.0).field()};
  double worst = HUGE_VAL;
  for (int k = 0; k < 10000; ++k) {
    const auto& f = fluxes[static_cast<std::size_t>(k) % fluxes.size()];
    worst = std::min(worst, jensen_I(f, unit(rng), 4.0 * unit(rng) - 2.0, unit(rng), unit(rng)));
  }
  const double b = jensen_I(make_flux(catalog::burgers()), 0.0, 0.0, 1.0, 0.0);
  double lin = 0.0;
  const auto l = make_flux(catalog::linear(1.7));
  for (int k = 0; k < 1000; ++k) lin = std::max(lin, std::abs(jensen_I(l, 0.0, 0.0, unit(rng), unit(rng))));
  return {worst >= -1e-12 && std::abs(b - 1.0 / 12.0) <= 1e-10 && lin <= 1e-12,
          "min over 1e4 draws " + fmt("%.2e", worst) + " >= -1e-12; I(burgers,1,0) - 1/12 = " +
              fmt("%.1e", b - 1.0 / 12.0) + "; linear max |I| " + fmt("%.1e", lin) + " <= 1e-12"};
}

Verdict dissipation(const EpsSequenceReport& sweep) {
  const SpaceTimeWindow win{0.0, 1.0, -2.0, 2.0};
  std::vector<double> d;
  for (const auto& r : sweep.runs) d.push_back(entropy_dissipation(r, win));
  bool pass = !d.empty();
  std::string s;
  for (double v : d) {
    pass = pass && v <= 2.0 * d.front();
    s += fmt("%.4f ", v);
  }
  return {pass, "dissipation on [0,1]x[-2,2] per eps: " + s + "<= 2 x " + fmt("%.4f", d.empty() ? 0.0 : d.front())};
}

Verdict determinism() {
#ifdef REGFLUX_WITH_CLI
  namespace fs = std::filesystem;
  const auto root = fs::temp_directory_path() / "regflux_acceptance_demo";
  fs::remove_all(root);
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  cli::RunOptions o;
  o.out = root / "a";
  const auto first = cli::run_demo(o);
  o.out = root / "b";
  const auto second = cli::run_demo(o);
  const auto ma = read(root / "a" / "manifest.json");
  const auto mb = read(root / "b" / "manifest.json");
  const auto n = nlohmann::json::parse(ma)["artifacts"].size();
  fs::remove_all(root);
  return {ma == mb && n > 0 && first.exit_code == 0 && second.exit_code == 0,
          std::to_string(n) + " artifacts, manifests " + (ma == mb ? "identical" : "differ") + ", demo exit codes " +
              std::to_string(first.exit_code) + "/" + std::to_string(second.exit_code)};
#else
  return {false, "built without the command line tool"};
#endif
}

}  // namespace

int main() {
  criterion(1, "heat-kernel exactness (mild)", heat_kernel);
  criterion(2, "Picard contraction", contraction);
  criterion(3, "conservation over 1e4 FV steps", conservation);
  criterion(4, "comparison and L1 contraction", comparison);
  criterion(5, "viscous Burgers traveling wave", traveling_wave);
  criterion(6, "tail and finite-speed bounds", tails);
  EpsSequenceReport fixed, moving;
  criterion(7, "vanishing-viscosity Cauchy, static interface", [&] { return cauchy(0.0, fixed); });
  criterion(8, "vanishing-viscosity Cauchy, moving interface", [&] {
    auto v = cauchy(0.3, moving);
    const auto g = galilean();
    return Verdict{v.pass && g.pass, v.detail + "; " + g.detail};
  });
  criterion(9, "Oleinik one-sided bound", oleinik);
  criterion(10, "regulated extraction certificate", extraction);
  criterion(11, "weak solution residuals", weak_solution);
  criterion(12, "Jensen functional", jensen);
  criterion(13, "bounded entropy dissipation", [&] { return dissipation(fixed); });
  criterion(14, "demo determinism", determinism);
  std::printf("%d of 14 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
