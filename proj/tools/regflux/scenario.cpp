#include "regflux/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <tuple>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <regflux/csv.hpp>
#include <regflux/error.hpp>
#include <regflux/hyperbolic.hpp>
#include <regflux/parabolic.hpp>
#include <regflux/triangular.hpp>
#include <regflux/vvlimit.hpp>

namespace regflux::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Strict view of a JSON object: every key must be consumed before done().
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ParseError(where_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T need(const std::string& key) {
    if (!j_.contains(key)) missing(key);
    return convert<T>(key);
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    if (!j_.contains(key)) return fallback;
    return convert<T>(key);
  }

  Reader child(const std::string& key) {
    if (!j_.contains(key)) missing(key);
    used_.insert(key);
    return Reader(j_.at(key), where_ + "." + key);
  }

  void done() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw ParseError("unknown config key '" + key + "' in " + where_);
    }
  }

  const std::string& where() const { return where_; }

 private:
  // A misspelled key shows up first as a missing one; blame the typo instead.
  [[noreturn]] void missing(const std::string& key) const {
    for (const auto& [other, value] : j_.items()) {
      if (!used_.count(other) && edit_distance(other, key) <= 2) {
        throw ParseError("unknown config key '" + other + "' in " + where_ + " (did you mean '" +
                         key + "'?)");
      }
    }
    throw ParseError(where_ + ": missing key '" + key + "'");
  }

  static std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      std::size_t diag = row[0];
      row[0] = i;
      for (std::size_t j = 1; j <= b.size(); ++j) {
        std::size_t up = row[j];
        row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] != b[j - 1] ? 1u : 0u)});
        diag = up;
      }
    }
    return row[b.size()];
  }

  template <class T>
  T convert(const std::string& key) {
    used_.insert(key);
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ParseError(where_ + ": bad value for '" + key + "': " + e.what());
    }
  }

  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

double positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(what + " must be positive");
  return v;
}

void log(const RunOptions& o, const std::string& msg) {
  if (o.verbose) std::cerr << "[regflux] " << msg << '\n';
}

void write_text(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

void write_json(const fs::path& p, const json& doc) { write_text(p, doc.dump(2) + "\n"); }

std::string profiles_csv(const TimeProfiles& pr) {
  std::ostringstream out;
  out << "t,x,u\n";
  for (std::size_t k = 0; k < pr.times.size(); ++k) {
    const std::string t = format_double(pr.times[k]);
    for (std::size_t j = 0; j < pr.grid.n_cells(); ++j) {
      out << t << ',' << format_double(pr.grid.center(j)) << ',' << format_double(pr.values[k][j]) << '\n';
    }
  }
  return out.str();
}

std::string diagnostics_csv(const ViscousSolution& sol) {
  std::ostringstream out;
  std::vector<std::vector<double>> rows;
  for (const auto& r : sol.diagnostics) {
    rows.push_back({r.t, r.mass, r.dissipation, static_cast<double>(r.picard_iters)});
  }
  write_csv(out, {"t", "mass", "dissipation", "picard_iters"}, rows);
  return out.str();
}

std::string gaps_csv(const EpsSequenceReport& rep) {
  std::ostringstream out;
  std::vector<std::vector<double>> rows;
  const auto& e = rep.eps_schedule;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = 0; j < e.size(); ++j) rows.push_back({e[i], e[j], rep.pairwise_gaps[i][j]});
  }
  write_csv(out, {"eps_i", "eps_j", "gap"}, rows);
  return out.str();
}

json sweep_summary(const EpsSequenceReport& rep, const std::string& limit_file) {
  return json{{"cauchy_pass", to_string(rep.status)},
              {"eps_schedule", rep.eps_schedule},
              {"consecutive_gaps", rep.consecutive_gaps},
              {"ratios", rep.ratios},
              {"limit_profile", limit_file}};
}

void write_sweep(const fs::path& dir, const EpsSequenceReport& rep) {
  write_text(dir / "gaps.csv", gaps_csv(rep));
  write_text(dir / "limit.csv", profiles_csv(rep.limit_estimate.profiles));
  write_json(dir / "summary.json", sweep_summary(rep, "limit.csv"));
}

ScalarFunction parse_scalar(Reader r) {
  const auto name = r.need<std::string>("name");
  const double scale = r.get<double>("scale", 1.0);
  r.done();
  return catalog::scalar_by_name(name, scale);
}

struct FluxSpec {
  FluxField field;
  std::optional<InterfaceFlux> interface;
};

FluxSpec parse_flux(Reader r, double T) {
  const auto type = r.get<std::string>("type", "catalog");
  FluxSpec spec{FluxField{}, std::nullopt};
  if (type == "catalog") {
    const auto name = r.need<std::string>("name");
    const double scale = r.get<double>("scale", 1.0);
    spec.field = make_flux(catalog::scalar_by_name(name, scale));
  } else if (type == "interface") {
    const auto left = parse_scalar(r.child("left"));
    const auto right = parse_scalar(r.child("right"));
    PiecewiseLinearCurve gamma;
    if (r.has("gamma_samples")) {
      const auto samples = r.need<std::vector<std::array<double, 2>>>("gamma_samples");
      std::vector<double> ts, xs;
      for (const auto& s : samples) {
        ts.push_back(s[0]);
        xs.push_back(s[1]);
      }
      gamma = PiecewiseLinearCurve(ts, xs);
    } else {
      gamma = PiecewiseLinearCurve::line(0.0, T, r.get<double>("gamma_x0", 0.0), r.get<double>("gamma_speed", 0.0));
    }
    spec.interface.emplace(left, right, gamma);
    spec.field = spec.interface->field();
  } else {
    throw ParseError(r.where() + ": unknown flux type '" + type + "'");
  }
  r.done();
  return spec;
}

Profile parse_profile(Reader r) {
  const auto type = r.need<std::string>("type");
  Profile p;
  if (type == "riemann") {
    p = Profile::riemann(r.need<double>("left"), r.need<double>("right"), r.get<double>("at", 0.0));
  } else if (type == "piecewise_constant") {
    p = Profile::piecewise_constant(r.need<std::vector<double>>("breaks"), r.need<std::vector<double>>("values"));
  } else if (type == "gaussian") {
    p = Profile::gaussian(r.need<double>("center"), r.need<double>("width"), r.need<double>("amplitude"));
  } else if (type == "bump") {
    p = Profile::bump(r.need<double>("center"), r.need<double>("radius"), r.need<double>("amplitude"));
  } else if (type == "samples") {
    p = Profile::samples(r.need<std::vector<double>>("x"), r.need<std::vector<double>>("u"));
  } else if (type == "viscous_shock") {
    p = Profile::viscous_shock(r.need<double>("x0"), r.need<double>("eps"));
  } else if (type == "heat_kernel") {
    p = Profile::heat_kernel(r.need<double>("t"), r.get<double>("center", 0.0));
  } else {
    throw ParseError(r.where() + ": unknown profile type '" + type + "'");
  }
  r.done();
  return p;
}

Grid1D parse_grid(Reader r) {
  const double lo = r.need<double>("x_min");
  const double hi = r.need<double>("x_max");
  const auto cells = r.need<std::size_t>("cells");
  r.done();
  if (!(lo < hi)) throw ConfigError(r.where() + ": x_min must be below x_max");
  return Grid1D(lo, hi, cells);
}

std::pair<double, double> parse_window(Reader r) {
  const double lo = r.need<double>("x_min");
  const double hi = r.need<double>("x_max");
  r.done();
  if (!(lo < hi)) throw ConfigError(r.where() + ": x_min must be below x_max");
  return {lo, hi};
}

ConvexityClass parse_class(const std::string& s) {
  if (s == "C1") return ConvexityClass::C1;
  if (s == "C2") return ConvexityClass::C2;
  if (s == "other") return ConvexityClass::Other;
  throw ConfigError("convexity class must be C1, C2 or other, got '" + s + "'");
}

struct GSpec {
  ScalarFunction fn;
  ConvexityClass cls = ConvexityClass::C1;
  double lo = 0.0;
  double hi = 1.0;
  double inflection = std::numeric_limits<double>::quiet_NaN();
};

GSpec parse_g(Reader r) {
  GSpec g;
  g.fn = catalog::scalar_by_name(r.need<std::string>("name"), r.get<double>("scale", 1.0));
  g.cls = parse_class(r.get<std::string>("class", "C1"));
  g.lo = r.get<double>("state_min", 0.0);
  g.hi = r.get<double>("state_max", 1.0);
  g.inflection = r.get<double>("inflection", std::numeric_limits<double>::quiet_NaN());
  r.done();
  return g;
}

void check_kind(Reader& r, const std::string& expected) {
  const auto kind = r.get<std::string>("kind", expected);
  if (kind != expected) throw ConfigError("config kind '" + kind + "' does not match subcommand '" + expected + "'");
  r.get<std::uint64_t>("seed", 0);
  r.get<std::string>("output", "");
}

void record(json& report, RunOutcome& outcome, const std::string& name, bool pass, json detail) {
  detail["pass"] = pass;
  report["checks"][name] = std::move(detail);
  if (!pass) outcome.failures.push_back(name);
}

RunOutcome run_solve(Reader r, const RunOptions& o) {
  check_kind(r, "solve");
  const double T = positive(r.need<double>("T"), "T");
  const auto flux = parse_flux(r.child("flux"), T);
  const auto data = parse_profile(r.child("data"));
  const Grid1D grid = parse_grid(r.child("grid"));
  const double eps = r.need<double>("epsilon");
  if (!(eps >= 0.0)) throw ConfigError("epsilon must be >= 0");
  const auto solver = r.get<std::string>("solver", "fv");
  const auto samples = r.get<std::size_t>("time_samples", 64);
  const double cfl = r.get<double>("cfl", 0.5);
  double mass_tol = 1e-12;
  if (r.has("checks")) {
    Reader c = r.child("checks");
    mass_tol = positive(c.get<double>("mass_drift", mass_tol), "checks.mass_drift");
    c.done();
  }
  r.done();

  const auto u0 = data.cell_averages(grid);
  ViscousSolution sol;
  log(o, "solve: " + solver + " eps=" + format_double(eps));
  if (solver == "fv") {
    FvParams p;
    p.cfl = cfl;
    p.time_samples = samples;
    sol = solve_fv(flux.field, grid, u0, eps, T, p);
  } else if (solver == "mild") {
    MildParams p;
    p.time_samples = samples;
    sol = solve_mild(flux.field, grid, u0, eps, T, p);
  } else {
    throw ConfigError("solver must be 'fv' or 'mild', got '" + solver + "'");
  }
  write_text(o.out / "u.csv", profiles_csv(sol.profiles));
  write_text(o.out / "diagnostics.csv", diagnostics_csv(sol));
  RunOutcome outcome;
  json report;
  const double drift = mass_balance_drift(sol, flux.field);
  const double allowed = mass_tol * std::max(sol.initial_l1, 1e-300);
  record(report, outcome, "mass_balance", drift <= allowed, {{"drift", drift}, {"allowed", allowed}});
  write_json(o.out / "report.json", report);
  return outcome;
}

RunOutcome run_sweep(Reader r, const RunOptions& o) {
  check_kind(r, "sweep");
  const double T = positive(r.need<double>("T"), "T");
  const auto flux = parse_flux(r.child("flux"), T);
  const auto data = parse_profile(r.child("data"));
  const auto [lo, hi] = parse_window(r.child("window"));
  const auto schedule = r.need<std::vector<double>>("schedule");
  SweepParams p;
  p.cells_per_eps = positive(r.get<double>("cells_per_eps", p.cells_per_eps), "cells_per_eps");
  p.time_samples = r.get<std::size_t>("time_samples", p.time_samples);
  p.cauchy_ratio = positive(r.get<double>("cauchy_ratio", p.cauchy_ratio), "cauchy_ratio");
  p.jobs = o.jobs;
  p.keep_runs = false;
  r.done();
  log(o, "sweep over " + std::to_string(schedule.size()) + " eps values");
  const auto rep = eps_sweep(flux.field, data, lo, hi, schedule, T, p);
  write_sweep(o.out / "sweep", rep);
  RunOutcome outcome;
  json report;
  record(report, outcome, "cauchy", rep.status != CauchyStatus::Fail, {{"status", to_string(rep.status)}});
  write_json(o.out / "report.json", report);
  return outcome;
}

struct VSpec {
  std::vector<double> breaks;
  std::vector<double> values;
};

VSpec parse_v0(Reader r) {
  VSpec v{r.need<std::vector<double>>("breaks"), r.need<std::vector<double>>("values")};
  r.done();
  return v;
}

RunOutcome run_extract(Reader r, const RunOptions& o) {
  check_kind(r, "extract");
  const double T = positive(r.need<double>("T"), "T");
  const GSpec g = parse_g(r.child("g"));
  const VSpec v0 = parse_v0(r.child("v0"));
  const double eps = positive(r.need<double>("eps_reg"), "eps_reg");
  const auto [x1, x2] = parse_window(r.child("rectangle"));
  const auto segments = r.get<std::size_t>("segments", 64);
  const auto samples = r.get<std::size_t>("samples", 200);
  r.done();

  if (g.cls != ConvexityClass::C1) {
    throw UnsupportedClass("extract: only class C1 fluxes are supported, got " + to_string(g.cls));
  }
  const auto pl = PiecewiseLinearFlux::interpolate(g.fn, g.lo, g.hi, segments);
  const auto sol = solve_front_tracking(pl, v0.breaks, v0.values, T);
  write_text(o.out / "fronts.csv", fronts_csv(sol.waves()));
  const auto ex = extract_regulated(sol, eps, Rectangle{T, x1, x2});
  write_json(o.out / "regulated.json", ex.field.to_json());
  const auto val = validate_field(ex.field);
  const auto sd = sup_distance(ex.field, [&sol](double t, double x) { return sol(t, x); }, SampleGrid{samples, samples});
  RunOutcome outcome;
  json report;
  report["points"] = ex.points;
  report["interaction_times"] = ex.interaction_times;
  record(report, outcome, "validate_field", val.pass(), {{"uncovered_measure", val.uncovered_measure}});
  record(report, outcome, "sup_distance", sd.max() <= eps, {{"sup", sd.max()}, {"eps", eps}});
  write_json(o.out / "report.json", report);
  return outcome;
}

RunOutcome run_triangular(Reader r, const RunOptions& o) {
  check_kind(r, "triangular");
  TriangularScenario sc;
  sc.T = positive(r.need<double>("T"), "T");
  const GSpec g = parse_g(r.child("g"));
  sc.g = g.fn;
  sc.g_class = g.cls;
  sc.v_min = g.lo;
  sc.v_max = g.hi;
  sc.inflection = g.inflection;
  sc.F = catalog::two_arg_by_name(r.need<std::string>("F"));
  const VSpec v0 = parse_v0(r.child("v0"));
  sc.v_breaks = v0.breaks;
  sc.v_values = v0.values;
  sc.u0 = parse_profile(r.child("u0"));
  std::tie(sc.x_min, sc.x_max) = parse_window(r.child("window"));
  sc.schedule = r.need<std::vector<double>>("schedule");
  sc.eps_reg = positive(r.get<double>("eps_reg", sc.eps_reg), "eps_reg");
  sc.pl_segments = r.get<std::size_t>("pl_segments", sc.pl_segments);
  sc.sweep.time_samples = r.get<std::size_t>("time_samples", sc.sweep.time_samples);
  sc.sweep.cells_per_eps = positive(r.get<double>("cells_per_eps", sc.sweep.cells_per_eps), "cells_per_eps");
  sc.refine_residuals = r.get<bool>("refine_residuals", true);
  const double residual_tol = positive(r.get<double>("residual_tol", 0.01), "residual_tol");
  sc.sweep.jobs = o.jobs;
  sc.sweep.keep_runs = false;
  r.done();

  log(o, "triangular: solving v, then sweeping u");
  const auto res = solve_triangular(sc);
  if (res.v.is_wave()) {
    write_text(o.out / "fronts.csv", fronts_csv(res.v.waves()));
  } else {
    write_text(o.out / "v.csv", profiles_csv(res.v.grid().profiles));
  }
  RunOutcome outcome;
  json report;
  report["membership"] = res.membership;
  report["warnings"] = res.warnings;
  if (res.extraction) {
    write_json(o.out / "regulated.json", res.extraction->field.to_json());
    record(report, outcome, "validate_field", res.validation->pass(),
           {{"uncovered_measure", res.validation->uncovered_measure}});
    record(report, outcome, "certificate", res.certificate->max() <= sc.eps_reg,
           {{"sup", res.certificate->max()}, {"eps_reg", sc.eps_reg}});
  }
  write_sweep(o.out / "sweep", res.sweep);
  record(report, outcome, "cauchy", res.sweep.status != CauchyStatus::Fail, {{"status", to_string(res.sweep.status)}});
  bool small = std::all_of(res.residuals.begin(), res.residuals.end(),
                           [&](double v) { return std::abs(v) <= residual_tol; });
  record(report, outcome, "weak_residual", small, {{"residuals", res.residuals}, {"tolerance", residual_tol}});
  if (!res.residuals_refined.empty()) report["residuals_refined"] = res.residuals_refined;
  write_json(o.out / "report.json", report);
  return outcome;
}

RunOutcome run_check(Reader r, const RunOptions& o) {
  check_kind(r, "checks");
  const double T = positive(r.need<double>("T"), "T");
  const auto flux = parse_flux(r.child("flux"), T);
  std::optional<FluxSpec> flux_hat;
  if (r.has("flux_hat")) flux_hat = parse_flux(r.child("flux_hat"), T);
  const auto data = parse_profile(r.child("data"));
  const Grid1D grid = parse_grid(r.child("grid"));
  const double eps = positive(r.need<double>("epsilon"), "epsilon");
  const auto samples = r.get<std::size_t>("time_samples", 64);
  const auto seed = r.get<std::uint64_t>("seed", 1);
  double mass_tol = 1e-12;
  double delta0_factor = 10.0;
  double xi_factor = 8.0;
  std::size_t jensen_draws = 10000;
  if (r.has("checks")) {
    Reader c = r.child("checks");
    mass_tol = positive(c.get<double>("mass_drift", mass_tol), "checks.mass_drift");
    delta0_factor = positive(c.get<double>("delta0_factor", delta0_factor), "checks.delta0_factor");
    xi_factor = positive(c.get<double>("xi_factor", xi_factor), "checks.xi_factor");
    jensen_draws = c.get<std::size_t>("jensen_draws", jensen_draws);
    c.done();
  }
  r.done();

  const auto u0 = data.cell_averages(grid);
  FvParams p;
  p.time_samples = samples;
  if (flux_hat) p.speed_bound = std::max(flux.field.lipschitz(), flux_hat->field.lipschitz());
  const auto sol = solve_fv(flux.field, grid, u0, eps, T, p);
  write_text(o.out / "diagnostics.csv", diagnostics_csv(sol));
  RunOutcome outcome;
  json report;
  const double drift = mass_balance_drift(sol, flux.field);
  record(report, outcome, "mass_balance", drift <= mass_tol * sol.initial_l1,
         {{"drift", drift}, {"allowed", mass_tol * sol.initial_l1}});

  double worst_tail = HUGE_VAL;
  for (std::size_t k = 1; k < sol.times().size(); ++k) {
    const double t = sol.times()[k];
    const double d0 = delta0_factor * std::sqrt(t * eps);
    for (double x0 : {grid.x_min(), 0.5 * (grid.x_min() + grid.x_max()), grid.x_max()}) {
      worst_tail = std::min(worst_tail, check_tail_bound(sol, 0.0, x0, d0, t).margin);
    }
  }
  record(report, outcome, "tail_bound", worst_tail > 0.0, {{"worst_margin", worst_tail}});

  if (flux_hat) {
    const auto hat = solve_fv(flux_hat->field, grid, u0, eps, T, p);
    double worst = HUGE_VAL;
    for (std::size_t k = 1; k < sol.times().size(); ++k) {
      const double t = sol.times()[k];
      worst = std::min(worst, check_finite_speed(sol, hat, xi_factor * std::sqrt(t * eps), t).margin);
    }
    record(report, outcome, "finite_speed", worst > 0.0, {{"worst_margin", worst}});
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_jensen = HUGE_VAL;
  for (std::size_t k = 0; k < jensen_draws; ++k) {
    const double t = T * unit(rng);
    const double x = grid.x_min() + (grid.x_max() - grid.x_min()) * unit(rng);
    worst_jensen = std::min(worst_jensen, jensen_I(flux.field, t, x, unit(rng), unit(rng)));
  }
  record(report, outcome, "jensen_nonnegative", jensen_draws == 0 || worst_jensen >= -1e-12,
         {{"min", jensen_draws ? worst_jensen : 0.0}, {"draws", jensen_draws}});
  write_json(o.out / "report.json", report);
  return outcome;
}

void finish(RunOutcome& outcome, const RunOptions& o) {
  write_manifest(o.out);
  outcome.exit_code = outcome.failures.empty() ? 0 : 2;
  for (const auto& f : outcome.failures) log(o, "check failed: " + f);
}

}  // namespace

json load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("config " + path.string() + ": " + e.what());
  }
}

RunOutcome run_command(Command cmd, const json& config, const RunOptions& opts) {
  Reader r(config, "config");
  RunOutcome outcome;
  switch (cmd) {
    case Command::Solve: outcome = run_solve(std::move(r), opts); break;
    case Command::Sweep: outcome = run_sweep(std::move(r), opts); break;
    case Command::Extract: outcome = run_extract(std::move(r), opts); break;
    case Command::Triangular: outcome = run_triangular(std::move(r), opts); break;
    case Command::Check: outcome = run_check(std::move(r), opts); break;
  }
  finish(outcome, opts);
  return outcome;
}

std::vector<std::string> demo_names() {
  return {"traveling_wave", "interface_sweep", "burgers_extract", "paired_checks", "triangular"};
}

json demo_config(const std::string& name) {
  const json concave = {{"name", "concave_quadratic"}, {"scale", 1.0}};
  const json concave2 = {{"name", "concave_quadratic"}, {"scale", 2.0}};
  const json steps = {{"type", "piecewise_constant"}, {"breaks", {-1.0, 0.0, 1.0}}, {"values", {0.0, 0.3, 0.6, 0.0}}};
  if (name == "traveling_wave") {
    return {{"kind", "solve"},
            {"flux", {{"type", "catalog"}, {"name", "burgers"}}},
            {"data", {{"type", "viscous_shock"}, {"x0", 0.0}, {"eps", 0.05}}},
            {"grid", {{"x_min", -1.0}, {"x_max", 2.0}, {"cells", 1200}}},
            {"epsilon", 0.05},
            {"T", 1.0},
            {"time_samples", 16}};
  }
  if (name == "interface_sweep") {
    return {{"kind", "sweep"},
            {"flux", {{"type", "interface"}, {"left", concave}, {"right", concave2}, {"gamma_speed", 0.3}}},
            {"data", steps},
            {"window", {{"x_min", -2.0}, {"x_max", 2.0}}},
            {"schedule", {0.2, 0.1, 0.05, 0.025}},
            {"T", 1.0}};
  }
  if (name == "burgers_extract") {
    return {{"kind", "extract"},
            {"g", {{"name", "burgers"}, {"class", "C1"}}},
            {"v0", {{"breaks", {0.0, 1.0}}, {"values", {0.0, 1.0, 0.0}}}},
            {"eps_reg", 0.25},
            {"rectangle", {{"x_min", -1.0}, {"x_max", 3.0}}},
            {"T", 4.0}};
  }
  if (name == "paired_checks") {
    return {{"kind", "checks"},
            {"flux", {{"type", "interface"}, {"left", concave}, {"right", concave}}},
            {"flux_hat", {{"type", "interface"}, {"left", concave}, {"right", concave2}}},
            {"data", steps},
            {"grid", {{"x_min", -2.0}, {"x_max", 2.0}, {"cells", 400}}},
            {"epsilon", 0.05},
            {"T", 1.0},
            {"checks", {{"jensen_draws", 2000}}}};
  }
  if (name == "triangular") {
    return {{"kind", "triangular"},
            {"g", {{"name", "burgers"}, {"class", "C1"}}},
            {"F", "one_plus_alpha_concave"},
            {"v0", {{"breaks", {0.0}}, {"values", {1.0, 0.0}}}},
            {"u0", {{"type", "bump"}, {"center", -0.5}, {"radius", 0.8}, {"amplitude", 0.8}}},
            {"window", {{"x_min", -2.0}, {"x_max", 2.0}}},
            {"schedule", {0.1, 0.05, 0.025, 0.0125, 0.00625}},
            {"refine_residuals", false},
            {"T", 1.0}};
  }
  throw InputError("unknown demo scenario '" + name + "'");
}

RunOutcome run_demo(const RunOptions& opts) {
  RunOutcome total;
  const std::vector<std::pair<std::string, Command>> plan = {
      {"traveling_wave", Command::Solve},   {"interface_sweep", Command::Sweep},
      {"burgers_extract", Command::Extract}, {"paired_checks", Command::Check},
      {"triangular", Command::Triangular}};
  for (const auto& [name, cmd] : plan) {
    RunOptions sub = opts;
    sub.out = opts.out / name;
    log(opts, "demo scenario " + name);
    const auto res = run_command(cmd, demo_config(name), sub);
    for (const auto& f : res.failures) total.failures.push_back(name + "/" + f);
  }
  write_manifest(opts.out);
  total.exit_code = total.failures.empty() ? 0 : 2;
  return total;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json write_manifest(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(e.path());
  }
  std::vector<std::string> rel;
  for (const auto& f : files) rel.push_back(fs::relative(f, dir).generic_string());
  std::sort(rel.begin(), rel.end());
  json entries = json::array();
  for (const auto& r : rel) {
    std::ifstream in(dir / r, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    entries.push_back({{"path", r}, {"bytes", bytes.size()}, {"fnv1a64", hex}});
  }
  json doc = {{"hash", "fnv1a64"}, {"artifacts", entries}};
  write_json(dir / "manifest.json", doc);
  return doc;
}

}  // namespace regflux::cli
