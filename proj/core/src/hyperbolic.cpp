#include "regflux/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "regflux/csv.hpp"
#include "regflux/error.hpp"

namespace regflux {

std::string to_string(ConvexityClass c) {
  switch (c) {
    case ConvexityClass::C1: return "C1";
    case ConvexityClass::C2: return "C2";
    default: return "other";
  }
}

namespace {

double bisect_root(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int i = 0; i < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double sample_point(double lo, double hi, std::size_t k, std::size_t n) {
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n);
}

}  // namespace

ScalarFlux ScalarFlux::make(const ScalarFunction& f, ConvexityClass c, double state_min, double state_max,
                            double inflection) {
  if (!(state_min < state_max)) throw InputError("ScalarFlux: empty state range");
  if (c == ConvexityClass::C2 && !(inflection > state_min && inflection < state_max)) {
    throw InputError("ScalarFlux: class C2 needs an inflection point inside the state range");
  }
  ScalarFlux g;
  g.name = f.name;
  g.g = f.value;
  g.dg = f.d1;
  g.d2g = f.d2;
  g.convexity = c;
  g.inflection = inflection;
  g.state_min = state_min;
  g.state_max = state_max;
  if (!verify_convexity_class(g)) {
    throw AssumptionError("ScalarFlux '" + f.name + "': g'' sign pattern does not match class " +
                          to_string(c));
  }
  constexpr std::size_t n = 2000;
  double prev = g.dg(state_min);
  for (std::size_t k = 1; k <= n; ++k) {
    const double a = sample_point(state_min, state_max, k - 1, n);
    const double b = sample_point(state_min, state_max, k, n);
    const double cur = g.dg(b);
    if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) g.stationary.push_back(bisect_root(g.dg, a, b));
    if (cur != 0.0) prev = cur;
  }
  return g;
}

double ScalarFlux::godunov(double a, double b) const {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  double best = g(a);
  const double gb = g(b);
  const bool want_min = a <= b;
  best = want_min ? std::min(best, gb) : std::max(best, gb);
  for (double s : stationary) {
    if (s > lo && s < hi) {
      const double gs = g(s);
      best = want_min ? std::min(best, gs) : std::max(best, gs);
    }
  }
  return best;
}

double ScalarFlux::max_speed(double lo, double hi) const {
  constexpr std::size_t n = 512;
  double m = 0.0;
  for (std::size_t k = 0; k <= n; ++k) m = std::max(m, std::abs(dg(sample_point(lo, hi, k, n))));
  return m;
}

double ScalarFlux::min_curvature(double lo, double hi) const {
  constexpr std::size_t n = 512;
  double m = HUGE_VAL;
  for (std::size_t k = 0; k <= n; ++k) m = std::min(m, d2g(sample_point(lo, hi, k, n)));
  return m;
}

bool verify_convexity_class(const ScalarFlux& g, std::size_t samples) {
  if (g.convexity == ConvexityClass::Other) return true;
  const double width = g.state_max - g.state_min;
  for (std::size_t k = 0; k <= samples; ++k) {
    const double s = sample_point(g.state_min, g.state_max, k, samples);
    const double c = g.d2g(s);
    if (g.convexity == ConvexityClass::C1) {
      if (!(c > 0.0)) return false;
    } else {
      if (std::abs(s - g.inflection) <= 1e-9 * width) continue;
      if (s < g.inflection && !(c < 0.0)) return false;
      if (s > g.inflection && !(c > 0.0)) return false;
    }
  }
  return true;
}

PiecewiseLinearFlux::PiecewiseLinearFlux(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() < 2 || nodes_.size() != values_.size()) {
    throw InputError("PiecewiseLinearFlux: need at least two nodes with values");
  }
  for (std::size_t k = 1; k < nodes_.size(); ++k) {
    if (!(nodes_[k] > nodes_[k - 1])) throw InputError("PiecewiseLinearFlux: nodes must increase");
  }
  double prev = -HUGE_VAL;
  for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
    const double s = (values_[k + 1] - values_[k]) / (nodes_[k + 1] - nodes_[k]);
    if (s < prev - 1e-12 * (1.0 + std::abs(prev))) throw AssumptionError("PiecewiseLinearFlux: flux is not convex");
    prev = s;
  }
}

PiecewiseLinearFlux PiecewiseLinearFlux::interpolate(const ScalarFunction& f, double lo, double hi,
                                                     std::size_t segments) {
  if (segments == 0 || !(lo < hi)) throw InputError("PiecewiseLinearFlux: bad node range");
  std::vector<double> nodes(segments + 1), values(segments + 1);
  for (std::size_t k = 0; k <= segments; ++k) {
    nodes[k] = sample_point(lo, hi, k, segments);
    values[k] = f(nodes[k]);
  }
  nodes.back() = hi;
  return {std::move(nodes), std::move(values)};
}

std::size_t PiecewiseLinearFlux::segment(double v) const {
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), v);
  const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - nodes_.begin() - 1, 0));
  return std::min(k, nodes_.size() - 2);
}

double PiecewiseLinearFlux::operator()(double v) const {
  const std::size_t k = segment(v);
  const double s = (values_[k + 1] - values_[k]) / (nodes_[k + 1] - nodes_[k]);
  return values_[k] + s * (v - nodes_[k]);
}

double PiecewiseLinearFlux::speed(double v) const {
  auto slope = [&](std::size_t k) { return (values_[k + 1] - values_[k]) / (nodes_[k + 1] - nodes_[k]); };
  const std::size_t k = segment(v);
  if (v == nodes_[k] && k > 0) return 0.5 * (slope(k - 1) + slope(k));
  if (v == nodes_[k + 1] && k + 2 < nodes_.size()) return 0.5 * (slope(k) + slope(k + 1));
  return slope(k);
}

double PiecewiseLinearFlux::max_node_spacing() const {
  double m = 0.0;
  for (std::size_t k = 1; k < nodes_.size(); ++k) m = std::max(m, nodes_[k] - nodes_[k - 1]);
  return m;
}

ScalarFlux PiecewiseLinearFlux::as_scalar_flux() const {
  ScalarFlux g;
  const PiecewiseLinearFlux self = *this;
  g.name = "piecewise_linear";
  g.g = [self](double v) { return self(v); };
  g.dg = [self](double v) { return self.speed(v); };
  g.d2g = [self](double v) {
    const auto& n = self.nodes_;
    const auto& f = self.values_;
    const std::size_t segs = n.size() - 1;
    if (segs < 2) return 0.0;
    const std::size_t k = self.segment(v);
    const std::size_t a = k == 0 ? 0 : k - 1;
    const std::size_t b = std::min(k + 1, segs - 1);
    auto slope = [&](std::size_t j) { return (f[j + 1] - f[j]) / (n[j + 1] - n[j]); };
    auto mid = [&](std::size_t j) { return 0.5 * (n[j] + n[j + 1]); };
    return (slope(b) - slope(a)) / (mid(b) - mid(a));
  };
  g.convexity = ConvexityClass::C1;
  g.state_min = nodes_.front();
  g.state_max = nodes_.back();
  return g;
}

EntropySolution::EntropySolution(ScalarFlux flux, double horizon, double initial_tv, GridSolution grid)
    : flux_(std::move(flux)), horizon_(horizon), initial_tv_(initial_tv), grid_(std::move(grid)) {}

EntropySolution::EntropySolution(ScalarFlux flux, double horizon, double initial_tv, WaveStructure waves,
                                 PiecewiseLinearFlux pl_flux)
    : flux_(std::move(flux)),
      horizon_(horizon),
      initial_tv_(initial_tv),
      waves_(std::move(waves)),
      pl_flux_(std::move(pl_flux)) {}

double EntropySolution::char_speed(double v) const {
  return pl_flux_ ? pl_flux_->speed(v) : flux_.dg(v);
}

std::vector<const Front*> EntropySolution::alive_fronts(double t) const {
  std::vector<const Front*> out;
  if (!waves_) return out;
  for (const auto& f : waves_->fronts) {
    if (f.alive(t)) out.push_back(&f);
  }
  std::sort(out.begin(), out.end(), [t](const Front* a, const Front* b) {
    const double pa = a->position(t);
    const double pb = b->position(t);
    if (pa != pb) return pa < pb;
    return a->speed < b->speed;
  });
  return out;
}

double EntropySolution::right_value(double t, double x) const {
  if (waves_) {
    const Front* best = nullptr;
    double best_pos = -HUGE_VAL;
    for (const auto& f : waves_->fronts) {
      if (!f.alive(t)) continue;
      const double p = f.position(t);
      if (p > x) continue;
      if (!best || p > best_pos || (p == best_pos && f.speed > best->speed)) {
        best = &f;
        best_pos = p;
      }
    }
    return best ? best->right : waves_->far_left;
  }
  const auto& pr = grid_->profiles;
  const auto& v = pr.values[pr.nearest_time_index(t)];
  return v[pr.grid.cell_of(x)];
}

double EntropySolution::left_value(double t, double x) const {
  if (waves_) {
    const Front* best = nullptr;
    double best_pos = HUGE_VAL;
    for (const auto& f : waves_->fronts) {
      if (!f.alive(t)) continue;
      const double p = f.position(t);
      if (p < x) continue;
      if (!best || p < best_pos || (p == best_pos && f.speed < best->speed)) {
        best = &f;
        best_pos = p;
      }
    }
    return best ? best->left : waves_->far_right;
  }
  const auto& pr = grid_->profiles;
  const auto& v = pr.values[pr.nearest_time_index(t)];
  return v[pr.grid.cell_of(x - 1e-9 * pr.grid.dx())];
}

double EntropySolution::total_variation(double t) const {
  double tv = 0.0;
  if (waves_) {
    for (const Front* f : alive_fronts(t)) tv += std::abs(f->right - f->left);
    return tv;
  }
  const auto& pr = grid_->profiles;
  const auto& v = pr.values[pr.nearest_time_index(t)];
  for (std::size_t j = 1; j < v.size(); ++j) tv += std::abs(v[j] - v[j - 1]);
  return tv;
}

namespace {

double total_variation(std::span<const double> v) {
  double tv = 0.0;
  for (std::size_t j = 1; j < v.size(); ++j) tv += std::abs(v[j] - v[j - 1]);
  return tv;
}

}  // namespace

EntropySolution solve_godunov(const ScalarFlux& g, const Grid1D& grid, std::span<const double> v0, double T,
                              const GodunovParams& params) {
  if (v0.size() != grid.n_cells()) throw InputError("solve_godunov: data does not match the grid");
  if (!(T > 0.0)) throw InputError("solve_godunov: horizon must be positive");
  if (!(params.cfl > 0.0) || params.cfl > 0.5) throw ConfigError("solve_godunov: need 0 < cfl <= 1/2");
  if (params.time_samples == 0) throw ConfigError("solve_godunov: need at least one stored time");
  for (double v : v0) {
    if (!std::isfinite(v)) throw InputError("solve_godunov: data must be finite");
  }
  const auto [lo_it, hi_it] = std::minmax_element(v0.begin(), v0.end());
  const double speed = g.max_speed(*lo_it, *hi_it);
  const std::size_t n = grid.n_cells();
  const double dx = grid.dx();
  const double dt_max = speed > 0.0 ? params.cfl * dx / speed : params.cfl * dx;
  const std::size_t ns = params.time_samples;
  const double sample_dt = T / static_cast<double>(ns);
  const auto per_sample = static_cast<std::size_t>(std::max(1.0, std::ceil(sample_dt / dt_max - 1e-12)));
  const double dt = sample_dt / static_cast<double>(per_sample);
  const double lambda = dt / dx;

  GridSolution out;
  out.dt = dt;
  out.profiles.grid = grid;
  std::vector<double> v(v0.begin(), v0.end());
  const double tv0 = total_variation(v);
  out.profiles.times.push_back(0.0);
  out.profiles.values.push_back(v);
  std::vector<double> F(n + 1);
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t k = 0; k < per_sample; ++k, ++out.steps) {
      F[0] = g.g(v[0]);
      F[n] = g.g(v[n - 1]);
      for (std::size_t e = 1; e < n; ++e) F[e] = g.godunov(v[e - 1], v[e]);
      double check = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        v[j] -= lambda * (F[j + 1] - F[j]);
        check += v[j];
      }
      if (!std::isfinite(check)) throw NumericalBlowup("solve_godunov: non-finite state", out.steps);
      out.max_tv_excess = std::max(out.max_tv_excess, total_variation(v) - tv0);
    }
    out.profiles.times.push_back(T * static_cast<double>(s + 1) / static_cast<double>(ns));
    out.profiles.values.push_back(v);
  }
  return EntropySolution(g, T, tv0, std::move(out));
}

namespace {

// Entropy solution of the Riemann problem (uL, uR) at (t, x) for a convex
// piecewise-linear flux, as fronts ordered left to right.
void riemann_fronts(const PiecewiseLinearFlux& g, double uL, double uR, double t, double x,
                    std::vector<Front>& fronts, std::vector<std::size_t>& created) {
  auto push = [&](double a, double b, bool shock) {
    Front f;
    f.id = fronts.size();
    f.t_birth = t;
    f.x_birth = x;
    f.speed = (g(b) - g(a)) / (b - a);
    f.left = a;
    f.right = b;
    f.shock = shock;
    fronts.push_back(f);
    created.push_back(f.id);
  };
  if (uL == uR) return;
  if (uL > uR) {
    push(uL, uR, true);
    return;
  }
  double a = uL;
  for (double node : g.nodes()) {
    if (node > uL && node < uR) {
      push(a, node, false);
      a = node;
    }
  }
  push(a, uR, false);
}

}  // namespace

EntropySolution solve_front_tracking(const PiecewiseLinearFlux& g, const std::vector<double>& breaks,
                                     const std::vector<double>& values, double T,
                                     const FrontTrackingParams& params) {
  if (values.size() != breaks.size() + 1) throw InputError("solve_front_tracking: need one more value than breaks");
  if (!(T > 0.0)) throw InputError("solve_front_tracking: horizon must be positive");
  for (std::size_t k = 1; k < breaks.size(); ++k) {
    if (!(breaks[k] > breaks[k - 1])) throw InputError("solve_front_tracking: breaks must increase");
  }
  for (double v : values) {
    if (!(v >= g.nodes().front() && v <= g.nodes().back())) {
      throw InputError("solve_front_tracking: state outside the flux node range");
    }
  }

  WaveStructure w;
  w.far_left = values.front();
  w.far_right = values.back();
  std::vector<std::size_t> active;
  double tv0 = 0.0;
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    tv0 += std::abs(values[k + 1] - values[k]);
    riemann_fronts(g, values[k], values[k + 1], 0.0, breaks[k], w.fronts, active);
  }
  auto check_capacity = [&] {
    if (w.fronts.size() > params.max_fronts) {
      throw CapacityError("solve_front_tracking: more than " + std::to_string(params.max_fronts) + " fronts");
    }
  };
  check_capacity();

  double now = 0.0;
  while (active.size() > 1) {
    double tc = HUGE_VAL;
    std::size_t first = 0;
    for (std::size_t i = 0; i + 1 < active.size(); ++i) {
      const Front& a = w.fronts[active[i]];
      const Front& b = w.fronts[active[i + 1]];
      if (a.speed <= b.speed) continue;
      const double gap = std::max(0.0, b.position(now) - a.position(now));
      const double t = now + gap / (a.speed - b.speed);
      if (t < tc) {
        tc = t;
        first = i;
      }
    }
    if (!(tc < T)) break;
    const double xc = w.fronts[active[first]].position(tc);
    const double tol = 1e-11 * (1.0 + std::abs(xc));
    std::size_t lo = first;
    std::size_t hi = first + 1;
    while (lo > 0 && std::abs(w.fronts[active[lo - 1]].position(tc) - xc) <= tol) --lo;
    while (hi + 1 < active.size() && std::abs(w.fronts[active[hi + 1]].position(tc) - xc) <= tol) ++hi;
    const double uL = w.fronts[active[lo]].left;
    const double uR = w.fronts[active[hi]].right;
    for (std::size_t i = lo; i <= hi; ++i) w.fronts[active[i]].t_death = tc;
    std::vector<std::size_t> born;
    riemann_fronts(g, uL, uR, tc, xc, w.fronts, born);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(lo), active.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    active.insert(active.begin() + static_cast<std::ptrdiff_t>(lo), born.begin(), born.end());
    ++w.interactions;
    check_capacity();
    now = tc;
  }
  return EntropySolution(g.as_scalar_flux(), T, tv0, std::move(w), g);
}

namespace {

struct Tracer {
  std::vector<double> ts;
  std::vector<double> xs;
  bool truncated = false;

  void add(double t, double x) {
    if (!ts.empty() && t <= ts.back()) {
      xs.back() = x;
      return;
    }
    ts.push_back(t);
    xs.push_back(x);
  }
  // Moves along x(t) = x0 + c (t - t0) to t1, stopping at the window edge.
  bool advance(double t0, double x0, double c, double t1, double x_lo, double x_hi) {
    const double x1 = x0 + c * (t1 - t0);
    if (x1 < x_lo || x1 > x_hi) {
      const double edge = x1 < x_lo ? x_lo : x_hi;
      add(c != 0.0 ? t0 + (edge - x0) / c : t1, edge);
      truncated = true;
      return false;
    }
    add(t1, x1);
    return true;
  }
};

Characteristic wave_characteristic(const EntropySolution& sol, double t0, double x0, double T, double x_lo,
                                   double x_hi) {
  const auto& fronts = sol.waves().fronts;
  std::vector<double> events;
  for (const auto& f : fronts) {
    if (f.t_birth > t0 && f.t_birth < T) events.push_back(f.t_birth);
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  Tracer tr;
  tr.add(t0, x0);
  double t = t0;
  double x = x0;
  const Front* on = nullptr;
  double v = 0.0;

  auto locate = [&] {
    const double tol = 1e-9 * (1.0 + std::abs(x));
    const Front* slowest = nullptr;
    for (const auto& f : fronts) {
      if (!f.alive(t) || std::abs(f.position(t) - x) > tol) continue;
      if (!slowest || f.speed < slowest->speed) slowest = &f;
    }
    if (slowest && slowest->shock) {
      on = slowest;
    } else {
      on = nullptr;
      v = slowest ? slowest->left : sol.right_value(t, x);
    }
  };
  locate();

  const std::size_t max_events = 8 * (fronts.size() + events.size()) + 64;
  for (std::size_t guard = 0; t < T; ++guard) {
    if (guard > max_events) throw Error("min_forward_characteristic: event loop did not terminate");
    if (on) {
      const double t1 = std::min(on->t_death, T);
      if (!tr.advance(t, x, on->speed, t1, x_lo, x_hi)) break;
      x = on->position(t1);
      t = t1;
      if (t < T) locate();
      continue;
    }
    const double c = sol.char_speed(v);
    const double tol = 1e-9 * (1.0 + std::abs(x));
    double t_next = T;
    const Front* hit = nullptr;
    const auto next_event = std::upper_bound(events.begin(), events.end(), t);
    if (next_event != events.end() && *next_event < t_next) t_next = *next_event;
    for (const auto& f : fronts) {
      if (!f.alive(t)) continue;
      const double d = f.position(t) - x;
      bool right_side = d > 0.0;
      if (std::abs(d) <= tol) {
        if (f.left == v && f.right != v) {
          right_side = true;
        } else if (f.right == v) {
          right_side = false;
        } else {
          continue;
        }
      }
      double th = HUGE_VAL;
      if (right_side && f.speed < c) th = t + std::max(d, 0.0) / (c - f.speed);
      if (!right_side && f.speed > c) th = t + std::max(-d, 0.0) / (f.speed - c);
      if (th < t_next) {
        t_next = th;
        hit = &f;
      }
    }
    if (!tr.advance(t, x, c, t_next, x_lo, x_hi)) break;
    x += c * (t_next - t);
    t = t_next;
    if (hit) {
      x = hit->position(t);
      if (hit->shock || t >= hit->t_death) {
        locate();
      } else {
        v = hit->left == v ? hit->right : hit->left;
      }
    } else if (t < T) {
      const double tol2 = 1e-9 * (1.0 + std::abs(x));
      for (const auto& f : fronts) {
        if (f.alive(t) && std::abs(f.position(t) - x) <= tol2) {
          locate();
          break;
        }
      }
    }
  }
  return {PiecewiseLinearCurve(tr.ts, tr.xs), tr.truncated};
}

Characteristic grid_characteristic(const EntropySolution& sol, double t0, double x0, double T, double x_lo,
                                   double x_hi) {
  const auto& gs = sol.grid();
  const Grid1D& grid = gs.profiles.grid;
  x_lo = std::max(x_lo, grid.x_min());
  x_hi = std::min(x_hi, grid.x_max());
  Tracer tr;
  tr.add(t0, x0);
  double t = t0;
  double x = x0;
  while (t < T - 1e-12 * T) {
    const double t1 = std::min(T, t + gs.dt);
    const double vm = sol.left_value(t, x);
    const double vp = sol.right_value(t, x);
    const double c = sol.flux().dg(std::min(vm, vp));
    if (!tr.advance(t, x, c, t1, x_lo, x_hi)) break;
    x += c * (t1 - t);
    t = t1;
  }
  return {PiecewiseLinearCurve(tr.ts, tr.xs), tr.truncated};
}

}  // namespace

Characteristic min_forward_characteristic(const EntropySolution& sol, double t0, double x0, double T, double x_lo,
                                          double x_hi) {
  if (!(t0 >= 0.0) || !(T > t0) || T > sol.horizon() * (1.0 + 1e-12)) {
    throw InputError("min_forward_characteristic: need 0 <= t0 < T <= horizon");
  }
  if (sol.is_wave()) return wave_characteristic(sol, t0, x0, T, x_lo, x_hi);
  return grid_characteristic(sol, t0, x0, T, x_lo, x_hi);
}

bool OleinikReport::pass() const {
  return std::all_of(samples.begin(), samples.end(), [](const OleinikSample& s) { return s.pass; });
}

OleinikReport check_oleinik(const EntropySolution& sol, double lambda, const std::vector<double>& times) {
  if (!(lambda > 0.0)) throw InputError("check_oleinik: lambda must be positive");
  OleinikReport rep;
  rep.lambda = lambda;
  for (double t_req : times) {
    OleinikSample s;
    if (sol.is_wave()) {
      s.t = t_req;
      const double c = 1.0 / (lambda * s.t);
      const auto fronts = sol.alive_fronts(s.t);
      // Piece m lies between fronts m-1 and m; pieces 0 and n are unbounded.
      double run_min = HUGE_VAL;  // min over earlier pieces of v_i - c * (right end of piece i)
      double excess = 0.0;
      double v = sol.waves().far_left;
      for (const Front* f : fronts) {
        const double p = f->position(s.t);
        run_min = std::min(run_min, v - c * p);
        v = f->right;
        excess = std::max(excess, v - c * p - run_min);
      }
      s.max_excess = excess;
      s.slack = sol.pl_flux().max_node_spacing() + 1e-12;
    } else {
      const auto& pr = sol.grid().profiles;
      const std::size_t k = pr.nearest_time_index(t_req);
      s.t = pr.times[k];
      if (!(s.t > 0.0)) throw InputError("check_oleinik: sample times must be positive");
      const double dx = pr.grid.dx();
      const double c = dx / (lambda * s.t);
      const auto& v = pr.values[k];
      double run_min = HUGE_VAL;
      double excess = 0.0;
      for (std::size_t j = 0; j < v.size(); ++j) {
        const double q = v[j] - c * static_cast<double>(j);
        if (j > 0) excess = std::max(excess, q - run_min);
        run_min = std::min(run_min, q);
      }
      s.max_excess = excess;
      s.slack = 2.0 * dx / (lambda * s.t);
    }
    s.pass = s.max_excess <= s.slack;
    rep.samples.push_back(s);
  }
  return rep;
}

namespace {

struct Jump {
  double x;
  double size;
};

std::vector<Jump> jumps_at(const EntropySolution& sol, double t, double lo, double hi) {
  std::vector<Jump> out;
  if (sol.is_wave()) {
    const auto fronts = sol.alive_fronts(t);
    for (std::size_t i = 0; i < fronts.size();) {
      const double p = fronts[i]->position(t);
      const double left = fronts[i]->left;
      std::size_t j = i;
      while (j + 1 < fronts.size() && std::abs(fronts[j + 1]->position(t) - p) <= 1e-12 * (1.0 + std::abs(p))) ++j;
      const double right = fronts[j]->right;
      if (p > lo && p < hi && left != right) out.push_back({p, std::abs(right - left)});
      i = j + 1;
    }
    return out;
  }
  const auto& pr = sol.grid().profiles;
  const auto& v = pr.values[pr.nearest_time_index(t)];
  for (std::size_t e = 1; e < v.size(); ++e) {
    const double p = pr.grid.edge(e);
    const double d = std::abs(v[e] - v[e - 1]);
    if (p > lo && p < hi && d > 0.0) out.push_back({p, d});
  }
  return out;
}

// First time after t_from at which the curves come within tol.
std::optional<double> merge_time(const PiecewiseLinearCurve& a, const PiecewiseLinearCurve& b, double t_from,
                                 double tol) {
  std::vector<double> ts = a.times();
  ts.insert(ts.end(), b.times().begin(), b.times().end());
  std::sort(ts.begin(), ts.end());
  for (double t : ts) {
    if (t <= t_from) continue;
    if (std::abs(a(t) - b(t)) <= tol) return t;
  }
  return std::nullopt;
}

PiecewiseLinearCurve splice(const PiecewiseLinearCurve& before, const PiecewiseLinearCurve& after, double at) {
  std::vector<double> ts, xs;
  for (std::size_t k = 0; k < before.times().size() && before.times()[k] < at; ++k) {
    ts.push_back(before.times()[k]);
    xs.push_back(before.positions()[k]);
  }
  ts.push_back(at);
  xs.push_back(after(at));
  for (std::size_t k = 0; k < after.times().size(); ++k) {
    if (after.times()[k] > at) {
      ts.push_back(after.times()[k]);
      xs.push_back(after.positions()[k]);
    }
  }
  return {std::move(ts), std::move(xs)};
}

}  // namespace

Extraction extract_regulated(const EntropySolution& sol, double eps, const Rectangle& rect,
                             const ExtractParams& params) {
  if (sol.flux().convexity != ConvexityClass::C1) {
    throw UnsupportedClass("extract_regulated: only uniformly convex fluxes are supported, got class " +
                           to_string(sol.flux().convexity));
  }
  if (!(eps > 0.0)) throw InputError("extract_regulated: eps must be positive");
  if (!(rect.T > 0.0) || !(rect.x1 < rect.x2)) throw InputError("extract_regulated: degenerate rectangle");
  if (rect.T > sol.horizon() * (1.0 + 1e-12)) throw InputError("extract_regulated: rectangle beyond the horizon");
  const double T = rect.T;
  const double t1 = 0.5 * eps;
  if (!(t1 < T)) throw InputError("extract_regulated: eps/2 must be below the horizon");

  Extraction ex;
  ex.approximate = !sol.is_wave();
  double L = 0.0;
  double tol = 0.0;
  double x_lo = -HUGE_VAL;
  double x_hi = HUGE_VAL;
  if (sol.is_wave()) {
    const auto& nodes = sol.pl_flux().nodes();
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      L = std::max(L, std::abs((sol.pl_flux()(nodes[k + 1]) - sol.pl_flux()(nodes[k])) / (nodes[k + 1] - nodes[k])));
    }
    tol = 1e-9 * (1.0 + std::abs(rect.x1) + std::abs(rect.x2));
  } else {
    const auto& v0 = sol.grid().profiles.values.front();
    const auto [lo, hi] = std::minmax_element(v0.begin(), v0.end());
    L = sol.flux().max_speed(*lo, *hi);
    tol = sol.grid().profiles.grid.dx();
    x_lo = sol.grid().profiles.grid.x_min();
    x_hi = sol.grid().profiles.grid.x_max();
  }
  const double y_first = std::max(rect.x1 - L * T, x_lo);
  const double y_last = std::min(rect.x2 + L * T, x_hi);

  const double budget = eps * (1.0 - 1e-6);
  ex.points.push_back(y_first);
  // A jump that alone exhausts the budget becomes a point (the curve then
  // follows the shock). Otherwise the point goes inside the constant strip
  // before the jump that would exhaust it, so every jump lies strictly inside
  // one interval and stays there: a point placed on a contact discontinuity
  // would see its minimal characteristic leave the contact to its right.
  double acc = 0.0;
  double prev_x = y_first;
  for (const Jump& j : jumps_at(sol, t1, y_first, y_last)) {
    if (j.size >= budget) {
      ex.points.push_back(j.x);
      acc = 0.0;
    } else if (acc + j.size >= budget) {
      ex.points.push_back(0.5 * (prev_x + j.x));
      acc = j.size;
    } else {
      acc += j.size;
    }
    prev_x = j.x;
  }
  ex.points.push_back(y_last);
  const std::size_t N = ex.points.size() - 2;

  for (double y : ex.points) ex.characteristics.push_back(min_forward_characteristic(sol, t1, y, T));

  // Coincident characteristics stay together; splice to make that exact.
  std::vector<double> merges;
  for (std::size_t j = 1; j < N; ++j) {
    const auto& a = ex.characteristics[j].curve;
    auto& b = ex.characteristics[j + 1].curve;
    if (auto tm = merge_time(a, b, t1, tol)) {
      if (*tm < T) merges.push_back(*tm);
      b = splice(b, a, *tm);
    }
  }
  std::sort(merges.begin(), merges.end());
  std::vector<double> times{t1};
  for (double m : merges) {
    if (m - times.back() > 1e-9 * T) times.push_back(m);
  }
  if (times.size() - 1 > params.max_interactions) {
    throw CapacityError("extract_regulated: more than " + std::to_string(params.max_interactions) +
                        " interaction times");
  }
  ex.interaction_times = times;
  times.push_back(T);

  const double gap = N > 0 ? eps / (2.0 * static_cast<double>(N)) : 0.0;
  std::vector<Band> bands;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    Band band;
    band.a = times[i];
    band.b = times[i + 1] - gap;
    if (!(band.b > band.a)) continue;
    band.alphas.push_back(sol.right_value(band.a, ex.characteristics.front().curve(band.a)));
    for (std::size_t j = 1; j <= N; ++j) {
      const auto& c = ex.characteristics[j].curve;
      if (!band.curves.empty()) {
        const auto& last = band.curves.back();
        if (std::abs(c(band.a) - last(band.a)) <= tol && std::abs(c(band.b) - last(band.b)) <= tol) continue;
      }
      band.curves.push_back(c.restrict(band.a, band.b));
      band.alphas.push_back(sol.right_value(band.a, c(band.a)));
    }
    bands.push_back(std::move(band));
  }
  ex.field = RegulatedField(rect, std::move(bands), eps);
  return ex;
}

std::string fronts_csv(const WaveStructure& waves) {
  std::ostringstream out;
  out << "front_id,t_birth,t_death,x_birth,speed_segments,left_state,right_state\n";
  for (const auto& f : waves.fronts) {
    out << f.id << ',' << format_double(f.t_birth) << ',' << format_double(f.t_death) << ','
        << format_double(f.x_birth) << ',' << format_double(f.speed) << ',' << format_double(f.left) << ','
        << format_double(f.right) << '\n';
  }
  return out.str();
}

}  // namespace regflux
