#include "regflux/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "regflux/error.hpp"

namespace regflux {

namespace {

void check_common(const Grid1D& window, std::span<const double> u0, double T) {
  if (u0.size() != window.n_cells()) throw InputError("initial data does not match the grid");
  if (!(T > 0.0) || !std::isfinite(T)) throw InputError("horizon T must be positive");
  for (double v : u0) {
    if (!std::isfinite(v)) throw InputError("initial data must be finite");
  }
}

double dissipation_rate(std::span<const double> u, double dx, double eps) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < u.size(); ++j) {
    const double d = u[j + 1] - u[j];
    s += d * d;
  }
  return eps * s / dx;
}

// Theta-scheme step for u_t = (k u_x)_x with face coefficients k, Neumann ends.
// mu[e] = k_e dt / dx^2 for the face between cells e-1 and e, e = 1..n-1.
class FaceDiffusion {
 public:
  FaceDiffusion(std::size_t n, double theta) : theta_(theta), cp_(n), rhs_(n) {}

  void apply(const std::vector<double>& mu, const std::vector<double>& in, std::vector<double>& out) {
    const std::size_t n = in.size();
    auto m = [&](std::size_t e) { return (e == 0 || e == n) ? 0.0 : mu[e]; };
    const double ex = 1.0 - theta_;
    for (std::size_t i = 0; i < n; ++i) {
      const double right = i + 1 < n ? m(i + 1) * (in[i + 1] - in[i]) : 0.0;
      const double left = i > 0 ? m(i) * (in[i] - in[i - 1]) : 0.0;
      rhs_[i] = in[i] + ex * (right - left);
    }
    // Thomas: sub/super diagonals -theta mu, diagonal 1 + theta (mu_left + mu_right).
    double denom = 1.0 + theta_ * m(1);
    cp_[0] = -theta_ * m(1) / denom;
    rhs_[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
      const double a = -theta_ * m(i);
      denom = 1.0 + theta_ * (m(i) + m(i + 1)) - a * cp_[i - 1];
      cp_[i] = -theta_ * m(i + 1) / denom;
      rhs_[i] = (rhs_[i] - a * rhs_[i - 1]) / denom;
    }
    out[n - 1] = rhs_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) out[i] = rhs_[i] - cp_[i] * out[i + 1];
  }

 private:
  double theta_;
  std::vector<double> cp_;
  std::vector<double> rhs_;
};

DiagnosticRow make_row(double t, std::span<const double> u, double dx, double eps, std::size_t iters) {
  return {t, mass(u, dx), dissipation_rate(u, dx, eps), iters};
}

}  // namespace

double ViscousSolution::mass_drift() const {
  double drift = 0.0;
  if (diagnostics.empty()) return drift;
  for (const auto& r : diagnostics) drift = std::max(drift, std::abs(r.mass - diagnostics.front().mass));
  return drift;
}

double mass_balance_drift(const ViscousSolution& sol, const FluxField& flux) {
  const auto& pr = sol.profiles;
  if (pr.times.empty()) return 0.0;
  const double x0 = pr.grid.center(0);
  const double x1 = pr.grid.center(pr.grid.n_cells() - 1);
  auto inflow = [&](std::size_t k) { return flux(pr.times[k], x0, pr.values[k].front()) - flux(pr.times[k], x1, pr.values[k].back()); };
  const double m0 = mass(pr.values[0], pr.grid.dx());
  double through = 0.0;
  double drift = 0.0;
  for (std::size_t k = 1; k < pr.times.size(); ++k) {
    through += 0.5 * (pr.times[k] - pr.times[k - 1]) * (inflow(k - 1) + inflow(k));
    drift = std::max(drift, std::abs(mass(pr.values[k], pr.grid.dx()) - m0 - through));
  }
  return drift;
}

double default_pad(double lipschitz, double eps, double T) {
  return lipschitz * T + 10.0 * std::sqrt(std::max(eps, 0.0) * T);
}

std::vector<double> extend_to_padded(const Grid1D& window, std::span<const double> u0, double pad) {
  const std::size_t k = window.pad_cells(pad);
  std::vector<double> u(window.n_cells() + 2 * k);
  std::fill(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(k), u0.front());
  std::copy(u0.begin(), u0.end(), u.begin() + static_cast<std::ptrdiff_t>(k));
  std::fill(u.end() - static_cast<std::ptrdiff_t>(k), u.end(), u0.back());
  return u;
}

double diffusion_theta(double mu) {
  // The explicit half of the theta-scheme is monotone iff 2 (1 - theta) mu <= 1.
  if (mu <= 1.0) return 0.5;
  return 1.0 - 0.5 / mu;
}

ViscousSolution solve_fv(const FluxField& flux, const Grid1D& window, std::span<const double> u0,
                         double eps, double T, const FvParams& params) {
  check_common(window, u0, T);
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw InputError("solve_fv: eps must be >= 0");
  if (!(params.cfl > 0.0)) throw ConfigError("solve_fv: cfl must be positive");
  if (params.cfl > 0.5) throw ConfigError("solve_fv: cfl > 1/2 breaks monotonicity of the explicit step");
  if (params.time_samples == 0) throw ConfigError("solve_fv: need at least one stored time");

  if (params.speed_bound && *params.speed_bound < flux.lipschitz()) {
    throw ConfigError("solve_fv: speed_bound below the flux Lipschitz constant");
  }
  const double L = params.speed_bound.value_or(flux.lipschitz());
  const double pad = params.pad.value_or(default_pad(L, eps, T));
  const Grid1D grid = window.padded(pad);
  std::vector<double> u = extend_to_padded(window, u0, pad);
  const std::size_t n = grid.n_cells();
  const double dx = grid.dx();
  const auto xc = grid.centers();

  const double dt_max = L > 0.0 ? params.cfl * dx / L : params.cfl * dx;
  const std::size_t ns = params.time_samples;
  const double sample_dt = T / static_cast<double>(ns);
  const auto per_sample = static_cast<std::size_t>(std::max(1.0, std::ceil(sample_dt / dt_max - 1e-12)));
  const double dt = sample_dt / static_cast<double>(per_sample);
  const double lambda = dt / dx;
  const double mu = eps * dt / (dx * dx);
  FaceDiffusion diffusion(n, diffusion_theta(mu));
  std::vector<double> face_mu(n + 1, mu);

  ViscousSolution sol;
  sol.window = window;
  sol.epsilon = eps;
  sol.lipschitz = L;
  sol.profiles.grid = grid;
  sol.initial_l1 = l1_norm(u, dx);
  sol.profiles.times.push_back(0.0);
  sol.profiles.values.push_back(u);
  sol.diagnostics.push_back(make_row(0.0, u, dx, eps, 0));

  std::vector<double> fc(n), ac(n), F(n + 1), ustar(n);
  std::size_t step = 0;
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t k = 0; k < per_sample; ++k, ++step) {
      const double t = static_cast<double>(step) * dt;
      for (std::size_t j = 0; j < n; ++j) {
        fc[j] = flux(t, xc[j], u[j]);
        ac[j] = std::abs(flux.d_omega(t, xc[j], u[j]));
      }
      F[0] = fc[0];
      F[n] = fc[n - 1];
      for (std::size_t e = 1; e < n; ++e) {
        const double a = std::max(ac[e - 1], ac[e]);
        F[e] = 0.5 * (fc[e - 1] + fc[e]) - 0.5 * a * (u[e] - u[e - 1]);
        if (params.viscosity_correction) {
          // Leading-order viscosity of the explicit step, taken out of eps.
          const double nu = 0.5 * a * dx * std::max(0.0, 1.0 - lambda * a);
          face_mu[e] = std::max(0.0, eps - nu) * dt / (dx * dx);
        }
      }
      double check = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        ustar[j] = u[j] - lambda * (F[j + 1] - F[j]);
        check += ustar[j];
      }
      if (!std::isfinite(check)) {
        throw NumericalBlowup("solve_fv: non-finite state at step " + std::to_string(step), step);
      }
      if (eps > 0.0) {
        diffusion.apply(face_mu, ustar, u);
      } else {
        u.swap(ustar);
      }
    }
    const double t = T * static_cast<double>(s + 1) / static_cast<double>(ns);
    sol.profiles.times.push_back(t);
    sol.profiles.values.push_back(u);
    sol.diagnostics.push_back(make_row(t, u, dx, eps, 0));
  }
  sol.steps = step;
  return sol;
}

double contraction_block(double eps, double lipschitz) {
  if (lipschitz <= 0.0) return HUGE_VAL;
  return std::numbers::pi * eps / (16.0 * lipschitz * lipschitz);
}

double picard_ratio_bound(double eps, double lipschitz, double h) {
  return 2.0 * lipschitz * std::sqrt(h) / std::sqrt(std::numbers::pi * eps);
}

namespace {

// Integral of the heat kernel G^eps(s, z) over s in [0, tau].
double heat_time_integral(double tau, double z, double eps) {
  if (tau <= 0.0) return 0.0;
  const double az = std::abs(z);
  return std::sqrt(tau / (std::numbers::pi * eps)) * std::exp(-z * z / (4.0 * eps * tau)) -
         az / (2.0 * eps) * std::erfc(az / std::sqrt(4.0 * eps * tau));
}

// Convolution weights for one block. With u piecewise constant on cells, a
// jump d at edge j (between cells j and j+1) contributes d * table[i - j + W]
// to cell i, for offsets i - j in [-W, W + 1].
struct BlockKernels {
  double h = -1.0;
  std::size_t width = 0;
  std::vector<std::vector<double>> data;   // heat semigroup at m ds, m = 1..S
  std::vector<std::vector<double>> flux;   // G_x integrated over ((d-1) ds, d ds], d = 1..S

  void build(double h_, double eps, double dx, std::size_t S, double radius_factor, std::size_t n) {
    h = h_;
    const double ds = h / static_cast<double>(S);
    const double radius = radius_factor * std::sqrt(eps * h);
    width = std::min<std::size_t>(static_cast<std::size_t>(std::ceil(radius / dx)) + 1, n);
    const std::size_t len = 2 * width + 2;
    data.assign(S + 1, std::vector<double>(len, 0.0));
    flux.assign(S + 1, std::vector<double>(len, 0.0));
    for (std::size_t idx = 0; idx < len; ++idx) {
      const double o = static_cast<double>(idx) - static_cast<double>(width);
      const double z = (o - 0.5) * dx;
      for (std::size_t m = 1; m <= S; ++m) {
        const double tau = static_cast<double>(m) * ds;
        data[m][idx] = 0.5 * std::erfc(-z / std::sqrt(4.0 * eps * tau));
        flux[m][idx] = heat_time_integral(tau, z, eps) -
                       heat_time_integral(static_cast<double>(m - 1) * ds, z, eps);
      }
    }
  }
};

// out[i] += sum_j jumps[j] * table[i - j + W]
void scatter(const std::vector<double>& jumps, const std::vector<double>& table, std::size_t W,
             double sign, std::vector<double>& out) {
  const std::size_t n = out.size();
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double d = jumps[j];
    if (d == 0.0) continue;
    const std::size_t lo = j >= W ? j - W : 0;
    const std::size_t hi = std::min(n - 1, j + W + 1);
    const double sd = sign * d;
    const double* tab = table.data() + (lo + W - j);
    for (std::size_t i = lo; i <= hi; ++i) out[i] += sd * tab[i - lo];
  }
}

}  // namespace

ViscousSolution solve_mild(const FluxField& flux, const Grid1D& window, std::span<const double> u0,
                           double eps, double T, const MildParams& params) {
  check_common(window, u0, T);
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("solve_mild: eps must be positive");
  if (params.sub_steps == 0 || params.time_samples == 0 || params.max_iters == 0) {
    throw ConfigError("solve_mild: sub_steps, time_samples and max_iters must be positive");
  }
  if (!(params.block_fraction > 0.0 && params.block_fraction <= 1.0)) {
    throw ConfigError("solve_mild: block_fraction must lie in (0, 1]");
  }

  const double L = flux.lipschitz();
  const double pad = params.pad.value_or(default_pad(L, eps, T));
  const Grid1D grid = window.padded(pad);
  std::vector<double> u = extend_to_padded(window, u0, pad);
  const std::size_t n = grid.n_cells();
  const double dx = grid.dx();
  const auto xc = grid.centers();
  const std::size_t S = params.sub_steps;

  ViscousSolution sol;
  sol.window = window;
  sol.epsilon = eps;
  sol.lipschitz = L;
  sol.profiles.grid = grid;
  sol.initial_l1 = l1_norm(u, dx);
  const double tol = params.picard_tol.value_or(std::max(1e-10 * sol.initial_l1, 1e-300));
  const double ratio_floor = 1e-13 * std::max(sol.initial_l1, 1e-300);
  sol.profiles.times.push_back(0.0);
  sol.profiles.values.push_back(u);
  sol.diagnostics.push_back(make_row(0.0, u, dx, eps, 0));

  const double h_max = params.block_fraction * contraction_block(eps, L);
  BlockKernels kernels;
  std::vector<std::vector<double>> base(S + 1, std::vector<double>(n));
  std::vector<std::vector<double>> iter(S + 1, std::vector<double>(n));
  std::vector<std::vector<double>> next(S + 1, std::vector<double>(n));
  std::vector<std::vector<double>> fvals(S + 1, std::vector<double>(n));
  std::vector<std::vector<double>> fjumps(S, std::vector<double>(n - 1));
  std::vector<double> du(n - 1);

  double t = 0.0;
  for (std::size_t s = 1; s <= params.time_samples; ++s) {
    const double t_s = T * static_cast<double>(s) / static_cast<double>(params.time_samples);
    std::size_t iters_since_sample = 0;
    while (t_s - t > 1e-14 * T) {
      double h = std::min(h_max, t_s - t);
      if (t_s - t - h < 1e-9 * h) h = t_s - t;
      if (h != kernels.h) kernels.build(h, eps, dx, S, params.quad_radius_factor, n);
      const std::size_t W = kernels.width;
      const double ds = h / static_cast<double>(S);

      for (std::size_t j = 0; j + 1 < n; ++j) du[j] = u[j + 1] - u[j];
      for (std::size_t m = 1; m <= S; ++m) {
        for (std::size_t i = 0; i < n; ++i) base[m][i] = u[i > W + 1 ? i - W - 1 : 0];
        scatter(du, kernels.data[m], W, 1.0, base[m]);
      }
      for (std::size_t m = 0; m <= S; ++m) iter[m] = u;
      for (std::size_t j = 0; j < n; ++j) fvals[0][j] = flux(t, xc[j], u[j]);
      next[0] = u;

      double prev = -1.0;
      double block_ratio = 0.0;
      double diff = HUGE_VAL;
      std::size_t it = 0;
      while (true) {
        for (std::size_t k = 1; k <= S; ++k) {
          const double tk = t + static_cast<double>(k) * ds;
          for (std::size_t j = 0; j < n; ++j) fvals[k][j] = flux(tk, xc[j], iter[k][j]);
        }
        for (std::size_t k = 0; k < S; ++k) {
          for (std::size_t j = 0; j + 1 < n; ++j) {
            fjumps[k][j] = 0.5 * ((fvals[k][j + 1] + fvals[k + 1][j + 1]) - (fvals[k][j] + fvals[k + 1][j]));
          }
        }
        diff = 0.0;
        for (std::size_t m = 1; m <= S; ++m) {
          next[m] = base[m];
          for (std::size_t k = 0; k < m; ++k) scatter(fjumps[k], kernels.flux[m - k], W, -1.0, next[m]);
          double dm = 0.0;
          for (std::size_t i = 0; i < n; ++i) dm += std::abs(next[m][i] - iter[m][i]);
          diff = std::max(diff, dm * dx);
        }
        if (!std::isfinite(diff)) {
          throw NumericalBlowup("solve_mild: non-finite iterate in block " + std::to_string(sol.steps),
                                sol.steps);
        }
        ++it;
        if (prev > ratio_floor) block_ratio = std::max(block_ratio, diff / prev);
        prev = diff;
        iter.swap(next);
        if (diff < tol) break;
        if (it >= params.max_iters) {
          throw ConvergenceError("solve_mild: Picard iteration did not converge in " +
                                     std::to_string(it) + " iterations",
                                 block_ratio);
        }
      }
      u = iter[S];
      t += h;
      ++sol.steps;
      iters_since_sample += it;
      sol.block_ratios.push_back(block_ratio);
      sol.block_iterations.push_back(it);
      sol.block_lengths.push_back(h);
    }
    t = t_s;
    sol.profiles.times.push_back(t_s);
    sol.profiles.values.push_back(u);
    sol.diagnostics.push_back(make_row(t_s, u, dx, eps, iters_since_sample));
  }
  return sol;
}

}  // namespace regflux
