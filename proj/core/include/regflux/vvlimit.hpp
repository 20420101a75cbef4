#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regflux/flux_model.hpp"
#include "regflux/grid.hpp"
#include "regflux/parabolic.hpp"

namespace regflux {

/// U(x_j) = sum_{k <= j} u_k dx, i.e. U at the right edge of every cell.
std::vector<double> integrate_profile(std::span<const double> u, double dx);

struct IntegratedProfile {
  Grid1D grid;
  std::vector<double> times;
  std::vector<std::vector<double>> values;
};

IntegratedProfile integrate_profiles(const TimeProfiles& profiles);

enum class CauchyStatus { Pass, Fail, Indeterminate };
std::string to_string(CauchyStatus s);

struct SweepParams {
  double cells_per_eps = 8.0;  // dx <= eps / cells_per_eps
  double cfl = 0.5;
  std::size_t time_samples = 64;
  double cauchy_ratio = 0.8;
  std::size_t jobs = 0;        // 0: hardware concurrency
  std::optional<double> pad;   // default from the largest eps
  bool keep_runs = true;
};

struct EpsSequenceReport {
  std::vector<double> eps_schedule;
  std::vector<std::vector<double>> pairwise_gaps;  // sup_{t,x} |U^i - U^j|
  std::vector<double> consecutive_gaps;
  std::vector<double> ratios;                      // consecutive_gaps[k+1] / consecutive_gaps[k]
  CauchyStatus status = CauchyStatus::Indeterminate;
  Grid1D lattice;                                  // common coarse evaluation lattice
  std::vector<double> times;
  std::vector<ViscousSolution> runs;               // in schedule order, when kept
  ViscousSolution limit_estimate;                  // smallest eps
};

/// Solves u_t + f_x = eps u_xx with solve_fv for every eps of a strictly
/// decreasing schedule on nested grids sharing one padded domain, and
/// compares integrated profiles on the coarsest grid. Members run
/// concurrently; a failure is rethrown as SweepError naming its eps.
EpsSequenceReport eps_sweep(const FluxField& flux, const Profile& u0, double x_min, double x_max,
                            const std::vector<double>& schedule, double T, const SweepParams& params = {});

/// Status from the last three consecutive gaps: each strictly smaller than
/// the previous with ratio <= max_ratio.
CauchyStatus cauchy_status(const std::vector<double>& consecutive_gaps, double max_ratio);

struct ComparisonReport {
  double worst_margin = HUGE_VAL;  // min of rhs - lhs over samples
  double worst_time = 0.0;
  double worst_x = 0.0;
  bool pass = false;
};

/// U(t,x) <= U#(t,x) + eta_bar + int_0^t eta + slack at every stored sample.
ComparisonReport check_integrated_comparison(const ViscousSolution& run, const ViscousSolution& run_sharp,
                                             const std::function<double(double)>& eta, double eta_bar,
                                             double slack = 1e-10);

/// ||u0||_1 * int_{delta0/sqrt(tau eps)}^inf G(1,x) dx with G(1,x) = exp(-x^2/4)/sqrt(4 pi).
double tail_mass(double l1, double tau, double eps, double delta0);

struct TailReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double bound = 0.0;  // the erfc term
  double margin = 0.0; // rhs - lhs
  bool pass = false;
};

/// int_{-inf}^{x0 - delta0 - L(t - t0)} u(t) <= int_{-inf}^{x0} u(t0) + tail_mass.
TailReport check_tail_bound(const ViscousSolution& run, double t0, double x0, double delta0, double t,
                            double slack = 1e-12);

/// |int_{-inf}^{-L t - xi} (u - u_hat)(t)| <= 4 ||u0||_1 int_{xi/sqrt(t eps)}^inf G(1,y) dy.
TailReport check_finite_speed(const ViscousSolution& run, const ViscousSolution& run_hat, double xi, double t,
                              double slack = 1e-12);

/// Integral of a cell profile over (-inf, x], exact for piecewise-constant cells.
double mass_left_of(const Grid1D& grid, std::span<const double> u, double x);

struct EntropyPair {
  std::string name;
  std::function<double(double)> eta;
  std::function<double(double)> d_eta;
  std::function<double(double)> d2_eta;
};

namespace entropies {
EntropyPair identity();
EntropyPair half_square();
/// |w - k|, smoothed as sqrt((w - k)^2 + delta^2).
EntropyPair smoothed_kruzkov(double k, double delta);
}  // namespace entropies

/// q(t,x,w) = int_0^w eta'(s) f_w(t,x,s) ds by adaptive Gauss-Kronrod.
double entropy_flux(const EntropyPair& pair, const FluxField& flux, double t, double x, double w);

/// (v - w) int_w^v f_w^2 - (f(v) - f(w))^2.
double jensen_I(const FluxField& flux, double t, double x, double v, double w);

struct SpaceTimeWindow {
  double t0 = 0.0;
  double t1 = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
};

/// eps * sum ((u_{j+1} - u_j)/dx)^2 dx dt over the window, trapezoid in time
/// over stored samples, differences whose two cell centres lie in [x1, x2].
double entropy_dissipation(const ViscousSolution& run, const SpaceTimeWindow& window);

/// phi(t,x) = b((t - tc)/tr) b((x - xc)/xr), b(s) = exp(1 - 1/(1 - s^2)).
struct TestFunction {
  double tc = 0.0;
  double tr = 1.0;
  double xc = 0.0;
  double xr = 1.0;
  double operator()(double t, double x) const;
  double dt(double t, double x) const;
  double dx(double t, double x) const;
};

/// R(phi) = int int (u phi_t + f(t,x,u) phi_x) dx dt + int u(0) phi(0) dx,
/// midpoint in x over cells, trapezoid in t over stored times. The support
/// must lie inside the grid and end before the last stored time.
std::vector<double> weak_residual(const TimeProfiles& u, const FluxField& flux,
                                  const std::vector<TestFunction>& tests);

/// Five bumps spread over [x_min, x_max] x [0, T].
std::vector<TestFunction> test_function_catalog(double x_min, double x_max, double T);

/// L1 distance at the last stored time between `run` and `frame_run`
/// translated by speed * t (cell averages of the shift, by interpolating the
/// integrated profile).
double galilean_consistency(const ViscousSolution& run, const ViscousSolution& frame_run, double speed);

}  // namespace regflux
