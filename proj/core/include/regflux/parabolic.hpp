#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "regflux/flux_model.hpp"
#include "regflux/grid.hpp"

namespace regflux {

struct DiagnosticRow {
  double t = 0.0;
  double mass = 0.0;
  double dissipation = 0.0;   // eps * sum ((u_{j+1}-u_j)/dx)^2 dx at time t
  std::size_t picard_iters = 0;
};

/// Viscous solution u^eps on the computational (padded) grid at the stored times.
struct ViscousSolution {
  TimeProfiles profiles;
  Grid1D window;               // the requested grid, before padding
  double epsilon = 0.0;
  double lipschitz = 0.0;      // L of the flux that produced it
  double initial_l1 = 0.0;
  std::size_t steps = 0;       // FV time steps or mild blocks
  std::vector<DiagnosticRow> diagnostics;
  std::vector<double> block_ratios;         // mild solver: measured Picard ratio per block
  std::vector<std::size_t> block_iterations;
  std::vector<double> block_lengths;

  const Grid1D& grid() const { return profiles.grid; }
  const std::vector<double>& times() const { return profiles.times; }
  const std::vector<double>& at(std::size_t k) const { return profiles.values[k]; }
  /// Largest |mass(t) - mass(0)| over the stored times.
  double mass_drift() const;
};

/// Largest |mass(t) - mass(0) - boundary inflow up to t| over the stored
/// times, the inflow being f at the two end cells, trapezoid in time. Equals
/// mass_drift() for data that vanish at both ends.
double mass_balance_drift(const ViscousSolution& sol, const FluxField& flux);

/// Pad added on both sides: L T + 10 sqrt(eps T).
double default_pad(double lipschitz, double eps, double T);

/// Extends `u0` given on `window` to window.padded(pad) by constant extension.
std::vector<double> extend_to_padded(const Grid1D& window, std::span<const double> u0, double pad);

struct FvParams {
  double cfl = 0.5;
  std::size_t time_samples = 64;
  std::optional<double> pad;  // default_pad() when unset; 0 disables padding
  // Speed used for the time step and default pad instead of the flux's L.
  // Runs that are compared cell by cell should share it, so they share dt.
  std::optional<double> speed_bound;
  // Implicit step uses max(0, eps - nu) per face, nu = a dx (1 - lambda a) / 2
  // being the leading viscosity of the explicit step.
  bool viscosity_correction = true;
};

/// Conservative IMEX finite volume solve of u_t + f(t,x,u)_x = eps u_xx:
/// explicit local Lax-Friedrichs step followed by an implicit theta-scheme
/// diffusion step (Crank-Nicolson when it is monotone).
ViscousSolution solve_fv(const FluxField& flux, const Grid1D& window, std::span<const double> u0,
                         double eps, double T, const FvParams& params = {});

/// Theta used for diffusion number mu = eps dt / dx^2.
double diffusion_theta(double mu);

struct MildParams {
  double quad_radius_factor = 10.0;
  std::optional<double> picard_tol;  // default 1e-10 * ||u0||_1
  std::size_t max_iters = 60;
  std::size_t sub_steps = 4;
  double block_fraction = 0.5;       // block length = fraction * pi eps / (16 L^2)
  std::size_t time_samples = 64;
  std::optional<double> pad;
};

/// Contraction block length pi eps / (16 L^2); infinite for L = 0.
double contraction_block(double eps, double lipschitz);
/// Bound 2 L sqrt(h) / sqrt(pi eps) on the Picard map over a block of length h.
double picard_ratio_bound(double eps, double lipschitz, double h);

/// Mild solution by Picard iteration of the Gauss-kernel fixed-point map,
/// block by block in time.
ViscousSolution solve_mild(const FluxField& flux, const Grid1D& window, std::span<const double> u0,
                           double eps, double T, const MildParams& params = {});

}  // namespace regflux
