#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regflux/functions.hpp"
#include "regflux/hyperbolic.hpp"
#include "regflux/regulated.hpp"
#include "regflux/vvlimit.hpp"

namespace regflux {

/// u_t + F(v, u)_x = eps u_xx driven by the entropy solution of v_t + g(v)_x = 0.
struct TriangularScenario {
  ScalarFunction g = catalog::burgers();
  ConvexityClass g_class = ConvexityClass::C1;
  double v_min = 0.0;
  double v_max = 1.0;
  double inflection = std::numeric_limits<double>::quiet_NaN();
  TwoArgFunction F = catalog::one_plus_alpha_concave();

  // v0: piecewise constant (v_values.size() == v_breaks.size() + 1) or, when
  // v_profile is set, a general profile solved by Godunov.
  std::vector<double> v_breaks;
  std::vector<double> v_values;
  std::optional<Profile> v_profile;

  Profile u0;
  double x_min = -2.0;
  double x_max = 2.0;
  std::vector<double> schedule;
  double T = 1.0;
  double eps_reg = 0.25;

  std::size_t pl_segments = 64;       // front tracking flux resolution
  std::size_t godunov_cells = 4000;
  std::size_t godunov_samples = 512;
  std::size_t certificate_samples = 200;
  bool refine_residuals = true;       // one extra member at eps_min/2, dx/2
  SweepParams sweep;
};

struct TriangularResult {
  EntropySolution v;
  std::optional<Extraction> extraction;
  std::optional<FieldValidation> validation;
  std::optional<SupDistanceReport> certificate;
  EpsSequenceReport sweep;
  std::vector<TestFunction> tests;
  std::vector<double> residuals;          // limit member
  std::vector<double> residuals_refined;  // extra refined member, when requested
  std::string membership;                 // "C1", "C2 (extraction not implemented)" or "unknown"
  std::vector<std::string> warnings;
};

/// Coefficient (t, x) -> v(t, x-) of an entropy solution, with a per-thread
/// cache of the wave structure at the last queried time.
CompositeFlux::Coefficient coefficient_from(const EntropySolution& v);

/// Solves v first, extracts its regulated decomposition as a certificate when
/// g is C1, then sweeps u with F(v, .) using the solution v itself.
TriangularResult solve_triangular(const TriangularScenario& sc);

}  // namespace regflux
