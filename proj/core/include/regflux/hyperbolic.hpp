#pragma once

#include <cstddef>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regflux/curves.hpp"
#include "regflux/functions.hpp"
#include "regflux/grid.hpp"
#include "regflux/regulated.hpp"

namespace regflux {

enum class ConvexityClass { C1, C2, Other };

std::string to_string(ConvexityClass c);

/// Flux g(v) of the autonomous equation v_t + g(v)_x = 0 on [state_min, state_max].
struct ScalarFlux {
  std::string name;
  std::function<double(double)> g;
  std::function<double(double)> dg;
  std::function<double(double)> d2g;
  ConvexityClass convexity = ConvexityClass::Other;
  double inflection = std::numeric_limits<double>::quiet_NaN();  // C2 only
  double state_min = 0.0;
  double state_max = 1.0;
  std::vector<double> stationary;  // sign changes of g' on the state range

  /// Builds the flux and locates the stationary points. Throws AssumptionError
  /// when the sampled sign pattern of g'' contradicts the declared class.
  static ScalarFlux make(const ScalarFunction& f, ConvexityClass c, double state_min,
                         double state_max, double inflection = std::numeric_limits<double>::quiet_NaN());

  /// Godunov flux: min of g over [a, b] if a <= b, max over [b, a] otherwise.
  double godunov(double a, double b) const;
  /// max |g'| over [lo, hi].
  double max_speed(double lo, double hi) const;
  /// inf g'' over [lo, hi], sampled.
  double min_curvature(double lo, double hi) const;
};

/// Sampled check that the sign pattern of g'' matches the declared class.
bool verify_convexity_class(const ScalarFlux& g, std::size_t samples = 401);

/// Convex continuous piecewise-linear flux through (nodes[k], values[k]).
class PiecewiseLinearFlux {
 public:
  PiecewiseLinearFlux(std::vector<double> nodes, std::vector<double> values);
  /// Linear interpolant of `f` on a uniform node set covering [lo, hi].
  static PiecewiseLinearFlux interpolate(const ScalarFunction& f, double lo, double hi, std::size_t segments);

  double operator()(double v) const;
  /// Slope of the segment containing v; at a node, the mean of the two
  /// adjacent slopes (the characteristic speed of a constant state there).
  double speed(double v) const;
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }
  double max_node_spacing() const;
  /// The same flux as a ScalarFlux of class C1; g'' is the difference quotient
  /// of neighbouring segment slopes.
  ScalarFlux as_scalar_flux() const;

 private:
  std::size_t segment(double v) const;
  std::vector<double> nodes_;
  std::vector<double> values_;
};

/// A straight front of the exact wave structure.
struct Front {
  std::size_t id = 0;
  double t_birth = 0.0;
  double t_death = HUGE_VAL;
  double x_birth = 0.0;
  double speed = 0.0;
  double left = 0.0;
  double right = 0.0;
  bool shock = false;

  double position(double t) const { return x_birth + speed * (t - t_birth); }
  bool alive(double t) const { return t_birth <= t && t < t_death; }
};

struct WaveStructure {
  double far_left = 0.0;
  double far_right = 0.0;
  std::vector<Front> fronts;
  std::size_t interactions = 0;
};

struct GridSolution {
  TimeProfiles profiles;
  double dt = 0.0;            // time step of the scheme
  std::size_t steps = 0;
  double max_tv_excess = 0.0; // max over steps of TV(v^n) - TV(v0)
};

/// Entropy solution, either on a grid or as an exact front-tracking wave
/// structure.
class EntropySolution {
 public:
  EntropySolution(ScalarFlux flux, double horizon, double initial_tv, GridSolution grid);
  EntropySolution(ScalarFlux flux, double horizon, double initial_tv, WaveStructure waves,
                  PiecewiseLinearFlux pl_flux);

  bool is_wave() const { return waves_.has_value(); }
  const ScalarFlux& flux() const { return flux_; }
  double horizon() const { return horizon_; }
  double initial_tv() const { return initial_tv_; }
  const GridSolution& grid() const { return *grid_; }
  const WaveStructure& waves() const { return *waves_; }
  const PiecewiseLinearFlux& pl_flux() const { return *pl_flux_; }

  /// Characteristic speed of a constant state v.
  double char_speed(double v) const;
  /// v(t, x+) and v(t, x-).
  double right_value(double t, double x) const;
  double left_value(double t, double x) const;
  double operator()(double t, double x) const { return right_value(t, x); }
  /// Fronts alive at t ordered by position (ties by speed).
  std::vector<const Front*> alive_fronts(double t) const;
  double total_variation(double t) const;

 private:
  ScalarFlux flux_;
  double horizon_;
  double initial_tv_;
  std::optional<GridSolution> grid_;
  std::optional<WaveStructure> waves_;
  std::optional<PiecewiseLinearFlux> pl_flux_;
};

struct GodunovParams {
  double cfl = 0.5;
  std::size_t time_samples = 64;
};

/// Godunov scheme with transmissive boundaries. Throws ConfigError for cfl > 1/2.
EntropySolution solve_godunov(const ScalarFlux& g, const Grid1D& grid, std::span<const double> v0,
                              double T, const GodunovParams& params = {});

struct FrontTrackingParams {
  std::size_t max_fronts = 100000;
};

/// Exact front tracking for a convex piecewise-linear flux with piecewise
/// constant data: values[k] between breaks[k-1] and breaks[k].
EntropySolution solve_front_tracking(const PiecewiseLinearFlux& g, const std::vector<double>& breaks,
                                     const std::vector<double>& values, double T,
                                     const FrontTrackingParams& params = {});

struct Characteristic {
  PiecewiseLinearCurve curve;
  bool truncated = false;
};

/// Minimal forward generalized characteristic from (t0, x0) up to T. The
/// wave form is traced exactly; the grid form by an Euler polygon with the
/// scheme's time step and speed g'(min(v-, v+)). Leaving [x_lo, x_hi] stops
/// the curve and sets `truncated` (the grid form always uses the grid).
Characteristic min_forward_characteristic(const EntropySolution& sol, double t0, double x0, double T,
                                          double x_lo = -HUGE_VAL, double x_hi = HUGE_VAL);

struct OleinikSample {
  double t = 0.0;
  double max_excess = 0.0;  // max over x < y of v(y) - v(x) - (y - x)/(lambda t)
  double slack = 0.0;
  bool pass = false;
};

struct OleinikReport {
  double lambda = 0.0;
  std::vector<OleinikSample> samples;
  bool pass() const;
};

/// Grid form: exact maximum over cell pairs at the stored time nearest each t,
/// slack 2 dx/(lambda t). Wave form: maximum over the piecewise-constant
/// profile, slack equal to the node spacing of the piecewise-linear flux.
OleinikReport check_oleinik(const EntropySolution& sol, double lambda, const std::vector<double>& times);

struct ExtractParams {
  std::size_t max_interactions = 10000;
};

struct Extraction {
  RegulatedField field;
  bool approximate = false;          // grid form
  std::vector<double> points;        // y_0 .. y_{N+1}
  std::vector<double> interaction_times;
  std::vector<Characteristic> characteristics;  // gamma_0 .. gamma_{N+1}
};

/// Regulated decomposition of a C1 entropy solution on [0,T] x [x1,x2] with
/// budget eps. Throws UnsupportedClass for other fluxes and CapacityError when
/// more than max_interactions merge times occur.
Extraction extract_regulated(const EntropySolution& sol, double eps, const Rectangle& rect,
                             const ExtractParams& params = {});

/// `front_id,t_birth,t_death,x_birth,speed_segments,left_state,right_state`
std::string fronts_csv(const WaveStructure& waves);

}  // namespace regflux
