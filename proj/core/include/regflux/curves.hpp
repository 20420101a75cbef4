#pragma once

#include <span>
#include <vector>

namespace regflux {

/// Piecewise-constant function of time. Value v[k] holds on [b[k], b[k+1]);
/// outside the breakpoint range the nearest value is used.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);

  static StepFunction constant(double value);

  double operator()(double t) const;
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// Lipschitz curve t -> x stored as the linear interpolant of samples.
/// Evaluation outside the sampled time range holds the end values.
class PiecewiseLinearCurve {
 public:
  PiecewiseLinearCurve() = default;
  PiecewiseLinearCurve(std::vector<double> times, std::vector<double> positions);

  /// Curve x(t) = x0 + speed * t sampled at t0 and t1.
  static PiecewiseLinearCurve line(double t0, double t1, double x0, double speed);

  double operator()(double t) const;
  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& positions() const { return positions_; }

  /// Slopes of the interpolant; exactly a step function.
  StepFunction slopes() const;
  double lipschitz() const;

  /// Restriction to [a, b], with interpolated end samples.
  PiecewiseLinearCurve restrict(double a, double b) const;

 private:
  std::vector<double> times_;
  std::vector<double> positions_;
};

}  // namespace regflux
