#include "regflux/curves.hpp"

#include <algorithm>
#include <cmath>

#include "regflux/error.hpp"

namespace regflux {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty() || breakpoints_.size() != values_.size() + 1) {
    throw InputError("StepFunction: need n+1 breakpoints for n values");
  }
  for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k] < breakpoints_[k + 1])) {
      throw InputError("StepFunction: breakpoints must be strictly increasing");
    }
  }
}

StepFunction StepFunction::constant(double value) {
  return StepFunction({-HUGE_VAL, HUGE_VAL}, {value});
}

double StepFunction::operator()(double t) const {
  if (values_.empty()) return 0.0;
  auto it = std::upper_bound(breakpoints_.begin() + 1, breakpoints_.end() - 1, t);
  auto k = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return values_[k];
}

PiecewiseLinearCurve::PiecewiseLinearCurve(std::vector<double> times,
                                           std::vector<double> positions)
    : times_(std::move(times)), positions_(std::move(positions)) {
  if (times_.empty() || times_.size() != positions_.size()) {
    throw InputError("PiecewiseLinearCurve: times and positions must be non-empty and equal length");
  }
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (!std::isfinite(times_[k]) || !std::isfinite(positions_[k])) {
      throw InputError("PiecewiseLinearCurve: non-finite sample");
    }
    if (k > 0 && !(times_[k - 1] < times_[k])) {
      throw InputError("PiecewiseLinearCurve: sample times must be strictly increasing");
    }
  }
}

PiecewiseLinearCurve PiecewiseLinearCurve::line(double t0, double t1, double x0, double speed) {
  return PiecewiseLinearCurve({t0, t1}, {x0 + speed * t0, x0 + speed * t1});
}

double PiecewiseLinearCurve::operator()(double t) const {
  if (t <= times_.front()) return positions_.front();
  if (t >= times_.back()) return positions_.back();
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  auto k = static_cast<std::size_t>(it - times_.begin());
  const double w = (t - times_[k - 1]) / (times_[k] - times_[k - 1]);
  return positions_[k - 1] + w * (positions_[k] - positions_[k - 1]);
}

StepFunction PiecewiseLinearCurve::slopes() const {
  if (times_.size() < 2) return StepFunction::constant(0.0);
  std::vector<double> v;
  v.reserve(times_.size() - 1);
  for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
    v.push_back((positions_[k + 1] - positions_[k]) / (times_[k + 1] - times_[k]));
  }
  return StepFunction(times_, std::move(v));
}

double PiecewiseLinearCurve::lipschitz() const {
  double lip = 0.0;
  for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
    lip = std::max(lip, std::abs(positions_[k + 1] - positions_[k]) / (times_[k + 1] - times_[k]));
  }
  return lip;
}

PiecewiseLinearCurve PiecewiseLinearCurve::restrict(double a, double b) const {
  if (!(a <= b)) throw InputError("PiecewiseLinearCurve::restrict: a > b");
  std::vector<double> t{a};
  std::vector<double> x{(*this)(a)};
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (times_[k] > a && times_[k] < b) {
      t.push_back(times_[k]);
      x.push_back(positions_[k]);
    }
  }
  if (b > a) {
    t.push_back(b);
    x.push_back((*this)(b));
  }
  return PiecewiseLinearCurve(std::move(t), std::move(x));
}

}  // namespace regflux
