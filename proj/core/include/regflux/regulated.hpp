#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "regflux/curves.hpp"
#include "regflux/flux_model.hpp"

namespace regflux {

struct Rectangle {
  double T = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
};

/// One time band [a, b] with ordered interface curves and the step constants
/// between them: alphas[0] left of curves[0], alphas[k] right of curves[k-1].
struct Band {
  double a = 0.0;
  double b = 0.0;
  std::vector<PiecewiseLinearCurve> curves;
  std::vector<double> alphas;
};

/// Step-function approximation of a regulated function of (t, x): outside a
/// set of times of measure at most `tolerance`, the field is piecewise
/// constant with jumps along finitely many Lipschitz curves.
class RegulatedField {
 public:
  RegulatedField() = default;
  RegulatedField(Rectangle rectangle, std::vector<Band> bands, double tolerance);

  const Rectangle& rectangle() const { return rectangle_; }
  const std::vector<Band>& bands() const { return bands_; }
  double tolerance() const { return tolerance_; }

  /// Index of the band containing t, if any.
  std::optional<std::size_t> band_at(double t) const;

  /// Value of the step function of the band at (t, x); std::nullopt when t is
  /// covered by no band. Points on a curve take the constant to their right.
  std::optional<double> eval(double t, double x) const;

  /// Measure of [0, T] not covered by bands.
  double uncovered_measure() const;

  nlohmann::json to_json() const;
  static RegulatedField from_json(const nlohmann::json& doc);

 private:
  Rectangle rectangle_;
  std::vector<Band> bands_;
  double tolerance_ = 0.0;
};

/// eval_field: checked evaluation, throws InputError outside the rectangle.
std::optional<double> eval_field(const RegulatedField& field, double t, double x);

struct OrderingViolation {
  std::size_t band = 0;
  std::size_t curve = 0;  // violation between curve and curve + 1
  double time = 0.0;
  double margin = 0.0;    // gamma_{k+1}(t) - gamma_k(t), <= 0 when violated
};

struct FieldValidation {
  bool bands_disjoint = true;
  bool bands_inside = true;
  bool alpha_counts_ok = true;
  double uncovered_measure = 0.0;
  bool coverage_ok = true;  // uncovered_measure <= tolerance
  std::vector<OrderingViolation> ordering_violations;
  double worst_ordering_margin = HUGE_VAL;
  std::vector<std::vector<double>> lipschitz;  // per band, per curve

  bool pass() const {
    return bands_disjoint && bands_inside && alpha_counts_ok && coverage_ok &&
           ordering_violations.empty();
  }
};

FieldValidation validate_field(const RegulatedField& field);

struct SampleGrid {
  std::size_t n_times = 0;
  std::size_t n_positions = 0;
};

struct SupDistanceReport {
  std::vector<double> per_band;  // sup |chi_i - reference| over samples in band i
  double uncovered_measure = 0.0;
  std::size_t samples_used = 0;

  double max() const;
};

/// Sup distance between the step functions and a reference on a uniform
/// lattice over the rectangle. Samples within one lattice step of a curve are
/// skipped.
SupDistanceReport sup_distance(const RegulatedField& field,
                               const std::function<double(double, double)>& reference,
                               const SampleGrid& samples);

/// F(v(t,x), w) with v given by the field. Uncovered times use the nearest band
/// endpoint. Throws AssumptionError if F(a,0) != 0 or F(a,1) varies over the
/// field's constants.
CompositeFlux compose(const TwoArgFunction& F, const RegulatedField& field);

}  // namespace regflux
