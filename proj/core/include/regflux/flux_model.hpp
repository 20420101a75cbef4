#pragma once

#include <functional>
#include <string>
#include <vector>

#include "regflux/curves.hpp"
#include "regflux/functions.hpp"

namespace regflux {

/// Structural constants of a flux f(t,x,w). Flags are declared by the
/// constructor of the flux, never inferred.
struct FluxAssumptions {
  double lip_omega = 0.0;     // L: Lipschitz constant in w
  double lip_bound_L1 = 0.0;  // L1: bound on the integral of |f(t,x,0)| over x
  bool satisfies_F1 = true;
  bool satisfies_F2 = false;  // f(t,x,0) = 0, f(t,x,1) = h(t)
  bool satisfies_F3 = false;  // f = F(v(t,x), w) with v regulated
  double state_min = 0.0;
  double state_max = 1.0;
};

/// Evaluable flux f(t, x, w). Immutable; evaluation is pure.
class FluxField {
 public:
  using Evaluator = std::function<double(double, double, double)>;

  FluxField() = default;
  /// `d_omega` may be empty, in which case centered differences are used.
  FluxField(Evaluator value, Evaluator d_omega, FluxAssumptions assumptions);

  /// Unchecked evaluation, for solver inner loops.
  double operator()(double t, double x, double w) const { return value_(t, x, w); }
  /// Checked evaluation: finite inputs and w in the declared state range.
  double eval(double t, double x, double w) const;

  /// Partial derivative in w (analytic when available).
  double d_omega(double t, double x, double w) const;
  /// Centered difference in w with step 1e-5.
  double d_omega_fd(double t, double x, double w) const;

  const FluxAssumptions& assumptions() const { return assumptions_; }
  double lipschitz() const { return assumptions_.lip_omega; }
  bool has_analytic_derivative() const { return static_cast<bool>(d_omega_); }

 private:
  Evaluator value_;
  Evaluator d_omega_;
  FluxAssumptions assumptions_;
};

/// Flux built from one smooth function of w, independent of (t, x).
FluxField make_flux(const ScalarFunction& f);

/// Two smooth fluxes glued along a Lipschitz curve: f_left for x <= gamma(t),
/// f_right for x > gamma(t).
class InterfaceFlux {
 public:
  InterfaceFlux(ScalarFunction left, ScalarFunction right, PiecewiseLinearCurve gamma);

  double operator()(double t, double x, double w) const {
    return x <= gamma_(t) ? left_(w) : right_(w);
  }

  const ScalarFunction& left() const { return left_; }
  const ScalarFunction& right() const { return right_; }
  const PiecewiseLinearCurve& gamma() const { return gamma_; }
  const StepFunction& gamma_dot() const { return gamma_dot_; }

  FluxField field() const;

 private:
  ScalarFunction left_;
  ScalarFunction right_;
  PiecewiseLinearCurve gamma_;
  StepFunction gamma_dot_;
};

/// f(t,x,w) = F(v(t,x), w) for a bounded coefficient v.
class CompositeFlux {
 public:
  using Coefficient = std::function<double(double, double)>;

  /// [alpha_min, alpha_max] must contain the range of the coefficient; it is
  /// used to bound the Lipschitz constant and to check F(a,0)=0, F(a,1)=h1.
  CompositeFlux(TwoArgFunction F, Coefficient coefficient, double alpha_min, double alpha_max);

  double operator()(double t, double x, double w) const { return F_.value(coefficient_(t, x), w); }
  double coefficient(double t, double x) const { return coefficient_(t, x); }
  const TwoArgFunction& F() const { return F_; }
  double h1() const { return h1_; }
  double lipschitz() const { return lip_; }

  FluxField field() const;

 private:
  TwoArgFunction F_;
  Coefficient coefficient_;
  double lip_ = 0.0;
  double h1_ = 0.0;
};

/// Lipschitz bound of w -> F(a, w) on [0,1], maximized over a in [a_min, a_max]
/// by sampling |F_w|.
double sampled_lipschitz(const TwoArgFunction& F, double a_min, double a_max);

/// Throws AssumptionError unless F(a,0) = 0 and F(a,1) is the same for all
/// sampled a. Returns that common value h1.
double check_two_arg_assumptions(const TwoArgFunction& F, const std::vector<double>& alphas,
                                 double tol = 1e-12);

/// Normalized bump kernel c * exp(-1 / (1 - xi^2)) on [-1, 1].
double bump_kernel(double xi);

/// f_delta = rho_delta(t) * rho_delta(x) * f, by a 64-node composite
/// trapezoid rule per axis with weights normalized to unit mass.
FluxField mollify(const FluxField& flux, double delta);

struct SamplingPlan {
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<double> states;
  double tolerance = 1e-9;
};

struct AssumptionReport {
  double lip_hat = 0.0;           // max centered-difference quotient in w
  double max_abs_f_at_zero = 0.0;
  double max_x_variation_at_one = 0.0;
  bool F1_pass = false;           // lip_hat <= declared L + tolerance
  bool F2_pass = false;
};

AssumptionReport verify_assumptions(const FluxField& flux, const SamplingPlan& plan);

/// Flux seen in the frame moving with the interface:
/// f~(t,x,w) = f_{l/r}(w) - gamma'(t) w, interface frozen at x = 0.
FluxField galilean_shift(const InterfaceFlux& flux);

}  // namespace regflux
