#pragma once

#include <functional>
#include <string>

namespace regflux {

/// Smooth function of one state variable with its first two derivatives.
/// `lip` is a Lipschitz bound on [0,1], declared by whoever builds it.
struct ScalarFunction {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  double lip = 0.0;

  double operator()(double w) const { return value(w); }
};

/// Smooth function F(alpha, omega) used to build composite fluxes F(v(t,x), omega).
struct TwoArgFunction {
  std::string name;
  std::function<double(double, double)> value;
  std::function<double(double, double)> d_omega;
  std::function<double(double, double)> d_omega2;

  double operator()(double alpha, double w) const { return value(alpha, w); }
};

namespace catalog {

ScalarFunction zero();
/// s * w^2 / 2
ScalarFunction burgers(double scale = 1.0);
/// s * w (1 - w)
ScalarFunction concave_quadratic(double scale = 1.0);
/// s * w^3
ScalarFunction cubic(double scale = 1.0);
/// c * w
ScalarFunction linear(double speed = 1.0);

/// Looks up one of the names above; throws InputError for unknown names.
ScalarFunction scalar_by_name(const std::string& name, double scale = 1.0);

/// alpha * w (1 - w)
TwoArgFunction alpha_concave();
/// (1 + alpha) * w (1 - w)
TwoArgFunction one_plus_alpha_concave();
/// alpha * w; violates F(alpha,1) = const, kept for negative tests.
TwoArgFunction alpha_linear();

TwoArgFunction two_arg_by_name(const std::string& name);

}  // namespace catalog

}  // namespace regflux
