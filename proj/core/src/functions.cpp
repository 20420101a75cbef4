#include "regflux/functions.hpp"

#include <cmath>

#include "regflux/error.hpp"

namespace regflux::catalog {

ScalarFunction zero() {
  return {"zero", [](double) { return 0.0; }, [](double) { return 0.0; },
          [](double) { return 0.0; }, 0.0};
}

ScalarFunction burgers(double s) {
  return {"burgers", [s](double w) { return 0.5 * s * w * w; }, [s](double w) { return s * w; },
          [s](double) { return s; }, std::abs(s)};
}

ScalarFunction concave_quadratic(double s) {
  return {"concave_quadratic", [s](double w) { return s * w * (1.0 - w); },
          [s](double w) { return s * (1.0 - 2.0 * w); }, [s](double) { return -2.0 * s; },
          std::abs(s)};
}

ScalarFunction cubic(double s) {
  return {"cubic", [s](double w) { return s * w * w * w; },
          [s](double w) { return 3.0 * s * w * w; }, [s](double w) { return 6.0 * s * w; },
          3.0 * std::abs(s)};
}

ScalarFunction linear(double c) {
  return {"linear", [c](double w) { return c * w; }, [c](double) { return c; },
          [](double) { return 0.0; }, std::abs(c)};
}

ScalarFunction scalar_by_name(const std::string& name, double scale) {
  if (name == "zero") return zero();
  if (name == "burgers") return burgers(scale);
  if (name == "concave_quadratic") return concave_quadratic(scale);
  if (name == "cubic") return cubic(scale);
  if (name == "linear") return linear(scale);
  throw InputError("unknown flux catalog name '" + name + "'");
}

TwoArgFunction alpha_concave() {
  return {"alpha_concave", [](double a, double w) { return a * w * (1.0 - w); },
          [](double a, double w) { return a * (1.0 - 2.0 * w); },
          [](double a, double) { return -2.0 * a; }};
}

TwoArgFunction one_plus_alpha_concave() {
  return {"one_plus_alpha_concave", [](double a, double w) { return (1.0 + a) * w * (1.0 - w); },
          [](double a, double w) { return (1.0 + a) * (1.0 - 2.0 * w); },
          [](double a, double) { return -2.0 * (1.0 + a); }};
}

TwoArgFunction alpha_linear() {
  return {"alpha_linear", [](double a, double w) { return a * w; }, [](double a, double) { return a; },
          [](double, double) { return 0.0; }};
}

TwoArgFunction two_arg_by_name(const std::string& name) {
  if (name == "alpha_concave") return alpha_concave();
  if (name == "one_plus_alpha_concave") return one_plus_alpha_concave();
  if (name == "alpha_linear") return alpha_linear();
  throw InputError("unknown two-argument flux catalog name '" + name + "'");
}

}  // namespace regflux::catalog
