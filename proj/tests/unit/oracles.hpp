#pragma once

#include <cmath>
#include <functional>

namespace oracle {

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Heat kernel with variance 2t.
inline double gauss(double t, double x) {
  return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * M_PI * t);
}

}  // namespace oracle
