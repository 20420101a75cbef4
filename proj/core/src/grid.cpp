#include "regflux/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "regflux/error.hpp"

namespace regflux {

Grid1D::Grid1D(double x_min, double x_max, std::size_t n_cells)
    : x_min_(x_min), x_max_(x_max), n_cells_(n_cells) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw InputError("Grid1D: need finite x_min < x_max");
  }
  if (n_cells < 8) throw InputError("Grid1D: need at least 8 cells");
  dx_ = (x_max_ - x_min_) / static_cast<double>(n_cells_);
}

Grid1D Grid1D::with_spacing(double x_min, double x_max, double dx) {
  if (!(dx > 0.0)) throw InputError("Grid1D: spacing must be positive");
  const auto n = static_cast<std::size_t>(std::ceil((x_max - x_min) / dx - 1e-9));
  return Grid1D(x_min, x_max, std::max<std::size_t>(n, 8));
}

std::size_t Grid1D::cell_of(double x) const {
  const double s = std::floor((x - x_min_) / dx_);
  if (s < 0.0) return 0;
  if (s >= static_cast<double>(n_cells_)) return n_cells_ - 1;
  return static_cast<std::size_t>(s);
}

std::vector<double> Grid1D::centers() const {
  std::vector<double> c(n_cells_);
  for (std::size_t j = 0; j < n_cells_; ++j) c[j] = center(j);
  return c;
}

std::size_t Grid1D::pad_cells(double pad) const {
  if (!(pad > 0.0)) return 0;
  return static_cast<std::size_t>(std::ceil(pad / dx_ - 1e-9));
}

Grid1D Grid1D::padded(double pad) const {
  const std::size_t k = pad_cells(pad);
  if (k == 0) return *this;
  Grid1D g;
  g.x_min_ = x_min_ - static_cast<double>(k) * dx_;
  g.n_cells_ = n_cells_ + 2 * k;
  g.dx_ = dx_;
  g.x_max_ = g.x_min_ + static_cast<double>(g.n_cells_) * dx_;
  return g;
}

bool Grid1D::same_as(const Grid1D& o) const {
  return n_cells_ == o.n_cells_ && std::abs(x_min_ - o.x_min_) <= 1e-12 * (1.0 + std::abs(x_min_)) &&
         std::abs(dx_ - o.dx_) <= 1e-12 * dx_;
}

std::size_t TimeProfiles::nearest_time_index(double t) const {
  if (times.empty()) throw InputError("TimeProfiles: no stored times");
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return times.size() - 1;
  auto k = static_cast<std::size_t>(it - times.begin());
  if (k > 0 && std::abs(times[k - 1] - t) <= std::abs(times[k] - t)) return k - 1;
  return k;
}

double TimeProfiles::sample(double t, double x) const {
  return values[nearest_time_index(t)][grid.cell_of(x)];
}

double l1_norm(std::span<const double> u, double dx) {
  double s = 0.0;
  for (double v : u) s += std::abs(v);
  return s * dx;
}

double mass(std::span<const double> u, double dx) {
  double s = 0.0;
  double c = 0.0;
  for (double v : u) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s * dx;
}

Profile::Profile(std::function<double(double)> f, std::vector<double> jumps)
    : f_(std::move(f)), jumps_(std::move(jumps)) {
  std::sort(jumps_.begin(), jumps_.end());
}

std::vector<double> Profile::point_values(const Grid1D& grid) const {
  std::vector<double> u(grid.n_cells());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = f_(grid.center(j));
  return u;
}

std::vector<double> Profile::cell_averages(const Grid1D& grid) const {
  static constexpr std::array<double, 5> node{-0.9061798459386640, -0.5384693101056831, 0.0,
                                              0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 5> weight{0.2369268850561891, 0.4786286704993665,
                                                0.5688888888888889, 0.4786286704993665,
                                                0.2369268850561891};
  auto gauss = [&](double a, double b) {
    const double h = 0.5 * (b - a);
    const double m = 0.5 * (a + b);
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += weight[k] * f_(m + h * node[k]);
    return s * h;
  };
  std::vector<double> u(grid.n_cells());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double a = grid.edge(j);
    const double b = grid.edge(j + 1);
    auto lo = std::upper_bound(jumps_.begin(), jumps_.end(), a);
    auto hi = std::lower_bound(jumps_.begin(), jumps_.end(), b);
    double s = 0.0;
    double left = a;
    for (auto it = lo; it != hi; ++it) {
      s += gauss(left, *it);
      left = *it;
    }
    s += gauss(left, b);
    u[j] = s / (b - a);
  }
  return u;
}

Profile Profile::piecewise_constant(std::vector<double> breaks, std::vector<double> values) {
  if (values.size() != breaks.size() + 1) {
    throw InputError("piecewise_constant: need one more value than breaks");
  }
  if (!std::is_sorted(breaks.begin(), breaks.end())) {
    throw InputError("piecewise_constant: breaks must be sorted");
  }
  auto f = [breaks, values](double x) {
    auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
    return values[static_cast<std::size_t>(it - breaks.begin())];
  };
  return Profile(f, breaks);
}

Profile Profile::riemann(double left, double right, double at) {
  return piecewise_constant({at}, {left, right});
}

Profile Profile::gaussian(double center, double width, double amplitude) {
  if (!(width > 0.0)) throw InputError("gaussian: width must be positive");
  return Profile([=](double x) {
    const double z = (x - center) / width;
    return amplitude * std::exp(-0.5 * z * z);
  });
}

Profile Profile::bump(double center, double radius, double amplitude) {
  if (!(radius > 0.0)) throw InputError("bump: radius must be positive");
  return Profile([=](double x) {
    const double z = (x - center) / radius;
    if (std::abs(z) >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - z * z));
  });
}

Profile Profile::samples(std::vector<double> xs, std::vector<double> us) {
  if (xs.size() < 2 || xs.size() != us.size()) {
    throw InputError("samples: need at least two (x,u) pairs");
  }
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (!(xs[k - 1] < xs[k])) throw InputError("samples: x must be strictly increasing");
  }
  std::vector<double> jumps{xs.front(), xs.back()};
  return Profile(
      [xs, us](double x) {
        if (x < xs.front() || x > xs.back()) return 0.0;
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.end()) return us.back();
        auto k = static_cast<std::size_t>(it - xs.begin());
        const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
        return us[k - 1] + w * (us[k] - us[k - 1]);
      },
      jumps);
}

Profile Profile::heat_kernel(double t, double center) {
  if (!(t > 0.0)) throw InputError("heat_kernel: time must be positive");
  return Profile([=](double x) {
    const double z = x - center;
    return std::exp(-z * z / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
  });
}

Profile Profile::viscous_shock(double x0, double eps) {
  if (!(eps > 0.0)) throw InputError("viscous_shock: eps must be positive");
  return Profile([=](double x) { return 0.5 * (1.0 - std::tanh((x - x0) / (4.0 * eps))); });
}

}  // namespace regflux
