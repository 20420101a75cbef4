#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace regflux {

/// Uniform cell-centered grid on [x_min, x_max].
class Grid1D {
 public:
  Grid1D() = default;
  Grid1D(double x_min, double x_max, std::size_t n_cells);

  /// Grid with cell width at most `dx`.
  static Grid1D with_spacing(double x_min, double x_max, double dx);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t n_cells() const { return n_cells_; }
  double dx() const { return dx_; }
  double center(std::size_t j) const { return x_min_ + (static_cast<double>(j) + 0.5) * dx_; }
  /// Left edge of cell j; edge(n_cells) == x_max.
  double edge(std::size_t j) const { return x_min_ + static_cast<double>(j) * dx_; }
  /// Index of the cell containing x, clamped to the grid.
  std::size_t cell_of(double x) const;
  std::vector<double> centers() const;

  /// Same spacing, extended by ceil(pad / dx) cells on each side.
  Grid1D padded(double pad) const;
  /// Number of cells added on the left by padded(pad).
  std::size_t pad_cells(double pad) const;

  bool same_as(const Grid1D& other) const;

 private:
  double x_min_ = 0.0;
  double x_max_ = 1.0;
  std::size_t n_cells_ = 0;
  double dx_ = 0.0;
};

/// Cell values of a scalar field at a list of times.
struct TimeProfiles {
  Grid1D grid;
  std::vector<double> times;
  std::vector<std::vector<double>> values;

  std::size_t nearest_time_index(double t) const;
  /// Cell value at (t, x) using the stored time nearest to t.
  double sample(double t, double x) const;
};

/// Sum of |u_j| dx.
double l1_norm(std::span<const double> u, double dx);
/// Sum of u_j dx with compensated summation.
double mass(std::span<const double> u, double dx);

/// Initial data: a function of x with a list of known discontinuities, so
/// that cell averages can be integrated exactly piece by piece.
class Profile {
 public:
  Profile() = default;
  Profile(std::function<double(double)> f, std::vector<double> jumps = {});

  double operator()(double x) const { return f_(x); }
  const std::vector<double>& jumps() const { return jumps_; }

  std::vector<double> point_values(const Grid1D& grid) const;
  /// Cell averages by 5-point Gauss-Legendre on each smooth piece of a cell.
  std::vector<double> cell_averages(const Grid1D& grid) const;

  /// values[k] on [breaks[k-1], breaks[k]), values[0] left of breaks[0],
  /// values.back() right of breaks.back().
  static Profile piecewise_constant(std::vector<double> breaks, std::vector<double> values);
  /// left for x < at, right for x >= at.
  static Profile riemann(double left, double right, double at = 0.0);
  static Profile gaussian(double center, double width, double amplitude);
  /// amplitude * exp(1 - 1/(1 - ((x-center)/radius)^2)) on |x - center| < radius.
  static Profile bump(double center, double radius, double amplitude);
  /// Linear interpolation through (x, u) samples, zero outside.
  static Profile samples(std::vector<double> xs, std::vector<double> us);
  /// G(t, x - center) = exp(-(x-center)^2 / 4t) / sqrt(4 pi t).
  static Profile heat_kernel(double t, double center = 0.0);
  /// Viscous Burgers travelling wave (1 - tanh((x - x0) / (4 eps))) / 2.
  static Profile viscous_shock(double x0, double eps);

 private:
  std::function<double(double)> f_;
  std::vector<double> jumps_;
};

}  // namespace regflux
