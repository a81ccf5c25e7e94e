/// Small numerical kernels shared across the library: composite quadrature
/// on uniform grids, monotone cubic (PCHIP) interpolation, scalar root
/// bracketing/bisection and log-linear fits.
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace solwave {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace num {

/// Composite Simpson rule on a uniform grid (trailing 3/8 panel when the
/// interval count is odd). Exact for cubics on even interval counts.
double integrate_simpson(std::span<const double> f, double dx);

/// Composite trapezoid rule on a uniform grid.
double integrate_trapezoid(std::span<const double> f, double dx);

/// Cumulative integral F(x_k) = int_{x_0}^{x_k} f on a uniform grid,
/// fourth-order accurate (per-interval cubic through four neighbours).
/// F[0] == 0 exactly.
std::vector<double> cumulative_integral(std::span<const double> f, double dx);

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
/// Interpolates the data exactly at the nodes and preserves monotonicity of
/// monotone data. Evaluation outside [x.front(), x.back()] clamps to the
/// boundary polynomial.
class PchipSpline {
 public:
  PchipSpline() = default;
  PchipSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  bool empty() const { return x_.empty(); }
  const std::vector<double>& abscissae() const { return x_; }

 private:
  std::size_t interval(double x) const;
  std::vector<double> x_, y_, slope_;
};

/// Bisection for a bracketed root of f; requires f(a) and f(b) of opposite
/// sign. Tolerance is on the interval width.
double bisect(const std::function<double(double)>& f, double a, double b,
              double tol = 1e-14, int max_iter = 200);

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

/// Least-squares straight line through (x_i, y_i).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// 64-bit FNV-1a hash, used for content checksums of canonical payloads.
std::uint64_t fnv1a64(std::span<const char> bytes);

/// Fixed-format float: 17 significant digits, round-trips any double.
std::string format_g17(double v);

}  // namespace num
}  // namespace solwave
