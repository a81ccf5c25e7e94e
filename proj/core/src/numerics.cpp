#include "solwave/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace solwave::num {

double integrate_trapezoid(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  double sum = 0.5 * (f[0] + f[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) sum += f[i];
  return sum * dx;
}

double integrate_simpson(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * dx * (f[0] + f[1]);
  std::size_t intervals = n - 1;
  double total = 0.0;
  std::size_t simpson_end = intervals;  // index of last node covered by pairs
  if (intervals % 2 != 0) {
    if (intervals < 3) return integrate_trapezoid(f, dx);
    simpson_end = intervals - 3;
    // Simpson 3/8 on the trailing three intervals.
    total += dx * 3.0 / 8.0 *
             (f[simpson_end] + 3.0 * f[simpson_end + 1] +
              3.0 * f[simpson_end + 2] + f[simpson_end + 3]);
  }
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i < simpson_end; i += 2) odd += f[i];
  for (std::size_t i = 2; i < simpson_end; i += 2) even += f[i];
  if (simpson_end >= 2)
    total += dx / 3.0 * (f[0] + 4.0 * odd + 2.0 * even + f[simpson_end]);
  return total;
}

std::vector<double> cumulative_integral(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  if (n < 4) {
    for (std::size_t i = 1; i < n; ++i)
      out[i] = out[i - 1] + 0.5 * dx * (f[i - 1] + f[i]);
    return out;
  }
  // Integral over [x_k, x_{k+1}] of the cubic through the four nearest nodes.
  auto panel = [&](std::size_t k) {
    if (k == 0)
      return dx / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    if (k == n - 2)
      return dx / 24.0 *
             (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4]);
    return dx / 24.0 *
           (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]);
  };
  for (std::size_t k = 0; k + 1 < n; ++k) out[k + 1] = out[k] + panel(k);
  return out;
}

PchipSpline::PchipSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n != y_.size() || n < 2)
    throw Error("PchipSpline: need two or more matching samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw Error("PchipSpline: abscissae must be strictly increasing");

  std::vector<double> h(n - 1), s(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    s[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  slope_.assign(n, 0.0);
  if (n == 2) {
    slope_[0] = slope_[1] = s[0];
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (s[i - 1] * s[i] <= 0.0) {
        slope_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        slope_[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
      }
    }
    auto end_slope = [](double h0, double h1, double s0, double s1) {
      double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
      if (d * s0 <= 0.0) return 0.0;
      if (s0 * s1 <= 0.0 && std::abs(d) > 3.0 * std::abs(s0))
        return 3.0 * s0;
      return d;
    };
    slope_[0] = end_slope(h[0], h[1], s[0], s[1]);
    slope_[n - 1] = end_slope(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
  }
}

std::size_t PchipSpline::interval(double x) const {
  if (x <= x_.front()) return 0;
  if (x >= x_.back()) return x_.size() - 2;
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double PchipSpline::operator()(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[i] + h * h10 * slope_[i] + h01 * y_[i + 1] +
         h * h11 * slope_[i + 1];
}

double PchipSpline::derivative(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double dh00 = (6.0 * t2 - 6.0 * t) / h;
  const double dh10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double dh01 = (-6.0 * t2 + 6.0 * t) / h;
  const double dh11 = 3.0 * t2 - 2.0 * t;
  return dh00 * y_[i] + dh10 * slope_[i] + dh01 * y_[i + 1] +
         dh11 * slope_[i + 1];
}

double bisect(const std::function<double(double)>& f, double a, double b,
              double tol, int max_iter) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw Error("bisect: endpoints do not bracket a root");
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (fa * fm < 0.0) {
      b = mid;
      fb = fm;
    } else {
      a = mid;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error("fit_line: need two or more matching samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

std::uint64_t fnv1a64(std::span<const char> bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace solwave::num
