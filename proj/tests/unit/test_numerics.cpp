#include <doctest.h>

#include <cmath>
#include <vector>

#include "solwave/expression.hpp"
#include "solwave/numerics.hpp"

using namespace solwave;

namespace {

std::vector<double> sample(double a, double b, int n, double (*f)(double)) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    out[static_cast<std::size_t>(k)] = f(a + (b - a) * k / (n - 1));
  return out;
}

}  // namespace

TEST_CASE("simpson integrates cubics exactly") {
  auto cubic = [](double x) { return x * x * x - 2.0 * x + 1.0; };
  std::vector<double> f(9);
  const double a = -1.0, b = 2.0, dx = (b - a) / 8;
  for (int k = 0; k < 9; ++k) f[static_cast<std::size_t>(k)] = cubic(a + k * dx);
  // antiderivative x^4/4 - x^2 + x
  const double exact = (4.0 - 4.0 + 2.0) - (0.25 - 1.0 - 1.0);
  CHECK(num::integrate_simpson(f, dx) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("simpson handles odd interval counts at fourth order") {
  const int n = 102;  // 101 intervals
  const double dx = M_PI / (n - 1);
  auto f = sample(0.0, M_PI, n, [](double x) { return std::sin(x); });
  CHECK(std::abs(num::integrate_simpson(f, dx) - 2.0) < 1e-7);
}

TEST_CASE("cumulative integral is fourth order and starts at zero") {
  const int n = 65;
  const double dx = 1.0 / (n - 1);
  auto f = sample(0.0, 1.0, n, [](double x) { return std::exp(x); });
  auto cum = num::cumulative_integral(f, dx);
  CHECK(cum[0] == 0.0);
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    worst = std::max(worst, std::abs(cum[static_cast<std::size_t>(k)] -
                                     (std::exp(k * dx) - 1.0)));
  CHECK(worst < 5e-9);

  auto cum2 = num::cumulative_integral(
      sample(0.0, 1.0, 2 * n - 1, [](double x) { return std::exp(x); }),
      dx / 2);
  double worst2 = 0.0;
  for (int k = 0; k < 2 * n - 1; ++k)
    worst2 = std::max(worst2, std::abs(cum2[static_cast<std::size_t>(k)] -
                                       (std::exp(k * dx / 2) - 1.0)));
  CHECK(worst2 < worst / 10.0);  // at least ~3.3 orders of convergence
}

TEST_CASE("pchip interpolates nodes exactly and preserves monotone data") {
  std::vector<double> x{0.0, 0.5, 1.2, 2.0, 3.0};
  std::vector<double> y{0.0, 1.0, 1.5, 3.5, 4.0};
  num::PchipSpline s(x, y);
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(s(x[k]) == y[k]);
  double prev = s(0.0);
  for (double t = 0.01; t <= 3.0; t += 0.01) {
    const double v = s(t);
    CHECK(v >= prev - 1e-14);
    prev = v;
  }
}

TEST_CASE("pchip reproduces linear data exactly") {
  std::vector<double> x{-2.0, -1.0, 0.0, 1.0, 2.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * v + 0.5);
  num::PchipSpline s(x, y);
  CHECK(s(-1.3) == doctest::Approx(3.0 * -1.3 + 0.5).epsilon(1e-15));
  CHECK(s.derivative(0.7) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("bisect finds bracketed roots") {
  const double r = num::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(num::bisect([](double x) { return x * x + 1.0; }, 0.0, 1.0),
                  Error);
}

TEST_CASE("line fit recovers slope and intercept") {
  std::vector<double> x, y;
  for (int k = 0; k < 20; ++k) {
    x.push_back(0.1 * k);
    y.push_back(2.5 - 0.75 * 0.1 * k);
  }
  const auto fit = num::fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("format_g17 round-trips doubles bit-exactly") {
  for (double v : {1.0 / 3.0, M_PI, 1e-300, 6.02e23, -0.1}) {
    const std::string s = num::format_g17(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("expression parser evaluates and reports errors") {
  Expression e("0.2*sin(1.5*y) - 0.1*y + 1");
  const double y = -0.3;
  CHECK(e(y) ==
        doctest::Approx(0.2 * std::sin(1.5 * y) - 0.1 * y + 1).epsilon(1e-15));
  CHECK_THROWS_AS(Expression("2*"), Error);
  CHECK_THROWS_AS(Expression("foo(y)"), Error);
  Expression pow("y^2 + 2^y");
  CHECK(pow(2.0) == doctest::Approx(8.0).epsilon(1e-15));
}
