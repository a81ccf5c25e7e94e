#include <doctest.h>

#include <cmath>

#include "solwave/sturm.hpp"

using namespace solwave;

namespace {

ShearProfile still_water(double c, double g = 1.0, double d = 1.0) {
  ShearProfile p;
  p.g = g;
  p.c = c;
  p.d = d;
  p.u = UProfile::constant(0.0);
  return p;
}

// Oracle for irrotational profiles: the physical-variable mode is a sine,
// and mu = k^2 with tan(k d) = (c^2/g) k. Root searched below pi/(2d).
double irrotational_mu1_oracle(double c, double g, double d) {
  auto f = [&](double k) { return std::tan(k * d) - c * c / g * k; };
  return std::pow(num::bisect(f, 1e-6 / d, M_PI / (2.0 * d) - 1e-9, 1e-14),
                  2.0);
}

}  // namespace

TEST_CASE("sturm: critical irrotational case has mu_1 = 0 exactly") {
  const auto st = build_asymptotic_state(still_water(1.0), 257);
  const auto spec = solve_sturm(st);
  CHECK(std::abs(spec.mu[0]) < 1e-8);
}

TEST_CASE("sturm: irrotational c = 1.2 matches the transcendental oracle") {
  const double mu_exact = irrotational_mu1_oracle(1.2, 1.0, 1.0);
  CHECK(mu_exact > 0.85);  // k ~ 0.929, mu ~ 0.8626
  CHECK(mu_exact < 0.88);
  const auto st = build_asymptotic_state(still_water(1.2), 1024);
  const auto spec = solve_sturm(st);
  CHECK(std::abs(spec.mu[0] - mu_exact) / mu_exact < 1e-4);
}

TEST_CASE("sturm: large-F limit approaches (pi/2d)^2 from below") {
  const double mu_exact = irrotational_mu1_oracle(10.0, 1.0, 1.0);
  const auto st = build_asymptotic_state(still_water(10.0), 1024);
  const auto spec = solve_sturm(st);
  const double cap = M_PI * M_PI / 4.0;
  CHECK(spec.mu[0] < cap);
  CHECK(std::abs(spec.mu[0] - cap) / cap < 0.02);
  CHECK(std::abs(spec.mu[0] - mu_exact) / mu_exact < 1e-4);
}

TEST_CASE("sturm: eigenvalue refinement converges at second order") {
  const auto cv = const_vorticity_params(2.5, 0.3, 1.0, 1.0);
  double mu[3];
  int k = 0;
  for (int np : {129, 257, 513})
    mu[k++] = solve_sturm(build_asymptotic_state(cv.profile, np)).mu[0];
  const double order = std::log2(std::abs(mu[0] - mu[1]) /
                                 std::abs(mu[1] - mu[2]));
  CHECK(order > 1.8);
}

TEST_CASE("sturm: criticality tracks the Froude number along the family") {
  const UProfile ustar = UProfile::constant(1.0);
  for (double froude : {0.8, 0.95, 1.05, 1.5, 3.0}) {
    const auto p = family_profile(ustar, froude, 1.0, 1.0);
    const auto spec = solve_sturm(build_asymptotic_state(p, 257));
    if (froude > 1.0)
      CHECK(spec.mu[0] > 0.0);
    else
      CHECK(spec.mu[0] <= 0.0);
  }
}

TEST_CASE("sturm: first eigenfunction is positive and normalized") {
  const auto cv = const_vorticity_params(2.5, 0.5, 1.0, 1.0);
  const auto st = build_asymptotic_state(cv.profile, 257);
  const auto spec = solve_sturm(st);
  REQUIRE(spec.mu[0] > 0.0);
  CHECK(spec.phi1.front() == 0.0);
  CHECK(spec.phi1.back() == 1.0);
  for (std::size_t i = 1; i < spec.phi1.size(); ++i) CHECK(spec.phi1[i] > 0.0);

  // Discrete Robin relation at the surface, one-sided second order.
  const double dp = st.flux / (st.np - 1);
  const std::size_t n = spec.phi1.size();
  const double phi_p =
      (3.0 * spec.phi1[n - 1] - 4.0 * spec.phi1[n - 2] + spec.phi1[n - 3]) /
      (2.0 * dp);
  const double hp0 = st.height_p.back();
  const double rel = std::abs(phi_p / (hp0 * hp0 * hp0) -
                              st.profile.g * spec.phi1[n - 1]) /
                     (st.profile.g * spec.phi1[n - 1]);
  CHECK(rel < 5e-3);  // O(dp^2)
}

TEST_CASE("sturm: s1 sits strictly inside its admissible interval") {
  const auto st = build_asymptotic_state(still_water(1.3), 257);
  const auto spec = solve_sturm(st);
  REQUIRE(spec.mu[0] > 0.0);
  REQUIRE(spec.mu[1] > spec.mu[0]);
  const double lo = std::sqrt(spec.mu[0]);
  const double hi = std::min(2.0 * std::sqrt(spec.mu[0]), std::sqrt(spec.mu[1]));
  CHECK(spec.s1 > lo);
  CHECK(spec.s1 < hi);
  CHECK(spec.s1 == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-14));
}

TEST_CASE("sturm: n_eigs extension returns an ascending spectrum") {
  const auto st = build_asymptotic_state(still_water(1.3), 257);
  CHECK_THROWS_AS(solve_sturm(st, 1), Error);
  const auto spec = solve_sturm(st, 4);
  REQUIRE(spec.mu.size() == 4);
  for (std::size_t k = 1; k < spec.mu.size(); ++k)
    CHECK(spec.mu[k] > spec.mu[k - 1]);
}

TEST_CASE("physical equivalence: irrotational sine mode") {
  const auto st = build_asymptotic_state(still_water(1.2), 512);
  const auto spec = solve_sturm(st);
  CHECK(physical_equivalence_residual(st, spec) < 1e-4);
}

TEST_CASE("physical equivalence: residual verdict is scale invariant") {
  const auto st = build_asymptotic_state(still_water(1.2), 256);
  auto spec = solve_sturm(st);
  const double r1 = physical_equivalence_residual(st, spec);
  for (double& v : spec.phi1) v *= 2.0;  // homogeneous problem
  const double r2 = physical_equivalence_residual(st, spec);
  CHECK(r2 == doctest::Approx(r1).epsilon(1e-12));
}

TEST_CASE("physical equivalence: second-order refinement (const vorticity)") {
  const auto cv = const_vorticity_params(3.0, 0.5, 1.0, 1.0);
  double res[3];
  int k = 0;
  for (int np : {129, 257, 513}) {
    const auto st = build_asymptotic_state(cv.profile, np);
    res[k++] = physical_equivalence_residual(st, solve_sturm(st));
  }
  const double order = std::log2(res[0] / res[1]);
  const double order2 = std::log2(res[1] / res[2]);
  CHECK(order > 1.8);
  CHECK(order2 > 1.8);
}

TEST_CASE("tension decay mode reduces to mu_1 at sigma = 0") {
  const auto st = build_asymptotic_state(still_water(1.2), 257);
  const auto spec = solve_sturm(st);
  const auto mode = tension_decay_mode(st, 0.0);
  CHECK(mode.mu == doctest::Approx(spec.mu[0]).epsilon(1e-9));
  CHECK(mode.phi.back() == 1.0);
}

TEST_CASE("tension decay mode matches the capillary transcendental oracle") {
  // Subcritical irrotational flow with strong tension: the decay rate solves
  // tan(k d) = c^2 k / (g - sigma k^2).
  const double c = 0.95, g = 1.0, d = 1.0, sigma = 0.8;
  auto f = [&](double k) {
    return std::tan(k * d) - c * c * k / (g - sigma * k * k);
  };
  const double k_exact = num::bisect(f, 0.05, std::sqrt(g / sigma) - 1e-6, 1e-13);
  const auto st = build_asymptotic_state(still_water(c), 1024);
  const auto mode = tension_decay_mode(st, sigma);
  CHECK(std::abs(mode.mu - k_exact * k_exact) / (k_exact * k_exact) < 1e-4);

  // Without tension the same subcritical state has no positive decay mode.
  CHECK_THROWS_AS(tension_decay_mode(st, 0.0), Error);
}
