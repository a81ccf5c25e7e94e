#include <doctest.h>

#include <cmath>
#include <random>

#include "solwave/wavesolve.hpp"

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

struct Setup {
  AsymptoticState state;
  SturmSpectrum spectrum;
  StripGrid grid;
};

Setup make_setup(const ShearProfile& profile, int np, int nq,
                 double domain_factor = 40.0, bool half = true) {
  Setup s{build_asymptotic_state(profile, np), {}, {}};
  s.spectrum = solve_sturm(s.state);
  const double L = domain_factor / std::sqrt(s.spectrum.mu[0]);
  s.grid = half ? StripGrid::half(L, nq, np, s.state.flux)
                : StripGrid::full(L, nq, np, s.state.flux);
  return s;
}

double max_abs(const std::vector<double>& v) {
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x));
  return worst;
}

}  // namespace

TEST_CASE("grid construction rejects invalid extents") {
  CHECK_THROWS_AS(StripGrid::half(0.0, 101, 17, 1.0), Error);
  CHECK_THROWS_AS(StripGrid::half(10.0, 4, 17, 1.0), Error);
  CHECK_THROWS_AS(StripGrid::half(10.0, 101, 4, 1.0), Error);
}

TEST_CASE("residual vanishes identically on the trivial wave") {
  for (bool half : {true, false}) {
    const auto cv = const_vorticity_params(2.0, 0.3, 1.0, 1.0);
    auto s = make_setup(cv.profile, 17, 41, 20.0, half);
    const auto field = trivial_field(s.state, s.grid);
    const auto res = residual(field, s.state, 0.0);
    CHECK(max_abs(res.r) == 0.0);
    CHECK(residual_norm(res, s.state) == 0.0);
  }
}

TEST_CASE("tension term is inert on flat fields") {
  auto s = make_setup(still_water(1.2), 17, 41, 20.0);
  const auto field = trivial_field(s.state, s.grid);
  const auto r0 = residual(field, s.state, 0.0);
  const auto r1 = residual(field, s.state, 2.0);
  for (std::size_t k = 0; k < r0.r.size(); ++k) CHECK(r0.r[k] == r1.r[k]);
}

TEST_CASE("residual refuses degenerate fields") {
  auto s = make_setup(still_water(1.2), 17, 41, 20.0);
  auto field = trivial_field(s.state, s.grid);
  field.at(3, 5) = field.at(3, 6) + 0.1;  // invert h_p locally
  CHECK_THROWS_AS(residual(field, s.state, 0.0), DegenerateFieldError);
}

TEST_CASE("seed residual equals the linearization's leftover term") {
  // The Sturm mode kills the sech^2 part of the q-profile; what remains at
  // first order is the sech^4 defect of the envelope. Halving the amplitude
  // halves the residual.
  auto s = make_setup(still_water(1.2), 33, 301);
  const double mu1 = s.spectrum.mu[0];
  const double eps = 1e-3;
  const auto seed = initial_guess(s.state, s.spectrum, eps, s.grid);
  const auto res = residual(seed, s.state, 0.0);

  num::PchipSpline phi_of_p(s.state.p, s.spectrum.phi1);
  double worst_gap = 0.0, scale = 0.0;
  for (int j = 0; j + 1 < s.grid.nq; ++j) {
    for (int i = 1; i + 1 < s.grid.np; ++i) {
      const double sech2 =
          1.0 / std::pow(std::cosh(0.5 * std::sqrt(mu1) * s.grid.q(j)), 2);
      const double expected = -1.5 * eps * mu1 * phi_of_p(s.grid.p(i)) *
                              sech2 * sech2 /
                              s.state.height_p_at(s.grid.p(i));
      scale = std::max(scale, std::abs(expected));
      worst_gap = std::max(worst_gap, std::abs(res.at(j, i) - expected));
    }
  }
  CHECK(worst_gap < 0.1 * scale);

  const auto res_half =
      residual(initial_guess(s.state, s.spectrum, eps / 2, s.grid), s.state, 0.0);
  const double ratio =
      residual_norm(res, s.state) / residual_norm(res_half, s.state);
  CHECK(ratio > 1.9);
  CHECK(ratio < 2.1);
}

TEST_CASE("jacobian matches finite differences on probe directions") {
  const auto cv = const_vorticity_params(2.0, 0.3, 1.0, 1.0);
  auto s = make_setup(cv.profile, 17, 61, 25.0);

  for (double seed_r : {0.0, 0.05}) {
    HeightField base = seed_r == 0.0
                           ? trivial_field(s.state, s.grid)
                           : initial_guess(s.state, s.spectrum, seed_r, s.grid);
    const auto jac = jacobian(base, s.state, 0.4);

    std::mt19937 rng(777);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int probe = 0; probe < 3; ++probe) {
      std::vector<double> dir(base.h.size());
      for (double& v : dir) v = dist(rng);
      const auto jv = jac.apply(dir);

      const double step = 1e-6 * s.state.profile.d;
      HeightField hp = base, hm = base;
      for (std::size_t k = 0; k < dir.size(); ++k) {
        hp.h[k] += step * dir[k];
        hm.h[k] -= step * dir[k];
      }
      const auto rp = residual(hp, s.state, 0.4);
      const auto rm = residual(hm, s.state, 0.4);
      double worst = 0.0;
      for (std::size_t k = 0; k < dir.size(); ++k)
        worst = std::max(worst,
                         std::abs((rp.r[k] - rm.r[k]) / (2.0 * step) - jv[k]));
      CHECK(worst / max_abs(jv) < 1e-6);
    }
  }
}

TEST_CASE("jacobian action on a p-only direction matches the 1-D formula") {
  auto s = make_setup(still_water(1.3), 17, 61, 25.0);
  const auto base = trivial_field(s.state, s.grid);
  const auto jac = jacobian(base, s.state, 0.0);
  const auto hs = sample_height(s.state, s.grid);

  std::vector<double> dir(base.h.size());
  for (int j = 0; j < s.grid.nq; ++j)
    for (int i = 0; i < s.grid.np; ++i)
      dir[static_cast<std::size_t>(s.grid.index(j, i))] =
          hs[static_cast<std::size_t>(i)];
  const auto jv = jac.apply(dir);

  // d/dt of the flux difference at h = (1+t) H: interior rows reduce to the
  // one-dimensional derivative of 1/H_p^2 (discrete midpoint differences).
  const double dp = s.grid.dp;
  auto dh = [&](int i) {
    return (hs[static_cast<std::size_t>(i + 1)] -
            hs[static_cast<std::size_t>(i)]) /
           dp;
  };
  for (int i = 1; i + 1 < s.grid.np; ++i) {
    const double expected =
        (1.0 / (dh(i) * dh(i)) - 1.0 / (dh(i - 1) * dh(i - 1))) / dp;
    const int j = s.grid.nq / 2;
    CHECK(jv[static_cast<std::size_t>(s.grid.index(j, i))] ==
          doctest::Approx(expected).epsilon(1e-10));
  }

  // Zero direction maps to zero.
  std::vector<double> zero(base.h.size(), 0.0);
  CHECK(max_abs(jac.apply(zero)) == 0.0);
}

TEST_CASE("initial guess: trivial at r = 0, exponentially small far field") {
  auto s = make_setup(still_water(1.2), 33, 201, 25.0);
  const auto flat = initial_guess(s.state, s.spectrum, 0.0, s.grid);
  const auto base = trivial_field(s.state, s.grid);
  for (std::size_t k = 0; k < flat.h.size(); ++k) CHECK(flat.h[k] == base.h[k]);

  const double r = 0.05;
  const auto seed = initial_guess(s.state, s.spectrum, r, s.grid);
  CHECK(seed.at(0, s.grid.np - 1) - s.state.profile.d ==
        doctest::Approx(r).epsilon(1e-12));
  // Bottom row stays exactly zero.
  for (int j = 0; j < s.grid.nq; ++j) CHECK(seed.at(j, 0) == 0.0);

  const double rate = std::sqrt(s.spectrum.mu[0]);
  double phi_max = 0.0;
  for (double v : s.spectrum.phi1) phi_max = std::max(phi_max, std::abs(v));
  const double tail_bound =
      4.0 * r * phi_max * std::exp(-rate * s.grid.half_length) * (1.0 + 1e-9);
  for (int i = 0; i < s.grid.np; ++i)
    CHECK(std::abs(seed.at(s.grid.nq - 1, i) - base.at(s.grid.nq - 1, i)) <=
          tail_bound);

  // Log-linear fit of the guess's surface trace recovers the decay rate.
  std::vector<double> xs, ys;
  for (int j = 0; j < s.grid.nq; ++j) {
    const double q = s.grid.q(j);
    if (q < 0.5 * s.grid.half_length || q > 0.9 * s.grid.half_length) continue;
    const double trace = seed.at(j, s.grid.np - 1) - s.state.profile.d;
    if (trace <= 1e-13 * r) continue;  // representable-tail floor
    xs.push_back(q);
    ys.push_back(std::log(trace));
  }
  const auto fit = num::fit_line(xs, ys);
  CHECK(std::abs(-fit.slope - rate) / rate < 0.01);
}

TEST_CASE("initial guess refuses subcritical states") {
  const auto st = build_asymptotic_state(still_water(0.9), 33);
  const auto spec = solve_sturm(st);
  const auto grid = StripGrid::half(30.0, 101, 33, st.flux);
  CHECK_THROWS_AS(initial_guess(st, spec, 0.05, grid), SubcriticalSeedError);
}

TEST_CASE("newton: exact guess converges in zero iterations") {
  auto s = make_setup(still_water(1.2), 17, 61, 25.0);
  const auto sol = newton_solve(trivial_field(s.state, s.grid), s.state, 0.0);
  CHECK(sol.converged);
  CHECK(sol.newton_iters == 0);
  CHECK(sol.residual_norm == 0.0);
  CHECK(sol.amplitude == 0.0);
}

TEST_CASE("newton: irrotational F = 1.05 wave of elevation") {
  auto s = make_setup(still_water(1.05), 33, 301);
  const auto seed = initial_guess(s.state, s.spectrum, 0.08, s.grid);
  const auto sol = newton_solve(seed, s.state, 0.0);
  REQUIRE(sol.converged);
  CHECK(sol.newton_iters <= 12);
  CHECK(sol.residual_norm < 1e-10);

  // Elevation with amplitude inside the Bernoulli cap.
  CHECK(sol.amplitude > 0.0);
  CHECK(s.state.profile.g * sol.amplitude <
        0.5 * s.state.bernoulli_const);
  // Strict elevation where the tail is resolvable; the sub-roundoff far
  // field may carry O(100 eps) noise of either sign.
  double min_eta_resolvable = 1e30, min_eta = 1e30;
  for (int j = 0; j + 1 < s.grid.nq; ++j) {
    min_eta = std::min(min_eta, sol.surface_eta(j));
    if (s.grid.q(j) <= 0.5 * s.grid.half_length)
      min_eta_resolvable = std::min(min_eta_resolvable, sol.surface_eta(j));
  }
  CHECK(min_eta_resolvable > 0.0);
  CHECK(min_eta > -1e-12 * s.state.profile.d);

  // Russell's empirical amplitude law holds to ~15 percent here.
  const double froude = s.state.froude;
  CHECK(std::abs(froude * froude - 1.0 - sol.amplitude / s.state.profile.d) <
        0.15 * (froude * froude - 1.0));
}

TEST_CASE("newton: depression-shaped seeds cannot produce depression waves") {
  auto s = make_setup(still_water(1.05), 33, 301);
  const auto seed = initial_guess(s.state, s.spectrum, -0.08, s.grid);
  const auto sol = newton_solve(seed, s.state, 0.0);
  if (sol.converged) {
    double min_eta = 1e30, max_eta = -1e30;
    for (int j = 0; j + 1 < s.grid.nq; ++j) {
      min_eta = std::min(min_eta, sol.surface_eta(j));
      max_eta = std::max(max_eta, sol.surface_eta(j));
    }
    const bool depression = min_eta < -1e-8 && max_eta < 1e-8;
    CHECK_FALSE(depression);
  }
}

TEST_CASE("truncation error of the scheme is second order (injection)") {
  auto s = make_setup(still_water(1.1), 33, 401);
  const auto sol =
      newton_solve(initial_guess(s.state, s.spectrum, 0.15, s.grid), s.state,
                   0.0, {.tol_scale = 1e-12});
  REQUIRE(sol.converged);

  auto restrict_field = [&](int factor) {
    StripGrid coarse = StripGrid::half(s.grid.half_length,
                                       (s.grid.nq - 1) / factor + 1,
                                       (s.grid.np - 1) / factor + 1,
                                       s.grid.strip_depth);
    HeightField f;
    f.grid = coarse;
    f.h.resize(static_cast<std::size_t>(coarse.size()));
    for (int j = 0; j < coarse.nq; ++j)
      for (int i = 0; i < coarse.np; ++i)
        f.at(j, i) = sol.field.at(j * factor, i * factor);
    return f;
  };
  const double tau2 =
      residual_norm(residual(restrict_field(2), s.state, 0.0), s.state);
  const double tau4 =
      residual_norm(residual(restrict_field(4), s.state, 0.0), s.state);
  const double order = std::log2(tau4 / tau2);
  CHECK(order > 1.8);
}

TEST_CASE("half-domain and full-domain solves agree") {
  const int np = 17, nq_half = 201;
  auto s = make_setup(still_water(1.1), np, nq_half);
  const auto half_sol = newton_solve(
      initial_guess(s.state, s.spectrum, 0.15, s.grid), s.state, 0.0,
      {.tol_scale = 1e-12});
  REQUIRE(half_sol.converged);

  const auto full_grid = StripGrid::full(s.grid.half_length, 2 * nq_half - 1,
                                         np, s.state.flux);
  const auto full_sol = newton_solve(
      initial_guess(s.state, s.spectrum, 0.15, full_grid), s.state, 0.0,
      {.tol_scale = 1e-12});
  REQUIRE(full_sol.converged);
  CHECK(std::abs(half_sol.amplitude - full_sol.amplitude) < 1e-8);
}

TEST_CASE("domain truncation sensitivity is exponentially small") {
  // At L = 12/sqrt(mu1) the truncation bound 10 exp(-sqrt(mu1) L) ~ 6e-5
  // dominates the solver tolerance; compare with the 1.25 L solve on the
  // same spacing.
  const auto profile = still_water(1.1);
  auto s1 = make_setup(profile, 17, 241, 12.0);
  const auto a = newton_solve(
      initial_guess(s1.state, s1.spectrum, 0.15, s1.grid), s1.state, 0.0,
      {.tol_scale = 1e-12});
  REQUIRE(a.converged);

  const double L2 = 1.25 * s1.grid.half_length;
  const auto grid2 = StripGrid::half(L2, 301, 17, s1.state.flux);
  const auto b = newton_solve(
      initial_guess(s1.state, s1.spectrum, 0.15, grid2), s1.state, 0.0,
      {.tol_scale = 1e-12});
  REQUIRE(b.converged);

  const double bound =
      10.0 * std::exp(-std::sqrt(s1.spectrum.mu[0]) * s1.grid.half_length);
  CHECK(std::abs(a.amplitude - b.amplitude) < bound);
}

TEST_CASE("reflect_full mirrors the field and keeps the residual") {
  auto s = make_setup(still_water(1.1), 17, 121, 20.0);
  const auto sol = newton_solve(
      initial_guess(s.state, s.spectrum, 0.1, s.grid), s.state, 0.0);
  REQUIRE(sol.converged);
  const auto full = reflect_full(sol);
  CHECK(full.field.grid.nq == 2 * s.grid.nq - 1);
  for (int j = 0; j < full.field.grid.nq; ++j) {
    const int jh = std::abs(j - (s.grid.nq - 1));
    for (int i = 0; i < s.grid.np; ++i)
      CHECK(full.field.at(j, i) == sol.field.at(jh, i));
  }
  CHECK(full.residual_norm < 10.0 * sol.tolerance);
}
