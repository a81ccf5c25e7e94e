#include "solwave/diagnostics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace solwave {

namespace {

// Node-centred second-order derivative tables on the reflected full grid,
// applied identically to h and to the background samples so that the trivial
// wave evaluates to exactly zero in every identity.
struct Work {
  WaveSolution sol;  // full-line
  StripGrid grid;
  std::vector<double> hs;       // background H samples
  std::vector<double> dh_node;  // H_p by the node stencils
  std::vector<double> hp, hq;   // h_p, h_q at nodes (q-major)
  std::vector<double> eta;
  std::vector<double> gamma_p, gamma_int_p;  // vorticity and antiderivative
  double lambda = 0.0;

  double at_hp(int j, int i) const {
    return hp[static_cast<std::size_t>(grid.index(j, i))];
  }
  double at_hq(int j, int i) const {
    return hq[static_cast<std::size_t>(grid.index(j, i))];
  }
};

Work make_work(const WaveSolution& input) {
  Work w;
  w.sol = reflect_full(input);
  w.grid = w.sol.field.grid;
  const StripGrid& g = w.grid;
  const AsymptoticState& st = w.sol.state;
  w.hs = sample_height(st, g);
  w.lambda = st.bernoulli_const;

  const int nq = g.nq, np = g.np;
  const double dp = g.dp, dq = g.dq;
  auto dnode = [&](auto&& value, int k, int n, double dx) {
    if (k == 0)
      return (-3.0 * value(0) + 4.0 * value(1) - value(2)) / (2.0 * dx);
    if (k == n - 1)
      return (3.0 * value(n - 1) - 4.0 * value(n - 2) + value(n - 3)) /
             (2.0 * dx);
    return (value(k + 1) - value(k - 1)) / (2.0 * dx);
  };

  w.dh_node.resize(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i)
    w.dh_node[static_cast<std::size_t>(i)] = dnode(
        [&](int k) { return w.hs[static_cast<std::size_t>(k)]; }, i, np, dp);

  w.hp.resize(static_cast<std::size_t>(g.size()));
  w.hq.resize(static_cast<std::size_t>(g.size()));
  for (int j = 0; j < nq; ++j) {
    for (int i = 0; i < np; ++i) {
      w.hp[static_cast<std::size_t>(g.index(j, i))] = dnode(
          [&](int k) { return w.sol.field.at(j, k); }, i, np, dp);
      w.hq[static_cast<std::size_t>(g.index(j, i))] = dnode(
          [&](int k) { return w.sol.field.at(k, i); }, j, nq, dq);
    }
  }

  w.eta.resize(static_cast<std::size_t>(nq));
  for (int j = 0; j < nq; ++j)
    w.eta[static_cast<std::size_t>(j)] =
        w.sol.field.at(j, np - 1) - w.hs[static_cast<std::size_t>(np - 1)];

  w.gamma_p.resize(static_cast<std::size_t>(np));
  w.gamma_int_p.resize(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) {
    w.gamma_p[static_cast<std::size_t>(i)] = st.vorticity_at(g.p(i));
    w.gamma_int_p[static_cast<std::size_t>(i)] =
        st.vorticity_integral_at(g.p(i));
  }
  return w;
}

double trap_q(const Work& w, const std::vector<double>& f) {
  return num::integrate_trapezoid(f, w.grid.dq);
}

// Double integral: Simpson over p per column, trapezoid in q.
template <typename F>
double integrate_strip(const Work& w, F&& integrand) {
  const int nq = w.grid.nq, np = w.grid.np;
  std::vector<double> per_col(static_cast<std::size_t>(nq));
  std::vector<double> col(static_cast<std::size_t>(np));
  for (int j = 0; j < nq; ++j) {
    for (int i = 0; i < np; ++i)
      col[static_cast<std::size_t>(i)] = integrand(j, i);
    per_col[static_cast<std::size_t>(j)] =
        num::integrate_simpson(col, w.grid.dp);
  }
  return trap_q(w, per_col);
}

IdentityRecord finish_record(std::string name,
                             std::vector<std::pair<std::string, double>> terms,
                             double scale_floor) {
  IdentityRecord rec;
  rec.name = std::move(name);
  rec.terms = std::move(terms);
  rec.total = 0.0;
  rec.scale = 0.0;
  for (const auto& [label, value] : rec.terms) {
    rec.total += value;
    rec.scale = std::max(rec.scale, std::abs(value));
  }
  // Below the floor the identity holds at noise level; report zero rather
  // than a noise-over-noise ratio.
  rec.residual =
      rec.scale > scale_floor ? std::abs(rec.total) / rec.scale : 0.0;
  return rec;
}

double identity_scale_floor(const AsymptoticState& st) {
  const double d = st.profile.d;
  return 1e-12 * d * d;
}

// The shared positive-form integrand of the lower-bound identity, with an
// optional extra 1/H_p^2 weight (the companion identity).
double positive_form(const Work& w, int j, int i, bool weighted) {
  const double hp = w.at_hp(j, i);
  const double hq = w.at_hq(j, i);
  const double dh = w.dh_node[static_cast<std::size_t>(i)];
  const double diff = hp - dh;
  double value = (dh * dh * dh * hq * hq + (2.0 * hp + dh) * diff * diff) /
                 (2.0 * hp * hp);
  if (weighted) value /= dh * dh;
  return value;
}

double mass_eta(const Work& w) { return trap_q(w, w.eta); }

double mass_eta_sq(const Work& w) {
  std::vector<double> f(w.eta.size());
  for (std::size_t k = 0; k < w.eta.size(); ++k) f[k] = w.eta[k] * w.eta[k];
  return trap_q(w, f);
}

IdentityRecord identity_lower_impl(const Work& w, const std::string& name) {
  const AsymptoticState& st = w.sol.state;
  const double froude = st.froude;
  const double t1 = (1.0 / (froude * froude) - 1.0) * mass_eta(w);
  const double t2 = integrate_strip(
      w, [&](int j, int i) { return positive_form(w, j, i, false); });
  return finish_record(
      name, {{"supercritical_deficit_times_mass", t1}, {"positive_form", t2}},
      identity_scale_floor(st));
}

double starr_ratio_residual(const Work& w, double tension_term) {
  const AsymptoticState& st = w.sol.state;
  const double d = st.profile.d;
  const double f2m1 = st.froude * st.froude - 1.0;
  const double m1 = mass_eta(w);
  if (std::abs(m1) < 1e-12 * d * d)
    return std::numeric_limits<double>::quiet_NaN();
  const double ratio = 1.5 / d * mass_eta_sq(w) / m1 + tension_term / m1;
  return std::abs(f2m1 - ratio) / std::abs(f2m1);
}

}  // namespace

bool is_irrotational(const AsymptoticState& state) {
  double worst = 0.0;
  for (double g : state.vorticity) worst = std::max(worst, std::abs(g));
  const double scale =
      std::sqrt(state.profile.g / state.profile.d);  // 1/time
  return worst < 1e-10 * scale;
}

PhysicalFields recover_physical(const WaveSolution& sol) {
  Work w = make_work(sol);
  PhysicalFields out;
  out.grid = w.grid;
  const double c = w.sol.state.profile.c;
  out.u.resize(w.hp.size());
  out.v.resize(w.hp.size());
  out.eta = w.eta;
  out.sup_u_over_c = -std::numeric_limits<double>::infinity();
  out.stagnation_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < w.hp.size(); ++k) {
    const double hp = w.hp[k];
    if (!(hp > 0.0))
      throw DegenerateFieldError("recover_physical: nonpositive h_p");
    out.u[k] = c - 1.0 / hp;
    out.v[k] = -w.hq[k] / hp;
    out.sup_u_over_c = std::max(out.sup_u_over_c, out.u[k] / c);
    out.stagnation_margin =
        std::min(out.stagnation_margin, (c - out.u[k]) / c);
  }
  return out;
}

double bernoulli_residual(const WaveSolution& sol) {
  Work w = make_work(sol);
  const AsymptoticState& st = w.sol.state;
  const StripGrid& g = w.grid;
  const int N = g.np - 1;
  const double gd = st.profile.g * st.profile.d;

  // Interior pressure is reconstructed from Bernoulli's law, so its interior
  // residual vanishes identically; only the surface value is informative.
  double worst = 0.0;
  for (int j = 0; j < g.nq; ++j) {
    const double hp = w.at_hp(j, N);
    const double hq = w.at_hq(j, N);
    const double y_surface = w.sol.field.at(j, N) - st.profile.d;
    double p_surface = 0.5 * w.lambda -
                       (1.0 + hq * hq) / (2.0 * hp * hp) -
                       st.profile.g * y_surface;
    if (sol.sigma != 0.0 && j > 0 && j + 1 < g.nq) {
      auto slope = [&](int jj) {
        return (w.sol.field.at(jj + 1, N) - w.sol.field.at(jj, N)) / g.dq;
      };
      auto wterm = [](double t) { return t / std::sqrt(1.0 + t * t); };
      p_surface += sol.sigma * (wterm(slope(j)) - wterm(slope(j - 1))) / g.dq;
    }
    worst = std::max(worst, std::abs(p_surface));
  }
  return worst / gd;
}

FlowForceRecord flow_force(const WaveSolution& sol) {
  Work w = make_work(sol);
  const AsymptoticState& st = w.sol.state;
  const StripGrid& g = w.grid;
  const double d = st.profile.d;

  FlowForceRecord rec;
  rec.per_column.resize(static_cast<std::size_t>(g.nq));
  std::vector<double> col(static_cast<std::size_t>(g.np));
  for (int j = 0; j < g.nq; ++j) {
    for (int i = 0; i < g.np; ++i) {
      const double hp = w.at_hp(j, i);
      const double hq = w.at_hq(j, i);
      const double h = w.sol.field.at(j, i);
      const double integrand = 0.5 * w.lambda +
                               w.gamma_int_p[static_cast<std::size_t>(i)] +
                               (1.0 - hq * hq) / (2.0 * hp * hp) -
                               st.profile.g * (h - d);
      col[static_cast<std::size_t>(i)] = integrand * hp;
    }
    rec.per_column[static_cast<std::size_t>(j)] =
        num::integrate_simpson(col, g.dp);
  }

  std::vector<double> gamma_h(static_cast<std::size_t>(g.np));
  for (int i = 0; i < g.np; ++i)
    gamma_h[static_cast<std::size_t>(i)] =
        w.gamma_p[static_cast<std::size_t>(i)] *
        w.hs[static_cast<std::size_t>(i)];
  rec.formula = -2.0 * num::integrate_simpson(gamma_h, g.dp) +
                w.lambda * d + 0.5 * st.profile.g * d * d;

  const auto [mn, mx] =
      std::minmax_element(rec.per_column.begin(), rec.per_column.end());
  double mean = 0.0;
  for (double s : rec.per_column) mean += s;
  mean /= static_cast<double>(rec.per_column.size());
  const double scale = std::max(std::abs(mean), 1e-300);
  rec.column_spread = (*mx - *mn) / scale;
  rec.formula_gap = std::abs(mean - rec.formula) / std::abs(rec.formula);
  return rec;
}

IdentityRecord identity_lower(const WaveSolution& sol) {
  Work w = make_work(sol);
  return identity_lower_impl(w, "identity_lower");
}

IdentityRecord identity_classic(const WaveSolution& sol) {
  Work w = make_work(sol);
  const AsymptoticState& st = w.sol.state;
  const double gd = st.profile.g * st.profile.d;
  const double a = (w.lambda - gd) * mass_eta(w);
  const double b = -1.5 * st.profile.g * mass_eta_sq(w);
  const double c = -2.0 * integrate_strip(w, [&](int j, int i) {
    return w.gamma_p[static_cast<std::size_t>(i)] *
           (w.sol.field.at(j, i) - w.hs[static_cast<std::size_t>(i)]);
  });
  auto rec = finish_record("identity_classic",
                           {{"bernoulli_excess_times_mass", a},
                            {"mass_eta_sq_term", b},
                            {"vorticity_term", c}},
                           st.profile.g * identity_scale_floor(st));
  rec.defined = (sol.sigma == 0.0);
  return rec;
}

IdentityRecord identity_extra(const WaveSolution& sol) {
  Work w = make_work(sol);
  const AsymptoticState& st = w.sol.state;
  const double a = 1.5 * st.profile.g * mass_eta_sq(w);
  const double b = -integrate_strip(
      w, [&](int j, int i) { return positive_form(w, j, i, true); });
  auto rec = finish_record(
      "identity_extra", {{"mass_eta_sq_term", a}, {"weighted_positive_form", b}},
      st.profile.g * identity_scale_floor(st));
  rec.defined = (sol.sigma == 0.0);
  return rec;
}

IdentityRecord identity_tension(const WaveSolution& sol) {
  // The surface-tension flux integrates to a boundary term that vanishes in
  // the far field, so the lower-bound identity is evaluated unchanged.
  Work w = make_work(sol);
  return identity_lower_impl(w, "identity_tension");
}

std::vector<BoundVerdict> check_bounds(const WaveSolution& sol) {
  Work w = make_work(sol);
  const AsymptoticState& st = w.sol.state;
  const double d = st.profile.d;
  const double g = st.profile.g;
  const double froude = st.froude;
  const double lam_ratio = st.lambda_ratio;
  const double ratio_cap = 2.0 / std::sqrt(3.0);
  const double eta_floor = 1e-13 * d;

  double max_eta = -std::numeric_limits<double>::infinity();
  double min_eta = std::numeric_limits<double>::infinity();
  for (int j = 0; j < w.grid.nq; ++j) {
    if (w.grid.far_column(j)) continue;  // Dirichlet closure columns
    max_eta = std::max(max_eta, w.eta[static_cast<std::size_t>(j)]);
    min_eta = std::min(min_eta, w.eta[static_cast<std::size_t>(j)]);
  }
  const double mass = mass_eta(w);
  const bool elevation = max_eta > eta_floor && min_eta > -eta_floor;
  const bool depression = min_eta < -eta_floor && max_eta < eta_floor;
  const bool nontrivial = elevation || depression ||
                          std::max(std::abs(max_eta), std::abs(min_eta)) >
                              eta_floor;
  const bool irrot = is_irrotational(st) && sol.sigma == 0.0;

  std::vector<BoundVerdict> rows;
  rows.push_back({"froude_supercritical_for_elevation", froude, 1.0,
                  froude > 1.0, elevation});
  rows.push_back({"froude_subcritical_for_depression", froude, 1.0,
                  froude < 1.0, depression});
  {
    const bool app = lam_ratio < ratio_cap && elevation && sol.sigma == 0.0;
    const double cap =
        lam_ratio < ratio_cap
            ? 1.0 / std::sqrt(1.0 - 0.75 * lam_ratio * lam_ratio)
            : std::numeric_limits<double>::quiet_NaN();
    rows.push_back({"froude_cap_from_depth_ratio", froude, cap,
                    !(froude >= cap), app});
  }
  rows.push_back({"amplitude_below_bernoulli_cap", max_eta / d,
                  w.lambda / (2.0 * g * d),
                  max_eta / d < w.lambda / (2.0 * g * d), nontrivial});
  {
    const bool app = lam_ratio < ratio_cap && elevation && sol.sigma == 0.0;
    const double cap =
        lam_ratio < ratio_cap
            ? lam_ratio * lam_ratio / (2.0 * (1.0 - 0.75 * lam_ratio * lam_ratio))
            : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(
        {"amplitude_cap_from_depth_ratio", max_eta / d, cap,
         !(max_eta / d >= cap), app});
    rows.push_back({"surface_speed_below_ratio_cap", w.lambda / (2.0 * g * d),
                    cap, !(w.lambda / (2.0 * g * d) >= cap), app});
  }
  rows.push_back({"mass_positive_when_supercritical", mass, 0.0, mass > 0.0,
                  nontrivial && froude > 1.0});
  rows.push_back({"mass_negative_when_subcritical", mass, 0.0, mass < 0.0,
                  nontrivial && froude < 1.0});
  rows.push_back({"irrotational_froude_below_two", froude, 2.0, froude < 2.0,
                  irrot && elevation});
  rows.push_back({"irrotational_russell_improved", froude * froude,
                  1.0 + max_eta / d, froude * froude < 1.0 + max_eta / d,
                  irrot && elevation});
  return rows;
}

ShapeReport shape_checks(const WaveSolution& sol,
                         const SturmSpectrum& spectrum) {
  Work w = make_work(sol);
  const StripGrid& g = w.grid;
  const double d = w.sol.state.profile.d;
  ShapeReport rep;

  double amp = 0.0;
  for (double e : w.eta) amp = std::max(amp, std::abs(e));

  // Crest centering by the parabola through the discrete extremum.
  std::size_t jmax = 0;
  for (std::size_t j = 1; j < w.eta.size(); ++j)
    if (std::abs(w.eta[j]) > std::abs(w.eta[jmax])) jmax = j;
  double qc = g.q(static_cast<int>(jmax));
  if (jmax > 0 && jmax + 1 < w.eta.size()) {
    const double em = w.eta[jmax - 1], e0 = w.eta[jmax], ep = w.eta[jmax + 1];
    const double denom = em - 2.0 * e0 + ep;
    if (denom != 0.0) qc += 0.5 * g.dq * (em - ep) / denom;
  }
  rep.crest_q = qc;

  if (qc == 0.0) {
    // Exactly centered (always the case for reflected half solutions):
    // compare mirrored samples directly.
    const int nq = g.nq;
    rep.symmetry_error = 0.0;
    for (int j = 0; j < nq; ++j)
      rep.symmetry_error = std::max(
          rep.symmetry_error, std::abs(w.eta[static_cast<std::size_t>(j)] -
                                       w.eta[static_cast<std::size_t>(
                                           nq - 1 - j)]));
  } else {
    std::vector<double> qgrid(w.eta.size());
    for (int j = 0; j < g.nq; ++j)
      qgrid[static_cast<std::size_t>(j)] = g.q(j);
    num::PchipSpline eta_of_q(qgrid, w.eta);
    rep.symmetry_error = 0.0;
    const double reach =
        std::min(g.half_length - qc, g.half_length + qc);
    for (int j = 0; j < g.nq; ++j) {
      const double x = g.q(j) - qc;
      if (std::abs(x) > reach) continue;
      rep.symmetry_error = std::max(
          rep.symmetry_error, std::abs(eta_of_q(qc + x) - eta_of_q(qc - x)));
    }
  }

  // Monotone decay away from the crest: count resolvable increases of the
  // displacement magnitude on the right half.
  const double mono_tol = 100.0 * std::numeric_limits<double>::epsilon() * d;
  const double crest_sign = w.eta[jmax] >= 0.0 ? 1.0 : -1.0;
  rep.monotonicity_violations = 0;
  for (int j = 0; j + 1 < g.nq; ++j) {
    if (g.q(j) < std::max(qc, 0.0)) continue;
    const double step = crest_sign * (w.eta[static_cast<std::size_t>(j + 1)] -
                                      w.eta[static_cast<std::size_t>(j)]);
    if (step > mono_tol) ++rep.monotonicity_violations;
  }

  rep.expected_decay_rate =
      spectrum.mu.empty() || !(spectrum.mu[0] > 0.0)
          ? std::numeric_limits<double>::quiet_NaN()
          : std::sqrt(spectrum.mu[0]);
  rep.fit_ok = false;
  if (amp >= 1e-10 * d) {
    // Log-linear tail fit on [L/2, 0.9 L], clipped to samples that stand
    // clear of the numerical noise plateau (measured from the far tail,
    // where the true solution is far below roundoff).
    double plateau = 0.0;
    for (int j = 0; j < g.nq; ++j) {
      const double q = g.q(j);
      if (q < 0.93 * g.half_length || q > 0.97 * g.half_length) continue;
      plateau = std::max(plateau, std::abs(w.eta[static_cast<std::size_t>(j)]));
    }
    const double floor_fit =
        std::max({100.0 * plateau, 1e-14 * d, 1e-13 * amp});
    std::vector<double> xs, ys;
    for (int j = 0; j < g.nq; ++j) {
      const double q = g.q(j);
      if (q < 0.5 * g.half_length || q > 0.9 * g.half_length) continue;
      const double e = std::abs(w.eta[static_cast<std::size_t>(j)]);
      if (e <= floor_fit) continue;
      xs.push_back(q);
      ys.push_back(std::log(e));
    }
    if (xs.size() >= 8) {
      const auto fit = num::fit_line(xs, ys);
      rep.fitted_decay_rate = -fit.slope;
      rep.fit_window_lo = xs.front();
      rep.fit_window_hi = xs.back();
      rep.fit_ok = true;
      if (std::isfinite(rep.expected_decay_rate))
        rep.decay_gap = std::abs(rep.fitted_decay_rate -
                                 rep.expected_decay_rate) /
                        rep.expected_decay_rate;
    }
  }
  return rep;
}

bool DiagnosticsReport::all_applicable_bounds_hold() const {
  for (const auto& row : bounds)
    if (row.applicable && !row.holds) return false;
  return true;
}

DiagnosticsReport run_diagnostics(const WaveSolution& sol,
                                  const SturmSpectrum* spectrum) {
  Work w = make_work(sol);
  DiagnosticsReport rep;
  rep.froude = w.sol.state.froude;
  rep.lambda_ratio = w.sol.state.lambda_ratio;
  rep.sigma = sol.sigma;
  rep.mass = mass_eta(w);
  rep.mass_eta2 = mass_eta_sq(w);

  rep.amplitude = -std::numeric_limits<double>::infinity();
  rep.min_eta = std::numeric_limits<double>::infinity();
  for (int j = 0; j < w.grid.nq; ++j) {
    if (w.grid.far_column(j)) continue;
    rep.amplitude = std::max(rep.amplitude, w.eta[static_cast<std::size_t>(j)]);
    rep.min_eta = std::min(rep.min_eta, w.eta[static_cast<std::size_t>(j)]);
  }

  const PhysicalFields fields = recover_physical(sol);
  rep.sup_u_over_c = fields.sup_u_over_c;

  rep.bernoulli_surface_residual = bernoulli_residual(sol);
  rep.bernoulli_interior_residual = 0.0;  // by construction of the pressure
  rep.flow_force = flow_force(sol);
  rep.identity_lower = identity_lower(sol);
  rep.identity_classic = identity_classic(sol);
  rep.identity_extra = identity_extra(sol);
  rep.identity_tension = identity_tension(sol);

  // Intermediate relation: the classic and companion identities add up to
  // it, so its record is the (negated) sum of already-computed terms.
  {
    std::vector<std::pair<std::string, double>> terms;
    for (const auto& [label, value] : rep.identity_classic.terms)
      if (label != "mass_eta_sq_term") terms.emplace_back(label, -value);
    for (const auto& [label, value] : rep.identity_extra.terms)
      if (label != "mass_eta_sq_term") terms.emplace_back(label, -value);
    rep.identity_sum =
        finish_record("identity_intermediate", std::move(terms),
                      w.sol.state.profile.g * identity_scale_floor(w.sol.state));
    rep.identity_sum.defined = rep.identity_classic.defined;
  }

  if (is_irrotational(w.sol.state)) {
    if (sol.sigma == 0.0) {
      const double r = starr_ratio_residual(w, 0.0);
      if (std::isfinite(r)) rep.starr_residual = r;
    } else {
      std::vector<double> arc(w.eta.size());
      const int N = w.grid.np - 1;
      for (int j = 0; j < w.grid.nq; ++j) {
        const double ex = w.at_hq(j, N);
        arc[static_cast<std::size_t>(j)] = std::sqrt(1.0 + ex * ex) - 1.0;
      }
      const double tension_term = sol.sigma /
                                  (w.sol.state.profile.g * w.sol.state.profile.d) *
                                  trap_q(w, arc);
      const double r = starr_ratio_residual(w, tension_term);
      if (std::isfinite(r)) rep.starr_tension_residual = r;
    }
  }

  rep.bounds = check_bounds(sol);
  if (spectrum != nullptr) {
    rep.shape = shape_checks(sol, *spectrum);
  } else {
    SturmSpectrum empty;
    rep.shape = shape_checks(sol, empty);
  }
  return rep;
}

namespace {

using nlohmann::json;

json record_to_json(const IdentityRecord& rec) {
  json terms = json::object();
  for (const auto& [label, value] : rec.terms) terms[label] = value;
  return json{{"name", rec.name},
              {"terms", terms},
              {"total", rec.total},
              {"scale", rec.scale},
              {"relative_residual", rec.residual},
              {"defined", rec.defined}};
}

}  // namespace

std::string report_to_json_text(const DiagnosticsReport& rep) {
  json j;
  j["froude"] = rep.froude;
  j["lambda_ratio"] = rep.lambda_ratio;
  j["sigma"] = rep.sigma;
  j["amplitude"] = rep.amplitude;
  j["min_eta"] = rep.min_eta;
  j["mass"] = rep.mass;
  j["mass_eta2"] = rep.mass_eta2;
  j["sup_u_over_c"] = rep.sup_u_over_c;
  j["bernoulli_surface_residual"] = rep.bernoulli_surface_residual;
  j["bernoulli_interior_residual"] = rep.bernoulli_interior_residual;
  j["flow_force"] = {{"formula", rep.flow_force.formula},
                     {"column_spread", rep.flow_force.column_spread},
                     {"formula_gap", rep.flow_force.formula_gap},
                     {"per_column", rep.flow_force.per_column}};
  j["identities"] = json::array({record_to_json(rep.identity_lower),
                                 record_to_json(rep.identity_classic),
                                 record_to_json(rep.identity_extra),
                                 record_to_json(rep.identity_sum),
                                 record_to_json(rep.identity_tension)});
  if (rep.starr_residual) j["starr_residual"] = *rep.starr_residual;
  if (rep.starr_tension_residual)
    j["starr_tension_residual"] = *rep.starr_tension_residual;
  j["bounds"] = json::array();
  for (const auto& row : rep.bounds)
    j["bounds"].push_back({{"name", row.name},
                           {"lhs", row.lhs},
                           {"rhs", row.rhs},
                           {"holds", row.holds},
                           {"applicable", row.applicable}});
  j["shape"] = {{"symmetry_error", rep.shape.symmetry_error},
                {"crest_q", rep.shape.crest_q},
                {"monotonicity_violations", rep.shape.monotonicity_violations},
                {"fitted_decay_rate", rep.shape.fitted_decay_rate},
                {"expected_decay_rate", rep.shape.expected_decay_rate},
                {"decay_gap", rep.shape.decay_gap},
                {"fit_ok", rep.shape.fit_ok}};
  return j.dump(2);
}

std::string report_to_csv_text(const DiagnosticsReport& rep,
                               double identity_tol, double flow_force_tol) {
  std::ostringstream os;
  os << "name,lhs,rhs,residual,verdict\n";
  auto fmt = [&](double v) { return num::format_g17(v); };
  for (const auto& row : rep.bounds) {
    os << row.name << ',' << fmt(row.lhs) << ',' << fmt(row.rhs) << ",,"
       << (row.applicable ? (row.holds ? "pass" : "fail") : "n/a") << '\n';
  }
  auto identity_row = [&](const IdentityRecord& rec) {
    os << rec.name << ',' << fmt(rec.total) << ",0," << fmt(rec.residual)
       << ','
       << (rec.defined ? (rec.residual <= identity_tol ? "pass" : "fail")
                       : "n/a")
       << '\n';
  };
  identity_row(rep.identity_lower);
  identity_row(rep.identity_classic);
  identity_row(rep.identity_extra);
  identity_row(rep.identity_sum);
  identity_row(rep.identity_tension);
  if (rep.starr_residual)
    os << "starr_ratio," << fmt(*rep.starr_residual) << ','
       << fmt(identity_tol) << ',' << fmt(*rep.starr_residual) << ','
       << (*rep.starr_residual <= identity_tol ? "pass" : "fail") << '\n';
  if (rep.starr_tension_residual)
    os << "starr_ratio_tension," << fmt(*rep.starr_tension_residual) << ','
       << fmt(identity_tol) << ',' << fmt(*rep.starr_tension_residual) << ','
       << (*rep.starr_tension_residual <= identity_tol ? "pass" : "fail")
       << '\n';
  os << "flow_force_column_spread," << fmt(rep.flow_force.column_spread) << ','
     << fmt(flow_force_tol) << ',' << fmt(rep.flow_force.column_spread) << ','
     << (rep.flow_force.column_spread <= flow_force_tol ? "pass" : "fail")
     << '\n';
  os << "flow_force_formula_gap," << fmt(rep.flow_force.formula_gap) << ','
     << fmt(flow_force_tol) << ',' << fmt(rep.flow_force.formula_gap) << ','
     << (rep.flow_force.formula_gap <= flow_force_tol ? "pass" : "fail")
     << '\n';
  os << "bernoulli_surface_residual," << fmt(rep.bernoulli_surface_residual)
     << ',' << fmt(identity_tol) << ','
     << fmt(rep.bernoulli_surface_residual) << ','
     << (rep.bernoulli_surface_residual <= identity_tol ? "pass" : "fail")
     << '\n';
  os << "symmetry_error," << fmt(rep.shape.symmetry_error) << ",0,"
     << fmt(rep.shape.symmetry_error) << ",info\n";
  os << "monotonicity_violations," << rep.shape.monotonicity_violations
     << ",0," << rep.shape.monotonicity_violations << ",info\n";
  if (rep.shape.fit_ok)
    os << "decay_rate_gap," << fmt(rep.shape.fitted_decay_rate) << ','
       << fmt(rep.shape.expected_decay_rate) << ',' << fmt(rep.shape.decay_gap)
       << ",info\n";
  return os.str();
}

}  // namespace solwave
