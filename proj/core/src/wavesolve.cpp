#include "solwave/wavesolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SparseLU>

namespace solwave {

namespace {

StripGrid make_grid(double L, int nq, int np, double m, bool half) {
  if (!(L > 0.0)) throw Error("StripGrid: L must be positive");
  if (nq < 8 || np < 8) throw Error("StripGrid: nq, np must be >= 8");
  StripGrid g;
  g.half_length = L;
  g.nq = nq;
  g.np = np;
  g.symmetric_half = half;
  g.strip_depth = m;
  g.dq = (half ? L : 2.0 * L) / (nq - 1);
  g.dp = m / (np - 1);
  return g;
}

// Shared scheme data: background samples and their divided differences.
struct Background {
  std::vector<double> hs;      // H at p-nodes
  std::vector<double> dh_mid;  // forward differences (midpoints)
  double dh_top = 0.0;         // one-sided surface derivative
  double min_dh = 0.0;
};

Background background(const AsymptoticState& state, const StripGrid& grid) {
  Background bg;
  bg.hs = sample_height(state, grid);
  const int np = grid.np;
  bg.dh_mid.resize(static_cast<std::size_t>(np - 1));
  bg.min_dh = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < np; ++i) {
    bg.dh_mid[static_cast<std::size_t>(i)] =
        (bg.hs[static_cast<std::size_t>(i + 1)] -
         bg.hs[static_cast<std::size_t>(i)]) /
        grid.dp;
    bg.min_dh = std::min(bg.min_dh, bg.dh_mid[static_cast<std::size_t>(i)]);
  }
  bg.dh_top = (3.0 * bg.hs[static_cast<std::size_t>(np - 1)] -
               4.0 * bg.hs[static_cast<std::size_t>(np - 2)] +
               bg.hs[static_cast<std::size_t>(np - 3)]) /
              (2.0 * grid.dp);
  bg.min_dh = std::min(bg.min_dh, bg.dh_top);
  if (!(bg.min_dh > 0.0))
    throw InvalidStateError("background height samples are not increasing");
  return bg;
}

void check_state_grid(const AsymptoticState& state, const StripGrid& grid) {
  if (std::abs(grid.strip_depth - state.flux) >
      1e-12 * std::max(1.0, state.flux))
    throw Error("grid strip depth does not match the state's flux");
}

inline int mirror(const StripGrid& g, int j) {
  return (g.symmetric_half && j < 0) ? -j : j;
}

double surface_slope_term(double t) { return t / std::sqrt(1.0 + t * t); }
double surface_slope_term_d(double t) {
  const double s = 1.0 + t * t;
  return 1.0 / (s * std::sqrt(s));
}

}  // namespace

StripGrid StripGrid::half(double L, int nq, int np, double m) {
  return make_grid(L, nq, np, m, true);
}

StripGrid StripGrid::full(double L, int nq, int np, double m) {
  return make_grid(L, nq, np, m, false);
}

double HeightField::min_hp() const {
  double worst = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.nq; ++j)
    for (int i = 0; i + 1 < grid.np; ++i)
      worst = std::min(worst, (at(j, i + 1) - at(j, i)) / grid.dp);
  return worst;
}

std::vector<double> sample_height(const AsymptoticState& state,
                                  const StripGrid& grid) {
  check_state_grid(state, grid);
  std::vector<double> hs(static_cast<std::size_t>(grid.np));
  for (int i = 0; i < grid.np; ++i)
    hs[static_cast<std::size_t>(i)] = state.height_at(grid.p(i));
  hs.front() = 0.0;
  hs.back() = state.profile.d;
  return hs;
}

HeightField trivial_field(const AsymptoticState& state, const StripGrid& grid) {
  HeightField f;
  f.grid = grid;
  f.h.resize(static_cast<std::size_t>(grid.size()));
  const auto hs = sample_height(state, grid);
  for (int j = 0; j < grid.nq; ++j)
    for (int i = 0; i < grid.np; ++i)
      f.at(j, i) = hs[static_cast<std::size_t>(i)];
  return f;
}

ResidualField residual(const HeightField& field, const AsymptoticState& state,
                       double sigma) {
  const StripGrid& g = field.grid;
  const Background bg = background(state, g);
  if (!(field.min_hp() > 0.0))
    throw DegenerateFieldError(
        "residual: field has nonpositive h_p; evaluation refused");

  ResidualField res;
  res.grid = g;
  res.r.assign(static_cast<std::size_t>(g.size()), 0.0);
  const double dq = g.dq, dp = g.dp;
  const int np = g.np, N = g.np - 1;

  auto H = [&](int i) { return bg.hs[static_cast<std::size_t>(i)]; };
  auto h = [&](int j, int i) { return field.at(mirror(g, j), i); };

  // G-flux at the p-midpoint between rows i and i+1 of column j.
  auto gflux = [&](int j, int i) {
    const double hp = (h(j, i + 1) - h(j, i)) / dp;
    const double hq =
        (h(j + 1, i + 1) - h(j - 1, i + 1) + h(j + 1, i) - h(j - 1, i)) /
        (4.0 * dq);
    const double bgv = bg.dh_mid[static_cast<std::size_t>(i)];
    return -(1.0 + hq * hq) / (2.0 * hp * hp) + 1.0 / (2.0 * bgv * bgv);
  };
  // J-flux between columns ja -> jb at row i (signed with the jb - ja gap).
  auto jflux = [&](int ja, int jb, int i) {
    const double t = (h(jb, i) - h(ja, i)) / dq;
    const double s =
        (h(ja, i + 1) - h(ja, i - 1) + h(jb, i + 1) - h(jb, i - 1)) /
        (4.0 * dp);
    return t / s;
  };

  for (int j = 0; j < g.nq; ++j) {
    if (g.far_column(j)) {
      for (int i = 0; i < np; ++i)
        res.r[static_cast<std::size_t>(g.index(j, i))] = field.at(j, i) - H(i);
      continue;
    }
    res.r[static_cast<std::size_t>(g.index(j, 0))] = field.at(j, 0);
    for (int i = 1; i < N; ++i) {
      const double gp = (gflux(j, i) - gflux(j, i - 1)) / dp;
      const double jq = (jflux(j, j + 1, i) - jflux(j - 1, j, i)) / dq;
      res.r[static_cast<std::size_t>(g.index(j, i))] = gp + jq;
    }
    const double hp_top =
        (3.0 * h(j, N) - 4.0 * h(j, N - 1) + h(j, N - 2)) / (2.0 * dp);
    const double hq_top = (h(j + 1, N) - h(j - 1, N)) / (2.0 * dq);
    double top = (1.0 + hq_top * hq_top) / (2.0 * hp_top * hp_top) -
                 1.0 / (2.0 * bg.dh_top * bg.dh_top) +
                 state.profile.g * (h(j, N) - H(N));
    if (sigma != 0.0) {
      const double tp = (h(j + 1, N) - h(j, N)) / dq;
      const double tm = (h(j, N) - h(j - 1, N)) / dq;
      top -= sigma * (surface_slope_term(tp) - surface_slope_term(tm)) / dq;
    }
    res.r[static_cast<std::size_t>(g.index(j, N))] = top;
  }
  return res;
}

double residual_norm(const ResidualField& res, const AsymptoticState& state) {
  const StripGrid& g = res.grid;
  const double wf = state.flux;
  const double wg = state.profile.g;
  double worst = 0.0;
  for (int j = 0; j < g.nq; ++j) {
    const bool far = g.far_column(j);
    for (int i = 0; i < g.np; ++i) {
      const double v = std::abs(res.at(j, i));
      double w;
      if (far || i == 0)
        w = wg;
      else if (i == g.np - 1)
        w = 1.0;
      else
        w = wf;
      worst = std::max(worst, w * v);
    }
  }
  return worst;
}

JacobianOperator jacobian(const HeightField& field,
                          const AsymptoticState& state, double sigma) {
  const StripGrid& g = field.grid;
  const Background bg = background(state, g);
  if (!(field.min_hp() > 0.0))
    throw DegenerateFieldError(
        "jacobian: field has nonpositive h_p; evaluation refused");

  const double dq = g.dq, dp = g.dp;
  const int np = g.np, N = g.np - 1;
  auto h = [&](int j, int i) { return field.at(mirror(g, j), i); };

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(g.size()) * 10);
  auto add = [&](int row, int j, int i, double coeff) {
    trips.emplace_back(row, g.index(mirror(g, j), i), coeff);
  };

  for (int j = 0; j < g.nq; ++j) {
    if (g.far_column(j)) {
      for (int i = 0; i < np; ++i) {
        const int row = g.index(j, i);
        add(row, j, i, 1.0);
      }
      continue;
    }
    add(g.index(j, 0), j, 0, 1.0);

    for (int i = 1; i < N; ++i) {
      const int row = g.index(j, i);
      // Two G-fluxes: midpoints (i-1, i) and (i, i+1), weights -/+ 1/dp.
      for (int mid : {i - 1, i}) {
        const double w = (mid == i ? 1.0 : -1.0) / dp;
        const int i0 = mid, i1 = mid + 1;
        const double hp = (h(j, i1) - h(j, i0)) / dp;
        const double hq =
            (h(j + 1, i1) - h(j - 1, i1) + h(j + 1, i0) - h(j - 1, i0)) /
            (4.0 * dq);
        const double dG_dhp = (1.0 + hq * hq) / (hp * hp * hp);
        const double dG_dhq = -hq / (hp * hp);
        add(row, j, i1, w * dG_dhp / dp);
        add(row, j, i0, -w * dG_dhp / dp);
        const double cq = w * dG_dhq / (4.0 * dq);
        add(row, j + 1, i1, cq);
        add(row, j - 1, i1, -cq);
        add(row, j + 1, i0, cq);
        add(row, j - 1, i0, -cq);
      }
      // Two J-fluxes: (j-1, j) and (j, j+1), weights -/+ 1/dq.
      const int pairs[2][2] = {{j - 1, j}, {j, j + 1}};
      for (int k = 0; k < 2; ++k) {
        const int ja = pairs[k][0], jb = pairs[k][1];
        const double w = (k == 1 ? 1.0 : -1.0) / dq;
        const double t = (h(jb, i) - h(ja, i)) / dq;
        const double s =
            (h(ja, i + 1) - h(ja, i - 1) + h(jb, i + 1) - h(jb, i - 1)) /
            (4.0 * dp);
        add(row, jb, i, w / (s * dq));
        add(row, ja, i, -w / (s * dq));
        const double cs = -w * t / (s * s) / (4.0 * dp);
        add(row, ja, i + 1, cs);
        add(row, ja, i - 1, -cs);
        add(row, jb, i + 1, cs);
        add(row, jb, i - 1, -cs);
      }
    }

    const int row = g.index(j, N);
    const double hp_top =
        (3.0 * h(j, N) - 4.0 * h(j, N - 1) + h(j, N - 2)) / (2.0 * dp);
    const double hq_top = (h(j + 1, N) - h(j - 1, N)) / (2.0 * dq);
    const double dR_dhp = -(1.0 + hq_top * hq_top) / (hp_top * hp_top * hp_top);
    const double dR_dhq = hq_top / (hp_top * hp_top);
    add(row, j, N, dR_dhp * 3.0 / (2.0 * dp) + state.profile.g);
    add(row, j, N - 1, dR_dhp * -4.0 / (2.0 * dp));
    add(row, j, N - 2, dR_dhp * 1.0 / (2.0 * dp));
    add(row, j + 1, N, dR_dhq / (2.0 * dq));
    add(row, j - 1, N, -dR_dhq / (2.0 * dq));
    if (sigma != 0.0) {
      const double tp = (h(j + 1, N) - h(j, N)) / dq;
      const double tm = (h(j, N) - h(j - 1, N)) / dq;
      const double cp = -sigma * surface_slope_term_d(tp) / dq;
      const double cm = sigma * surface_slope_term_d(tm) / dq;
      add(row, j + 1, N, cp / dq);
      add(row, j, N, -cp / dq);
      add(row, j, N, cm / dq);
      add(row, j - 1, N, -cm / dq);
    }
  }

  JacobianOperator op;
  op.grid = g;
  op.matrix.resize(g.size(), g.size());
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  return op;
}

std::vector<double> JacobianOperator::apply(
    std::span<const double> direction) const {
  if (static_cast<int>(direction.size()) != grid.size())
    throw Error("JacobianOperator::apply: direction size mismatch");
  Eigen::Map<const Eigen::VectorXd> x(direction.data(),
                                      static_cast<Eigen::Index>(direction.size()));
  Eigen::VectorXd y = matrix * x;
  return {y.data(), y.data() + y.size()};
}

HeightField seed_from_mode(const AsymptoticState& state,
                           std::span<const double> phi, double decay_rate,
                           double amplitude, const StripGrid& grid) {
  if (phi.size() != state.p.size())
    throw Error("seed_from_mode: mode must live on the state p-grid");
  if (!(decay_rate > 0.0))
    throw SubcriticalSeedError("seed_from_mode: decay rate must be positive");
  num::PchipSpline phi_of_p(state.p,
                            std::vector<double>(phi.begin(), phi.end()));
  HeightField f = trivial_field(state, grid);
  for (int j = 0; j < grid.nq; ++j) {
    const double envelope =
        1.0 / std::pow(std::cosh(0.5 * decay_rate * grid.q(j)), 2);
    for (int i = 1; i < grid.np; ++i)
      f.at(j, i) += amplitude * phi_of_p(grid.p(i)) * envelope;
  }
  return f;
}

HeightField initial_guess(const AsymptoticState& state,
                          const SturmSpectrum& spectrum, double amplitude,
                          const StripGrid& grid) {
  if (!(spectrum.mu.at(0) > 0.0))
    throw SubcriticalSeedError(
        "initial_guess: mu_1 <= 0, no far-field decay mode to seed with");
  return seed_from_mode(state, spectrum.phi1, std::sqrt(spectrum.mu[0]),
                        amplitude, grid);
}

WaveSolution newton_solve(const HeightField& guess,
                          const AsymptoticState& state, double sigma,
                          const SolveOptions& opts) {
  check_state_grid(state, guess.grid);
  const Background bg = background(state, guess.grid);
  const double eps_p = opts.min_hp_factor * bg.min_dh;
  const double tol = opts.tol_scale * state.profile.g * state.profile.d;

  WaveSolution sol;
  sol.field = guess;
  sol.state = state;
  sol.sigma = sigma;
  sol.tolerance = tol;

  auto barrier_ok = [&](const HeightField& f) {
    if (f.min_hp() < eps_p) return false;
    for (int j = 0; j < f.grid.nq; ++j) {
      const int N = f.grid.np - 1;
      const double hp_top =
          (3.0 * f.at(j, N) - 4.0 * f.at(j, N - 1) + f.at(j, N - 2)) /
          (2.0 * f.grid.dp);
      if (hp_top < eps_p) return false;
    }
    return true;
  };

  auto finish = [&](SolveStatus status, double rn, int iters,
                    const std::string& message) {
    sol.status = status;
    sol.converged = (status == SolveStatus::Converged);
    sol.residual_norm = rn;
    sol.newton_iters = iters;
    sol.message = message;
    const int N = sol.field.grid.np - 1;
    sol.amplitude = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < sol.field.grid.nq; ++j)
      sol.amplitude = std::max(
          sol.amplitude, sol.field.at(j, N) - bg.hs[static_cast<std::size_t>(N)]);
    return sol;
  };

  if (!(guess.min_hp() > 0.0))
    return finish(SolveStatus::DegenerateField,
                  std::numeric_limits<double>::quiet_NaN(), 0,
                  "initial field has nonpositive h_p");

  ResidualField res = residual(sol.field, state, sigma);
  double rn = residual_norm(res, state);

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool analyzed = false;

  for (int iter = 0;; ++iter) {
    if (rn < tol) return finish(SolveStatus::Converged, rn, iter, "converged");
    if (iter >= opts.max_iters) {
      std::ostringstream os;
      os << "iteration cap reached, last residual " << rn;
      return finish(SolveStatus::IterationCap, rn, iter, os.str());
    }

    JacobianOperator jac = jacobian(sol.field, state, sigma);
    if (!analyzed) {
      lu.analyzePattern(jac.matrix);
      analyzed = true;
    }
    lu.factorize(jac.matrix);
    if (lu.info() != Eigen::Success) {
      std::ostringstream os;
      os << "Jacobian factorization failed, last residual " << rn;
      return finish(SolveStatus::DegenerateField, rn, iter, os.str());
    }
    Eigen::Map<const Eigen::VectorXd> rv(res.r.data(),
                                         static_cast<Eigen::Index>(res.r.size()));
    Eigen::VectorXd step = lu.solve(-rv);

    double s = 1.0;
    bool accepted = false;
    HeightField trial = sol.field;
    ResidualField trial_res;
    double trial_norm = 0.0;
    while (s >= opts.min_step) {
      for (std::size_t k = 0; k < trial.h.size(); ++k)
        trial.h[k] = sol.field.h[k] + s * step[static_cast<Eigen::Index>(k)];
      if (barrier_ok(trial)) {
        trial_res = residual(trial, state, sigma);
        trial_norm = residual_norm(trial_res, state);
        if (std::isfinite(trial_norm) && trial_norm < rn * (1.0 - 1e-4 * s)) {
          accepted = true;
          break;
        }
      }
      s *= opts.backtrack;
    }
    if (!accepted) {
      std::ostringstream os;
      os << "line search stalled at step " << s << ", last residual " << rn;
      return finish(SolveStatus::LineSearchStall, rn, iter, os.str());
    }
    sol.field = std::move(trial);
    res = std::move(trial_res);
    rn = trial_norm;
  }
}

WaveSolution reflect_full(const WaveSolution& sol) {
  const StripGrid& g = sol.field.grid;
  if (!g.symmetric_half) return sol;
  WaveSolution out = sol;
  const int nq_full = 2 * g.nq - 1;
  out.field.grid = StripGrid::full(g.half_length, nq_full, g.np, g.strip_depth);
  out.field.h.assign(static_cast<std::size_t>(out.field.grid.size()), 0.0);
  for (int jf = 0; jf < nq_full; ++jf) {
    const int jh = std::abs(jf - (g.nq - 1));
    for (int i = 0; i < g.np; ++i) out.field.at(jf, i) = sol.field.at(jh, i);
  }
  out.residual_norm =
      residual_norm(residual(out.field, out.state, out.sigma), out.state);
  return out;
}

double sup_u_fraction(const HeightField& field, double wave_speed) {
  const StripGrid& g = field.grid;
  const double dp = g.dp;
  double worst = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.nq; ++j) {
    for (int i = 0; i < g.np; ++i) {
      double hp;
      if (i == 0)
        hp = (-3.0 * field.at(j, 0) + 4.0 * field.at(j, 1) - field.at(j, 2)) /
             (2.0 * dp);
      else if (i == g.np - 1)
        hp = (3.0 * field.at(j, i) - 4.0 * field.at(j, i - 1) +
              field.at(j, i - 2)) /
             (2.0 * dp);
      else
        hp = (field.at(j, i + 1) - field.at(j, i - 1)) / (2.0 * dp);
      const double u = wave_speed - 1.0 / hp;
      worst = std::max(worst, u / wave_speed);
    }
  }
  return worst;
}

}  // namespace solwave
