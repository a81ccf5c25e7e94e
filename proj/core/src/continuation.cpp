#include "solwave/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SparseLU>

namespace solwave {

namespace {

struct FamilyContext {
  const UProfile* ustar;
  double g, d;
  double half_length;
  int nq, np;

  AsymptoticState state(double froude) const {
    return build_asymptotic_state(family_profile(*ustar, froude, g, d), np);
  }
  StripGrid grid(const AsymptoticState& st) const {
    return StripGrid::half(half_length, nq, np, st.flux);
  }
};

double crest_displacement(const HeightField& f, double d) {
  return f.at(0, f.grid.np - 1) - d;
}

// One pseudo-arclength corrector: Newton on the bordered system
//   R(h; F) = 0,
//   tau_a * (A(h) - A0)/d + tau_f * (F - F0) - ds = 0,
// solved by block elimination with two back-solves per factorization.
struct CorrectorResult {
  bool ok = false;
  HeightField field;
  double froude = 0.0;
  int iters = 0;
  double residual = 0.0;
};

CorrectorResult correct(const FamilyContext& ctx, HeightField h, double froude,
                        double a0, double f0, double tau_a, double tau_f,
                        double ds, const SolveOptions& sopts) {
  CorrectorResult out;
  const double d = ctx.d;
  const int max_iters = sopts.max_iters;

  for (int iter = 0; iter <= max_iters; ++iter) {
    AsymptoticState st = ctx.state(froude);
    const StripGrid grid = ctx.grid(st);
    h.grid = grid;
    const double tol = sopts.tol_scale * st.profile.g * st.profile.d;

    double rn;
    ResidualField res;
    try {
      res = residual(h, st, 0.0);
      rn = residual_norm(res, st);
    } catch (const DegenerateFieldError&) {
      return out;
    }
    const double constraint = tau_a * (crest_displacement(h, d) - a0) / d +
                              tau_f * (froude - f0) - ds;
    if (rn < tol && std::abs(constraint) < 1e-11) {
      out.ok = true;
      out.field = h;
      out.froude = froude;
      out.iters = iter;
      out.residual = rn;
      return out;
    }
    if (iter == max_iters) return out;

    JacobianOperator jac = jacobian(h, st, 0.0);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(jac.matrix);
    lu.factorize(jac.matrix);
    if (lu.info() != Eigen::Success) return out;

    // dR/dF by forward difference; the state (and grid spacing) moves with F.
    const double df = 1e-7 * std::max(1.0, std::abs(froude));
    AsymptoticState st2 = ctx.state(froude + df);
    HeightField h2 = h;
    h2.grid = ctx.grid(st2);
    Eigen::VectorXd rf(static_cast<Eigen::Index>(res.r.size()));
    try {
      ResidualField res2 = residual(h2, st2, 0.0);
      for (std::size_t k = 0; k < res.r.size(); ++k)
        rf[static_cast<Eigen::Index>(k)] = (res2.r[k] - res.r[k]) / df;
    } catch (const DegenerateFieldError&) {
      return out;
    }

    Eigen::Map<const Eigen::VectorXd> rv(res.r.data(),
                                         static_cast<Eigen::Index>(res.r.size()));
    Eigen::VectorXd a = lu.solve(rv);
    Eigen::VectorXd b = lu.solve(rf);
    const int crest_idx = h.grid.index(0, h.grid.np - 1);
    const double wa = tau_a / d;
    const double denom = tau_f - wa * b[crest_idx];
    if (denom == 0.0) return out;
    const double dF = (wa * a[crest_idx] - constraint) / denom;
    // delta_h = -a - b * dF

    double s = 1.0;
    bool accepted = false;
    HeightField trial = h;
    double trial_froude = froude;
    while (s >= sopts.min_step) {
      trial_froude = froude + s * dF;
      if (trial_froude <= 0.0 || !std::isfinite(trial_froude)) {
        s *= sopts.backtrack;
        continue;
      }
      AsymptoticState st_try = ctx.state(trial_froude);
      trial.grid = ctx.grid(st_try);
      for (std::size_t k = 0; k < trial.h.size(); ++k)
        trial.h[k] = h.h[k] - s * (a[static_cast<Eigen::Index>(k)] +
                                   dF * b[static_cast<Eigen::Index>(k)]);
      double merit_new = std::numeric_limits<double>::infinity();
      try {
        if (trial.min_hp() > 0.0) {
          ResidualField res_try = residual(trial, st_try, 0.0);
          const double rn_try = residual_norm(res_try, st_try);
          const double c_try =
              tau_a * (crest_displacement(trial, d) - a0) / d +
              tau_f * (trial_froude - f0) - ds;
          merit_new = rn_try / (st_try.profile.g * st_try.profile.d) +
                      std::abs(c_try);
        }
      } catch (const DegenerateFieldError&) {
      }
      const double merit_old =
          rn / (st.profile.g * st.profile.d) + std::abs(constraint);
      if (merit_new < merit_old * (1.0 - 1e-4 * s) + 1e-15) {
        accepted = true;
        break;
      }
      s *= sopts.backtrack;
    }
    if (!accepted) return out;
    h = std::move(trial);
    froude = trial_froude;
  }
  return out;
}

}  // namespace

std::string to_string(BranchEndpoint endpoint) {
  switch (endpoint) {
    case BranchEndpoint::TargetCount: return "target-count";
    case BranchEndpoint::Stagnation: return "stagnation";
    case BranchEndpoint::LargeFroude: return "large-froude";
    case BranchEndpoint::StepFloor: return "step-floor";
  }
  return "unknown";
}

ContinuationBranch continue_branch(const UProfile& ustar, double g, double d,
                                   double froude_start, int direction,
                                   const ContinuationOptions& opts) {
  if (!(froude_start > 1.0))
    throw Error("continue_branch: need a supercritical starting Froude number");

  ContinuationBranch branch;
  branch.ustar = ustar;
  branch.g = g;
  branch.d = d;

  // The family normalization is validated here (family_profile throws).
  AsymptoticState st0 = build_asymptotic_state(
      family_profile(ustar, froude_start, g, d), opts.np);
  SturmSpectrum spec0 = solve_sturm(st0);
  if (!(spec0.mu[0] > 0.0))
    throw Error("continue_branch: starting state is not supercritical");

  FamilyContext ctx{&ustar, g, d,
                    opts.domain_factor / std::sqrt(spec0.mu[0]), opts.nq,
                    opts.np};
  const StripGrid grid0 = ctx.grid(st0);

  const double seed_r =
      opts.seed_amplitude != 0.0
          ? opts.seed_amplitude
          : d * (froude_start * froude_start - 1.0);
  WaveSolution first =
      newton_solve(initial_guess(st0, spec0, seed_r, grid0), st0, 0.0,
                   opts.solve);
  if (!first.converged)
    throw Error("continue_branch: first solve failed: " + first.message);

  auto push_point = [&](const WaveSolution& sol, double arclength) {
    BranchPoint pt;
    pt.froude = sol.state.froude;
    pt.amplitude = crest_displacement(sol.field, d);
    pt.max_eta = sol.amplitude;
    pt.sup_u_over_c = sup_u_fraction(sol.field, sol.state.profile.c);
    pt.min_hp = sol.field.min_hp();
    pt.arclength = arclength;
    pt.solution = std::make_shared<WaveSolution>(sol);
    branch.points.push_back(std::move(pt));
  };
  push_point(first, 0.0);

  double tau_a = direction >= 0 ? 1.0 : -1.0;
  double tau_f = 0.0;
  double ds = opts.step;
  double eps_p_floor = opts.solve.min_hp_factor;

  while (true) {
    const BranchPoint& last = branch.points.back();
    if (static_cast<int>(branch.points.size()) >= opts.max_points) {
      branch.endpoint = BranchEndpoint::TargetCount;
      branch.endpoint_detail = "reached requested point count";
      break;
    }
    if (last.froude >= opts.froude_cap) {
      branch.endpoint = BranchEndpoint::LargeFroude;
      std::ostringstream os;
      os << "Froude " << last.froude << " exceeded cap " << opts.froude_cap;
      branch.endpoint_detail = os.str();
      break;
    }
    {
      AsymptoticState st_last = ctx.state(last.froude);
      const double barrier = eps_p_floor * 2.0 *
                             *std::min_element(st_last.height_p.begin(),
                                               st_last.height_p.end());
      if (last.sup_u_over_c >= opts.stagnation_fraction ||
          last.min_hp <= barrier) {
        branch.endpoint = BranchEndpoint::Stagnation;
        std::ostringstream os;
        os << "max u reached " << last.sup_u_over_c
           << " of the wave speed (min h_p " << last.min_hp << ")";
        branch.endpoint_detail = os.str();
        break;
      }
    }

    // Secant tangent in the (amplitude/d, F) plane once two points exist.
    if (branch.points.size() >= 2) {
      const BranchPoint& prev = branch.points[branch.points.size() - 2];
      double da = (last.amplitude - prev.amplitude) / d;
      double df = last.froude - prev.froude;
      const double norm = std::hypot(da, df);
      if (norm > 0.0) {
        tau_a = da / norm;
        tau_f = df / norm;
      }
    }

    bool stepped = false;
    while (ds >= opts.min_step) {
      // Predictor: secant extrapolation of the stored fields.
      HeightField pred = last.solution->field;
      if (branch.points.size() >= 2) {
        const BranchPoint& prev = branch.points[branch.points.size() - 2];
        const double gap = last.arclength - prev.arclength;
        if (gap > 0.0) {
          const double w = ds / gap;
          for (std::size_t k = 0; k < pred.h.size(); ++k)
            pred.h[k] += w * (pred.h[k] - prev.solution->field.h[k]);
        }
      }
      const double froude_pred = last.froude + ds * tau_f;

      CorrectorResult cr =
          correct(ctx, pred, froude_pred, last.amplitude, last.froude, tau_a,
                  tau_f, ds, opts.solve);
      if (cr.ok) {
        AsymptoticState st = ctx.state(cr.froude);
        WaveSolution sol;
        sol.field = cr.field;
        sol.state = std::move(st);
        sol.sigma = 0.0;
        sol.residual_norm = cr.residual;
        sol.newton_iters = cr.iters;
        sol.converged = true;
        sol.status = SolveStatus::Converged;
        sol.tolerance =
            opts.solve.tol_scale * sol.state.profile.g * sol.state.profile.d;
        sol.message = "continuation step";
        const int N = sol.field.grid.np - 1;
        sol.amplitude = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < sol.field.grid.nq; ++j)
          sol.amplitude =
              std::max(sol.amplitude, sol.field.at(j, N) - sol.state.profile.d);
        push_point(sol, last.arclength + ds);
        stepped = true;
        if (cr.iters <= 4) ds = std::min(ds * 1.3, opts.max_step);
        break;
      }
      ds *= 0.5;
    }
    if (!stepped) {
      branch.endpoint = BranchEndpoint::StepFloor;
      std::ostringstream os;
      os << "arclength step fell below " << opts.min_step;
      branch.endpoint_detail = os.str();
      break;
    }
  }
  return branch;
}

}  // namespace solwave
