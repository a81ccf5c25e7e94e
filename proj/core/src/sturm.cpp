#include "solwave/sturm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace solwave {

namespace {

// Tridiagonal pencil K phi = mu M phi over the interior + surface unknowns
// phi_1..phi_N (phi_0 = 0 at the bed). K is symmetric, M diagonal positive.
struct Pencil {
  std::vector<double> diag, off;  // K
  std::vector<double> mass;       // M
  double g = 0.0;
  double dp = 0.0;
  std::vector<double> a_mid;      // 1/H_p^3 at midpoints, size N
  std::vector<double> b_node;     // 1/H_p at nodes 1..N
};

Pencil assemble(const AsymptoticState& state) {
  const int np = state.np;
  const std::size_t n = static_cast<std::size_t>(np - 1);
  const double dp = state.flux / (np - 1);
  Pencil pc;
  pc.g = state.profile.g;
  pc.dp = dp;
  pc.a_mid.resize(n);
  pc.b_node.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double pm = state.p[k] + 0.5 * dp;
    const double hp_mid = state.height_p_at(pm);
    const double hp_node = state.height_p[k + 1];
    if (!(hp_mid > 0.0) || !(hp_node > 0.0))
      throw InvalidStateError("solve_sturm: degenerate H_p");
    pc.a_mid[k] = 1.0 / (hp_mid * hp_mid * hp_mid);
    pc.b_node[k] = 1.0 / hp_node;
  }
  pc.diag.assign(n, 0.0);
  pc.off.assign(n > 0 ? n - 1 : 0, 0.0);
  pc.mass.assign(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    pc.diag[k] = (pc.a_mid[k] + pc.a_mid[k + 1]) / dp;
    pc.off[k] = -pc.a_mid[k + 1] / dp;
    pc.mass[k] = pc.b_node[k] * dp;
  }
  pc.diag[n - 1] = pc.a_mid[n - 1] / dp - pc.g;
  pc.mass[n - 1] = 0.5 * pc.b_node[n - 1] * dp;
  return pc;
}

// Number of pencil eigenvalues strictly below x (Sylvester inertia of the
// LDL^T pivots of K - x M).
int count_below(const Pencil& pc, double x) {
  int count = 0;
  double prev = 0.0;
  for (std::size_t k = 0; k < pc.diag.size(); ++k) {
    double piv = pc.diag[k] - x * pc.mass[k];
    if (k > 0) piv -= pc.off[k - 1] * pc.off[k - 1] / prev;
    if (piv == 0.0) piv = -1e-300;
    if (piv < 0.0) ++count;
    prev = piv;
  }
  return count;
}

std::pair<double, double> gershgorin(const Pencil& pc) {
  const std::size_t n = pc.diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = 0; k < n; ++k) {
    double radius = 0.0;
    if (k > 0)
      radius += std::abs(pc.off[k - 1]) / std::sqrt(pc.mass[k - 1] * pc.mass[k]);
    if (k + 1 < n)
      radius += std::abs(pc.off[k]) / std::sqrt(pc.mass[k] * pc.mass[k + 1]);
    const double center = pc.diag[k] / pc.mass[k];
    lo = std::min(lo, center - radius);
    hi = std::max(hi, center + radius);
  }
  return {lo, hi};
}

double bisect_eigenvalue(const Pencil& pc, int index_one_based, double lo,
                         double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (count_below(pc, mid) >= index_one_based)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-15 * std::max({std::abs(lo), std::abs(hi), 1e-30}))
      break;
  }
  return 0.5 * (lo + hi);
}

// Tridiagonal solve with partial pivoting between adjacent rows; tolerates
// the nearly singular shifted matrices used by inverse iteration.
void solve_tridiag(std::vector<double> lower, std::vector<double> diag,
                   std::vector<double> upper, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  std::vector<double> extra(n, 0.0);  // fill-in two above the diagonal
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (std::abs(lower[k]) > std::abs(diag[k])) {
      std::swap(diag[k], lower[k]);
      std::swap(upper[k], diag[k + 1]);
      if (k + 2 < n) std::swap(extra[k], upper[k + 1]);
      std::swap(rhs[k], rhs[k + 1]);
    }
    if (diag[k] == 0.0) diag[k] = 1e-300;
    const double factor = lower[k] / diag[k];
    diag[k + 1] -= factor * upper[k];
    if (k + 2 < n) upper[k + 1] -= factor * extra[k];
    rhs[k + 1] -= factor * rhs[k];
  }
  if (diag[n - 1] == 0.0) diag[n - 1] = 1e-300;
  rhs[n - 1] /= diag[n - 1];
  if (n >= 2) rhs[n - 2] = (rhs[n - 2] - upper[n - 2] * rhs[n - 1]) / diag[n - 2];
  for (std::size_t k = n - 2; k-- > 0;)
    rhs[k] = (rhs[k] - upper[k] * rhs[k + 1] - extra[k] * rhs[k + 2]) / diag[k];
}

std::vector<double> inverse_iteration(const Pencil& pc, double shift) {
  const std::size_t n = pc.diag.size();
  std::vector<double> v(n, 1.0);
  for (int it = 0; it < 4; ++it) {
    std::vector<double> lower(n - 1), diag(n), upper(n - 1);
    for (std::size_t k = 0; k < n; ++k) diag[k] = pc.diag[k] - shift * pc.mass[k];
    for (std::size_t k = 0; k + 1 < n; ++k) lower[k] = upper[k] = pc.off[k];
    solve_tridiag(std::move(lower), std::move(diag), std::move(upper), v);
    double norm = 0.0;
    for (double x : v) norm = std::max(norm, std::abs(x));
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw InvalidStateError("solve_sturm: inverse iteration failed");
    for (double& x : v) x /= norm;
  }
  return v;
}

}  // namespace

SturmSpectrum solve_sturm(const AsymptoticState& state, int n_eigs) {
  if (n_eigs < 2) throw Error("solve_sturm: n_eigs must be >= 2");
  const Pencil pc = assemble(state);
  auto [lo, hi] = gershgorin(pc);
  // Guard the bracket against rounding in the Gershgorin transfer.
  double width = hi - lo;
  lo -= 0.01 * width + 1.0;
  hi += 0.01 * width + 1.0;
  while (count_below(pc, lo) > 0) lo -= width + 1.0;
  while (count_below(pc, hi) < n_eigs) hi += width + 1.0;

  SturmSpectrum spec;
  for (int j = 1; j <= n_eigs; ++j)
    spec.mu.push_back(bisect_eigenvalue(pc, j, lo, hi));

  const double mu1 = spec.mu[0], mu2 = spec.mu[1];
  if (state.froude > 1.0 + 1e-6 && !(mu1 > 0.0))
    throw InvalidStateError(
        "solve_sturm: supercritical state produced a nonpositive mu_1");

  const double gap = std::max(mu2 - mu1, 1e-8 * std::max(1.0, std::abs(mu1)));
  auto v = inverse_iteration(pc, mu1 - 1e-6 * gap);
  // Normalize so the surface value is exactly 1; the first eigenfunction
  // cannot vanish there (the Robin condition would force it to be trivial).
  const double surface = v.back();
  if (surface == 0.0)
    throw InvalidStateError("solve_sturm: eigenfunction vanished at surface");
  spec.phi1.assign(static_cast<std::size_t>(state.np), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) spec.phi1[k + 1] = v[k] / surface;

  if (mu1 > 0.0 && mu2 > mu1) {
    const double s_lo = std::sqrt(mu1);
    const double s_hi = std::min(2.0 * std::sqrt(mu1), std::sqrt(mu2));
    spec.s1 = 0.5 * (s_lo + s_hi);
  } else {
    spec.s1 = std::numeric_limits<double>::quiet_NaN();
  }
  return spec;
}

double physical_equivalence_residual(const AsymptoticState& state,
                                     const SturmSpectrum& spectrum) {
  const auto& profile = state.profile;
  const double mu1 = spectrum.mu.at(0);

  // Evaluate on the image of the p-grid so no interpolation of the discrete
  // eigenvector is needed; the grid is smoothly graded, so the three-point
  // nonuniform stencils stay second order.
  const std::size_t n = state.p.size();
  std::vector<double> y(n), phit(n);
  for (std::size_t k = 0; k < n; ++k) {
    y[k] = state.height[k] - profile.d;
    const double w = profile.c - profile.u(y[k]);
    phit[k] = w * spectrum.phi1[k];
  }

  double phi_scale = 0.0;
  for (double v : phit) phi_scale = std::max(phi_scale, std::abs(v));
  if (!(phi_scale > 0.0)) return 0.0;
  const double interior_scale = profile.g * phi_scale / profile.d;
  const double h_uyy = 1e-4 * profile.d;

  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double ucm = profile.u(y[k]) - profile.c;
    const double uyy = (profile.u.derivative(y[k] + h_uyy) -
                        profile.u.derivative(y[k] - h_uyy)) /
                       (2.0 * h_uyy);
    const double hm = y[k] - y[k - 1], hp = y[k + 1] - y[k];
    const double phiyy = 2.0 *
                         ((phit[k + 1] - phit[k]) / hp -
                          (phit[k] - phit[k - 1]) / hm) /
                         (hp + hm);
    const double r = ucm * (phiyy + mu1 * phit[k]) - uyy * phit[k];
    worst = std::max(worst, std::abs(r) / interior_scale);
  }

  // One-sided quadratic surface derivative on the nonuniform tail.
  const double a = y[n - 2] - y[n - 3];
  const double b = y[n - 1] - y[n - 2];
  const double phiy0 = phit[n - 3] * b / (a * (a + b)) -
                       phit[n - 2] * (a + b) / (a * b) +
                       phit[n - 1] * (a + 2.0 * b) / (b * (a + b));
  const double ucm0 = profile.u(0.0) - profile.c;
  const double uy0 = profile.u.derivative(0.0);
  const double bc = ucm0 * ucm0 * phiy0 -
                    (profile.g + ucm0 * uy0) * phit[n - 1];
  worst = std::max(worst, std::abs(bc) / (profile.g * phi_scale));
  return worst;
}

DecayMode tension_decay_mode(const AsymptoticState& state, double sigma) {
  const Pencil pc = assemble(state);
  const std::size_t n = pc.diag.size();
  const double dp = pc.dp;

  // Marches the three-term recurrence for given mu and returns the defect of
  // the surface row; its roots are exactly the eigenvalues of the
  // Robin-modified pencil.
  auto march = [&](double mu, std::vector<double>* out) {
    std::vector<double> phi(n + 1, 0.0);
    phi[0] = 0.0;
    phi[1] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
      const double a_lo = pc.a_mid[i - 1], a_hi = pc.a_mid[i];
      double next = phi[i] + (a_lo / a_hi) * (phi[i] - phi[i - 1]) -
                    mu * pc.b_node[i - 1] * dp * dp * phi[i] / a_hi;
      phi[i + 1] = next;
      const double mag = std::abs(next);
      if (mag > 1e150) {
        for (auto& v : phi) v /= mag;
      }
    }
    const double robin = pc.g - sigma * mu;
    const double defect = pc.a_mid[n - 1] * (phi[n] - phi[n - 1]) / dp -
                          robin * phi[n] - mu * 0.5 * pc.b_node[n - 1] * dp * phi[n];
    if (out) *out = std::move(phi);
    return defect;
  };

  double root = std::numeric_limits<double>::quiet_NaN();
  if (sigma <= 0.0) {
    // The tension term only shifts the mass row: the pencil
    // (K, M - sigma e_N e_N^T) keeps a positive mass for sigma <= 0, so the
    // smallest eigenvalue comes from the same inertia bisection.
    Pencil mod = pc;
    mod.mass[n - 1] -= sigma;
    auto [lo, hi] = gershgorin(mod);
    double width = hi - lo;
    lo -= 0.01 * width + 1.0;
    hi += 0.01 * width + 1.0;
    while (count_below(mod, lo) > 0) lo -= width + 1.0;
    while (count_below(mod, hi) < 1) hi += width + 1.0;
    root = bisect_eigenvalue(mod, 1, lo, hi);
    if (!(root > 0.0))
      throw Error(
          "tension_decay_mode: no positive decay mode (subcritical state)");
  } else {
    // The mass row loses definiteness for sigma > 0; fall back to a fine
    // log-spaced defect scan below the Robin sign change at g/sigma.
    const double mu_hi = (pc.g / sigma) * (1.0 - 1e-9);
    const double mu_lo = 1e-9 * pc.g / state.profile.d;
    const int scan = 1 << 16;
    const double ratio = std::pow(mu_hi / mu_lo, 1.0 / scan);
    double prev_mu = mu_lo;
    double prev_defect = march(prev_mu, nullptr);
    for (int k = 1; k <= scan; ++k) {
      const double mu = mu_lo * std::pow(ratio, k);
      const double defect = march(mu, nullptr);
      if (prev_defect == 0.0) {
        root = prev_mu;
        break;
      }
      if (prev_defect * defect < 0.0) {
        root = num::bisect([&](double x) { return march(x, nullptr); },
                           prev_mu, mu, 1e-15 * mu);
        break;
      }
      prev_mu = mu;
      prev_defect = defect;
    }
    if (!std::isfinite(root))
      throw Error(
          "tension_decay_mode: no decay mode below the Robin sign change");
  }

  DecayMode mode;
  mode.mu = root;
  std::vector<double> phi;
  march(root, &phi);
  const double surface = phi.back();
  if (surface == 0.0)
    throw Error("tension_decay_mode: mode vanished at the surface");
  mode.phi.resize(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) mode.phi[k] = phi[k] / surface;
  return mode;
}

}  // namespace solwave
