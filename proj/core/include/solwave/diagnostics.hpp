/// Verification layer: recovers the physical fields from a computed wave and
/// evaluates every integral identity, conserved quantity, bound, and shape
/// property the solution must satisfy, with relative residuals normalized by
/// the largest constituent term. Quadrature is trapezoid in q and Simpson in
/// p, matching the solver stencil's order.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solwave/sturm.hpp"
#include "solwave/wavesolve.hpp"

namespace solwave {

struct PhysicalFields {
  StripGrid grid;
  std::vector<double> u, v;  // velocity on the grid (q-major)
  std::vector<double> eta;   // surface displacement per column
  double sup_u_over_c = 0.0;
  double stagnation_margin = 0.0;  // min over grid of (c - u) / c
};

/// c - u = 1/h_p, v = -h_q/h_p, eta = h(., 0) - H(0); second-order stencils,
/// one-sided at the bed and surface.
PhysicalFields recover_physical(const WaveSolution& sol);

struct IdentityRecord {
  std::string name;
  std::vector<std::pair<std::string, double>> terms;
  double total = 0.0;
  double scale = 0.0;     // largest |term|
  double residual = 0.0;  // |total| / scale  (0 when scale is 0)
  bool defined = true;
};

struct BoundVerdict {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
  bool applicable = true;
};

struct FlowForceRecord {
  std::vector<double> per_column;
  double formula = 0.0;       // -2 int(gamma H) dp + lambda d + g d^2/2
  double column_spread = 0.0; // max column-to-column deviation / |S|
  double formula_gap = 0.0;   // |mean - formula| / |S|
};

struct ShapeReport {
  double symmetry_error = 0.0;
  double crest_q = 0.0;
  int monotonicity_violations = 0;
  double fitted_decay_rate = 0.0;
  double expected_decay_rate = 0.0;  // sqrt(mu_1)
  double decay_gap = 0.0;            // relative
  double fit_window_lo = 0.0, fit_window_hi = 0.0;
  bool fit_ok = false;
};

struct DiagnosticsReport {
  double froude = 0.0;
  double lambda_ratio = 0.0;
  double sigma = 0.0;
  double amplitude = 0.0;  // max eta
  double min_eta = 0.0;
  double mass = 0.0;       // int eta dq
  double mass_eta2 = 0.0;  // int eta^2 dq
  double sup_u_over_c = 0.0;

  double bernoulli_surface_residual = 0.0;  // scaled by g d
  double bernoulli_interior_residual = 0.0; // zero by construction

  FlowForceRecord flow_force;
  IdentityRecord identity_lower;
  IdentityRecord identity_classic;
  IdentityRecord identity_extra;
  IdentityRecord identity_sum;      // linear combination of the two above
  IdentityRecord identity_tension;  // includes the tension term when sigma!=0
  std::optional<double> starr_residual;           // irrotational only
  std::optional<double> starr_tension_residual;   // irrotational, sigma != 0

  std::vector<BoundVerdict> bounds;
  ShapeReport shape;

  bool all_applicable_bounds_hold() const;
};

/// Max surface value of the pressure reconstructed from Bernoulli's law
/// (with the tension flux subtracted when sigma != 0), scaled by g d. The
/// interior residual is zero by construction and asserted so.
double bernoulli_residual(const WaveSolution& sol);

FlowForceRecord flow_force(const WaveSolution& sol);

IdentityRecord identity_lower(const WaveSolution& sol);
IdentityRecord identity_classic(const WaveSolution& sol);
IdentityRecord identity_extra(const WaveSolution& sol);
IdentityRecord identity_tension(const WaveSolution& sol);

std::vector<BoundVerdict> check_bounds(const WaveSolution& sol);

/// Symmetry/monotonicity/decay checks on the reflected full-line solution.
/// The decay fit uses |q| in [L/2, 0.9 L] clipped to samples above the
/// roundoff floor; refuses the fit below amplitude 1e-10 d.
ShapeReport shape_checks(const WaveSolution& sol, const SturmSpectrum& spectrum);

/// Every check in one report. `spectrum` may be null (shape decay fit and
/// its expected rate are then skipped).
DiagnosticsReport run_diagnostics(const WaveSolution& sol,
                                  const SturmSpectrum* spectrum);

/// True when the profile's vorticity vanishes identically (to roundoff).
bool is_irrotational(const AsymptoticState& state);

/// Serialization (schema: name, lhs, rhs, residual, verdict per CSV row).
std::string report_to_json_text(const DiagnosticsReport& report);
std::string report_to_csv_text(const DiagnosticsReport& report,
                               double identity_tol, double flow_force_tol);

}  // namespace solwave
