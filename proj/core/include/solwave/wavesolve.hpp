/// Solitary-wave computation on the truncated strip: divergence-form
/// second-order discretization of the height-function system, analytic
/// sparse Jacobian, damped Newton with a positivity barrier on h_p, and the
/// small-amplitude seed built from the Sturm-Liouville mode.
///
/// The background height H enters the scheme through its samples on the
/// grid's p-nodes, differenced with the same stencils as h, so the trivial
/// wave h = H has exactly zero residual in floating point.
#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "solwave/shear.hpp"
#include "solwave/sturm.hpp"

namespace solwave {

class DegenerateFieldError : public Error {
 public:
  using Error::Error;
};

class SubcriticalSeedError : public Error {
 public:
  using Error::Error;
};

/// Uniform tensor grid on the truncated strip. Symmetric-half grids store
/// q in [0, L] (even reflection across q = 0); full grids store [-L, L].
/// p runs over [-m, 0] with exact endpoints. Index (j, i): j is the q
/// column, i the p row, i = 0 at the bed.
struct StripGrid {
  double half_length = 0.0;  // L
  int nq = 0, np = 0;        // point counts
  bool symmetric_half = true;
  double strip_depth = 0.0;  // m
  double dq = 0.0, dp = 0.0;

  static StripGrid half(double L, int nq, int np, double m);
  static StripGrid full(double L, int nq, int np, double m);

  double q(int j) const {
    return symmetric_half ? j * dq : -half_length + j * dq;
  }
  double p(int i) const {
    return -strip_depth * static_cast<double>(np - 1 - i) / (np - 1);
  }
  int index(int j, int i) const { return j * np + i; }
  int size() const { return nq * np; }
  bool far_column(int j) const {
    return j == nq - 1 || (!symmetric_half && j == 0);
  }
};

/// Height values on a StripGrid, q-major storage.
struct HeightField {
  StripGrid grid;
  std::vector<double> h;

  double& at(int j, int i) { return h[static_cast<std::size_t>(grid.index(j, i))]; }
  double at(int j, int i) const {
    return h[static_cast<std::size_t>(grid.index(j, i))];
  }
  /// Smallest forward p-difference of h; must stay positive.
  double min_hp() const;
};

/// Background H sampled on the grid's p-nodes (the samples every scheme
/// ingredient shares: far-field closure, trivial field, residual).
std::vector<double> sample_height(const AsymptoticState& state,
                                  const StripGrid& grid);

/// h = H on the whole grid.
HeightField trivial_field(const AsymptoticState& state, const StripGrid& grid);

struct ResidualField {
  StripGrid grid;
  std::vector<double> r;
  double at(int j, int i) const {
    return r[static_cast<std::size_t>(grid.index(j, i))];
  }
};

/// Discrete residual of the height system. Rows: interior nodes carry the
/// divergence-form momentum balance, the surface row the Bernoulli condition
/// (plus the surface-tension flux when sigma != 0), the bed row h, and the
/// far-field columns the Dirichlet closure h - H. Throws
/// DegenerateFieldError when a forward p-difference of h is nonpositive.
ResidualField residual(const HeightField& field, const AsymptoticState& state,
                       double sigma);

/// Weighted max-norm making all residual rows commensurable (interior rows
/// scale with the flux, Dirichlet rows with g); units of velocity^2, so the
/// Newton tolerance reads tol_scale * g * d.
double residual_norm(const ResidualField& res, const AsymptoticState& state);

/// Exact partial derivatives of the discrete residual, 9-point stencil.
struct JacobianOperator {
  StripGrid grid;
  Eigen::SparseMatrix<double> matrix;  // (nq*np) x (nq*np), row-major layout

  std::vector<double> apply(std::span<const double> direction) const;
};

JacobianOperator jacobian(const HeightField& field,
                          const AsymptoticState& state, double sigma);

/// Small-amplitude seed h = H + r * phi(p) * sech^2(rate * q / 2) for a
/// supplied vertical mode (samples on the state p-grid, surface value 1).
HeightField seed_from_mode(const AsymptoticState& state,
                           std::span<const double> phi, double decay_rate,
                           double amplitude, const StripGrid& grid);

/// Seed from the first Sturm-Liouville mode; requires mu_1 > 0 (throws
/// SubcriticalSeedError otherwise). The seed's crest displacement equals
/// `amplitude` by the phi_1(0) = 1 normalization.
HeightField initial_guess(const AsymptoticState& state,
                          const SturmSpectrum& spectrum, double amplitude,
                          const StripGrid& grid);

struct SolveOptions {
  double tol_scale = 1e-10;     // residual tolerance = tol_scale * g * d
  int max_iters = 25;
  double min_hp_factor = 1e-3;  // barrier at factor * min discrete H_p
  double backtrack = 0.5;
  double min_step = 1.0 / 1048576.0;  // 2^-20
};

enum class SolveStatus {
  Converged,
  LineSearchStall,
  IterationCap,
  DegenerateField,
};

struct WaveSolution {
  HeightField field;
  AsymptoticState state;
  double sigma = 0.0;
  double residual_norm = 0.0;
  int newton_iters = 0;
  double amplitude = 0.0;  // max over q of h(q, 0-surface) - H(0)
  double tolerance = 0.0;
  SolveStatus status = SolveStatus::Converged;
  bool converged = false;
  std::string message;

  double surface_eta(int j) const {
    return field.at(j, field.grid.np - 1) - state.profile.d;
  }
};

/// Damped Newton with residual-norm backtracking (factor 0.5, floor 2^-20);
/// trial iterates violating the h_p barrier are rejected by step halving.
/// Returns a WaveSolution either converged or carrying a diagnosed failure
/// with the last residual norm.
WaveSolution newton_solve(const HeightField& guess,
                          const AsymptoticState& state, double sigma,
                          const SolveOptions& opts = {});

/// Even reflection of a symmetric-half solution onto the full line
/// (identity on full-grid solutions).
WaveSolution reflect_full(const WaveSolution& sol);

/// max over the grid of u / c computed from the recovered velocity.
double sup_u_fraction(const HeightField& field, double wave_speed);

}  // namespace solwave
