/// Sturm-Liouville eigenproblem of the linearization around the trivial
/// wave: (phi_p / H_p^3)_p + mu * phi / H_p = 0 on (-m, 0) with phi(-m) = 0
/// and the Robin condition phi_p(0)/H_p^3(0) = g * phi(0). The two smallest
/// eigenvalues control criticality (mu_1 > 0 iff F > 1), the small-amplitude
/// wave shape, and the far-field decay rate sqrt(mu_1).
#pragma once

#include <vector>

#include "solwave/shear.hpp"

namespace solwave {

class InvalidStateError : public Error {
 public:
  using Error::Error;
};

struct SturmSpectrum {
  std::vector<double> mu;    // ascending; mu[0], mu[1] are mu_1, mu_2
  std::vector<double> phi1;  // eigenfunction samples on the state p-grid,
                             // phi1.front() = 0, normalized phi1.back() = 1
  double s1 = 0.0;           // asymptotics exponent, midpoint of
                             // (sqrt(mu1), min(2 sqrt(mu1), sqrt(mu2)));
                             // NaN unless mu2 > mu1 > 0
};

/// Symmetric second-order discretization on the state's p-grid; eigenvalues
/// extracted by inertia-count bisection on the tridiagonal pencil, the first
/// eigenfunction by shifted inverse iteration.
SturmSpectrum solve_sturm(const AsymptoticState& state, int n_eigs = 2);

/// Residual of the equivalent physical-variable eigenproblem for
/// phi_tilde(y) = (c - U(y)) * phi_1(p(y)), evaluated on the image of the
/// p-grid with second-order nonuniform stencils. Dimensionless (normalized
/// by g |phi|/d); vanishes at second order under refinement.
double physical_equivalence_residual(const AsymptoticState& state,
                                     const SturmSpectrum& spectrum);

struct DecayMode {
  double mu = 0.0;          // squared decay rate of the far-field mode
  std::vector<double> phi;  // mode samples on the state p-grid, phi(0) = 1
};

/// Far-field decay mode when the dynamic condition carries surface tension:
/// same interior problem with Robin coefficient (g - sigma * mu). Solved by
/// defect-sign bisection on the marched recurrence; reduces to mu_1 of
/// solve_sturm at sigma = 0. Throws when no positive mode exists (flat far
/// field cannot shed a solitary tail, e.g. subcritical without tension).
DecayMode tension_decay_mode(const AsymptoticState& state, double sigma);

}  // namespace solwave
