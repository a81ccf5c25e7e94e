/// Pseudo-arclength continuation of solitary-wave branches along the
/// one-parameter family c - U = F * ustar. The branch parameter couples the
/// Froude number and the crest displacement, so turning points in F are
/// passed; the strip depth m(F) changes along the branch and the grid is
/// rebuilt per step with a fixed normalized p-layout.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "solwave/wavesolve.hpp"

namespace solwave {

enum class BranchEndpoint {
  TargetCount,   ///< requested number of points reached
  Stagnation,    ///< flow approaching u = c (or the h_p barrier)
  LargeFroude,   ///< Froude cap exceeded
  StepFloor,     ///< arclength step halved below the floor
};

std::string to_string(BranchEndpoint endpoint);

struct BranchPoint {
  double froude = 0.0;
  double amplitude = 0.0;       // crest displacement h(0, surface) - d
  double max_eta = 0.0;
  double sup_u_over_c = 0.0;
  double min_hp = 0.0;
  double arclength = 0.0;       // cumulative
  std::shared_ptr<const WaveSolution> solution;
};

struct ContinuationOptions {
  int np = 33;
  int nq = 301;
  double domain_factor = 40.0;  // L = factor / sqrt(mu_1) at the start
  double step = 0.02;           // arclength step in (amplitude/d, F)
  double max_step = 0.06;
  double min_step = 1e-5;
  int max_points = 20;
  double froude_cap = 4.0;
  double stagnation_fraction = 0.95;  // sup u / c that ends the branch
  double seed_amplitude = 0.0;        // 0 => d * (F^2 - 1)
  SolveOptions solve;
};

struct ContinuationBranch {
  UProfile ustar;
  double g = 0.0, d = 0.0;
  std::vector<BranchPoint> points;
  BranchEndpoint endpoint = BranchEndpoint::TargetCount;
  std::string endpoint_detail;
};

/// Starts at froude_start (> 1, first solve seeded from the Sturm mode) and
/// marches `direction` (+1 grows the crest). Throws when the family
/// normalization fails or the first solve does not converge.
ContinuationBranch continue_branch(const UProfile& ustar, double g, double d,
                                   double froude_start, int direction,
                                   const ContinuationOptions& opts = {});

}  // namespace solwave
