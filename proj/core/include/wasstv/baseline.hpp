#pragma once

#include <vector>

#include "wasstv/forward.hpp"
#include "wasstv/grid.hpp"
#include "wasstv/solver.hpp"

namespace wasstv {

/// Configuration of the TV-regularized reference model
///   min_u 1/2 ||K u - f||^2 + alpha_tv * TV(u),
/// solved by primal-dual iterations. tau/sigma <= 0 means both are set to
/// 1/||(K; grad)|| estimated by power iteration.
struct TvConfig {
  double alpha_tv = 1e-3;
  double tau = 0.0;
  double sigma = 0.0;
  int max_iters = 2000;
  double rel_tol = 1e-7;
  int log_every = 50;
};

struct TvResult {
  SpatialImage u;
  std::vector<IterationRecord> history;  // bb and mass_drift columns stay 0
};

/// Primal-dual solve of the TV model, initialized at the zero-filling
/// reconstruction with zero duals. The TV term is isotropic (pixelwise l2
/// norm, dual ball of radius alpha_tv); u is unconstrained in sign. The
/// logged objective is the optimized discrete functional
/// 1/2 ||K u - f||^2 + alpha_tv * sum |grad u|.
TvResult tv_reconstruct(const KSpaceData& f, const TvConfig& cfg,
                        const SpaceTimeGrid& g);

}  // namespace wasstv
