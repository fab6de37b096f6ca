#pragma once

#include "wasstv/grid.hpp"

namespace wasstv {

// Discrete differential operators on the centered/staggered grids and their
// exact algebraic adjoints: <A x, y> = <x, A^T y> with plain unweighted sums
// of entrywise products as the inner product. All operators are linear and
// pure; the *_into variants write into preallocated outputs and are the ones
// the solver hot loop uses.

/// Time derivative of a centered field: forward difference at k = 0,
/// central difference for 0 < k < nt-1, backward difference at k = nt-1.
CenteredField dt_forward(const CenteredField& rho, const SpaceTimeGrid& g);
void dt_forward_into(const CenteredField& rho, const SpaceTimeGrid& g,
                     CenteredField& out);

/// Exact transpose of dt_forward. For nt >= 4 this is the five-branch
/// stencil (k = 0, 1, interior, nt-2, nt-1); for nt in {2, 3} the explicit
/// matrix transpose is applied.
CenteredField dt_adjoint(const CenteredField& lam, const SpaceTimeGrid& g);
void dt_adjoint_into(const CenteredField& lam, const SpaceTimeGrid& g,
                     CenteredField& out);

/// Staggered divergence: (div m)[k,i,j] = (mx[k,i+1,j] - mx[k,i,j])/dx
///                                      + (my[k,i,j+1] - my[k,i,j])/dy,
/// where stored index i of mx corresponds to half-index i - 1/2.
CenteredField divergence(const MomentumField& m, const SpaceTimeGrid& g);
void divergence_into(const MomentumField& m, const SpaceTimeGrid& g,
                     CenteredField& out);

/// div^T lambda = -grad lambda on the staggered grid: the x component at
/// half-index i - 1/2 (1 <= i <= nx-1) is -(lam[i] - lam[i-1])/dx, zero at
/// the boundary half-indices; y analogous. Exact adjoint of divergence.
MomentumField div_adjoint(const CenteredField& lam, const SpaceTimeGrid& g);
void div_adjoint_into(const CenteredField& lam, const SpaceTimeGrid& g,
                      MomentumField& out);

/// Forward-difference spatial gradient of an image, zero at the last
/// index: gx[i,j] = (u[i+1,j] - u[i,j])/dx for i < nx-1, else 0.
GradientPair grad_spatial(const SpatialImage& u, const SpaceTimeGrid& g);
void grad_spatial_into(const SpatialImage& u, const SpaceTimeGrid& g,
                       GradientPair& out);

/// Exact adjoint of grad_spatial: entry (i,j) receives
/// -(zx[i,j] - zx[i-1,j])/dx with zx[-1] = 0 and row nx-1 of zx treated as
/// zero (grad_spatial never produces it, so the pairing cannot see it);
/// y analogous.
SpatialImage grad_adjoint(const GradientPair& z, const SpaceTimeGrid& g);
void grad_adjoint_into(const GradientPair& z, const SpaceTimeGrid& g,
                       SpatialImage& out);

/// Two-neighbor average of each momentum component onto the centered grid:
/// cx[k,i,j] = (mx[k,i+1,j] + mx[k,i,j])/2, cy analogous.
void center_average(const MomentumField& m, const SpaceTimeGrid& g,
                    CenteredField& cx, CenteredField& cy);

}  // namespace wasstv
