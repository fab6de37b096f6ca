#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wasstv/grid.hpp"

namespace wasstv {

/// Kinetic-energy integrand as an extended-real map:
///   psi(t, x) = |x|^2 / (2t)  if t > 0,
///               0             if t = 0 and x = 0,
///               +inf          otherwise.
/// Convex, lower semicontinuous and positively 1-homogeneous. +inf is a
/// sentinel (std::numeric_limits<double>::infinity()), never a trap.
double psi(double t, const std::array<double, 2>& x);

/// Per-slice mass, drift and energy diagnostics of a (rho, m) pair. The
/// energy field carries the face-collocated sum (see bb_energy_staggered),
/// which is the finite, scheme-consistent value for solver output.
struct TransportDiagnostics {
  double bb_energy = 0.0;            // >= 0, possibly +inf
  std::vector<double> mass_profile;  // nt entries, sum(slice) * dx * dy
  double mass_drift = 0.0;           // max relative deviation from slice 0
  double momentum_l1 = 0.0;          // sum |m_centered| * dx * dy * dt
};

/// Discrete kinetic energy sum_cells psi(rho, m_centered) * dx*dy*dt, with
/// the momentum averaged onto the centered grid. Cells with rho <= eps_zero
/// count as empty: they contribute 0 when |m_centered| <= eps_zero and make
/// the result +inf otherwise; rho < -eps_zero also gives +inf.
///
/// Note: on converged primal-dual iterates this centered collocation is
/// +inf by construction, because faces bordering an exactly-empty cell
/// carry the flux of their occupied neighbor and the two-point average
/// smears half of it onto the empty cell. Use bb_energy_staggered to
/// evaluate the energy of solver output.
double bb_energy(const DensityField& rho, const MomentumField& m,
                 const SpaceTimeGrid& g, double eps_zero = 1e-12);

/// Face-collocated kinetic energy
///   sum_faces psi((rho_i + rho_{i-1})/2, m_face) * dx*dy*dt,
/// the discrete functional the primal-dual scheme actually minimizes (its
/// density prox and momentum update are derived from it). Agrees with
/// bb_energy to discretization error on smooth positive fields, stays
/// finite on converged iterates, is exactly 1-homogeneous, and returns
/// +inf for genuinely infeasible pairs (momentum across empty face pairs,
/// or rho < -eps_zero).
double bb_energy_staggered(const DensityField& rho, const MomentumField& m,
                           const SpaceTimeGrid& g, double eps_zero = 1e-12);

/// Duality-gap diagnostic for the Legendre representation
///   psi(t, x) = sup { a*t + b.x : a + |b|^2/2 <= 0 }.
/// Evaluates the supremum over a candidate set containing b = 0, the
/// analytic maximizer b = x/t, and seeded Gaussian samples around it (each
/// with a = -|b|^2/2), and returns psi minus the best value. Nonnegative up
/// to rounding, and weakly decreasing in n_samples for a fixed seed (the
/// candidate sets are nested). Throws std::domain_error when psi is +inf.
double legendre_gap(double t, const std::array<double, 2>& x, int n_samples,
                    std::uint64_t seed);

TransportDiagnostics diagnostics(const DensityField& rho,
                                 const MomentumField& m,
                                 const SpaceTimeGrid& g,
                                 double eps_zero = 1e-12);

/// Total space-time mass sum_k mass_profile[k] * dt.
double spacetime_mass(const TransportDiagnostics& d, const SpaceTimeGrid& g);

/// Discrete integrability estimate: momentum_l1 <= 2 sqrt(bb_energy *
/// spacetime_mass) up to the relative tolerance. (Cauchy-Schwarz on the
/// face sums: |m_centered|_1 <= sum_faces |m_f| w and sum_faces rho_pair w
/// <= 2 rho(X), which combine to the factor 2.) Holds vacuously when the
/// energy is +inf.
bool integrability_ok(const TransportDiagnostics& d, const SpaceTimeGrid& g,
                      double rel_tol = 1e-9);

/// sqrt(2 * bb_energy_staggered): transport-distance estimate of the pair.
/// Throws std::domain_error when the energy is infinite.
double w2_estimate(const DensityField& rho, const MomentumField& m,
                   const SpaceTimeGrid& g, double eps_zero = 1e-12);

}  // namespace wasstv
