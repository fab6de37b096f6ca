#pragma once

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "wasstv/forward.hpp"
#include "wasstv/grid.hpp"
#include "wasstv/transport.hpp"

namespace wasstv {

enum class SolverMode { reconstruct, geodesic };

struct SolverConfig {
  double alpha = 100.0;  // data fidelity weight
  double beta = 1e-3;    // TV weight (dual-ball radius)
  double tau = 1e-3;     // primal step
  double sigma = 1e-2;   // dual step
  int nt = 15;           // time points; must match the grid
  int max_iters = 5000;
  double rel_tol = 1e-6;  // stop when ||(rho,m)^{l+1}-(rho,m)^l|| / ||(rho,m)^l|| falls below
  SolverMode mode = SolverMode::reconstruct;
  int log_every = 50;
  int threads = 1;
  double eps_zero = 1e-12;  // empty-cell threshold for the energy monitor
};

struct IterationRecord {
  int iter = 0;
  double J = 0.0;         // bb + fidelity + tv
  double bb = 0.0;
  double fidelity = 0.0;
  double tv = 0.0;
  double mass_drift = 0.0;
  double rel_change = 0.0;
};

struct SolverState {
  DensityField rho;
  MomentumField m;
  DensityField rho_bar;  // extrapolated copies
  MomentumField m_bar;
  DualState duals;
  int iter = 0;
  std::vector<IterationRecord> history;
};

/// Called at every logged iteration with the state after that iteration.
using IterationObserver =
    std::function<void(const SolverState&, const IterationRecord&)>;

/// Pixelwise projection onto the ball |(zx,zy)|_2 <= beta:
/// each pixel vector is scaled by 1/max(1, |z|/beta). beta = 0 gives zeros.
GradientPair project_linf_ball(const GradientPair& zeta, double beta);

/// One dual ascent step on (lambda, eta, zeta) from the extrapolated
/// (rho_bar, m_bar):
///   lambda += sigma (dt rho_bar + div m_bar)
///   eta     = (eta + sigma (K rho1_bar - f)) / (1 + sigma/alpha), masked
///   zeta    = P_beta(zeta + sigma grad rho1_bar)
/// In geodesic mode eta and zeta stay frozen at zero.
void dual_update(SolverState& state, const SolverConfig& cfg,
                 const KSpaceData& f, const SpaceTimeGrid& g);

/// max(0, largest real root of (rho + tau)^2 (rho - rho_tilde) = s), the
/// proximal density update. Analytic cubic (trigonometric/Cardano) with a
/// Newton polish and a safeguarded-bisection fallback. Requires tau > 0,
/// s >= 0.
double rho_prox(double rho_tilde, double s, double tau);

/// Staggered momentum update: interior face value
///   (rho_i + rho_{i-1}) / (rho_i + rho_{i-1} + 2 tau) * m_tilde,
/// zero at boundary faces.
MomentumField momentum_update(const MomentumField& m_tilde,
                              const DensityField& rho_new,
                              const SpaceTimeGrid& g, double tau,
                              int threads = 1);

/// One primal descent step: forms m_tilde = m - tau div^T lambda and
/// rho_tilde = rho - tau dt^T lambda, adds the data and TV adjoint pulls
/// tau (K^T eta + grad^T zeta) at the final slice, solves the cubic prox
/// per cell, updates the momentum, and applies the endpoint resets
/// (slice 0 := mu always; slice nt-1 := nu in geodesic mode).
std::pair<DensityField, MomentumField> primal_update(
    const SolverState& state, const DualState& duals, const SolverConfig& cfg,
    const KSpaceData& f, const SpatialImage& mu, const SpaceTimeGrid& g,
    const SpatialImage* nu = nullptr);

/// Objective monitor: bb is the discrete kinetic energy, fidelity is
/// (alpha/2) ||K rho_1 - f||^2, tv is beta * sum |grad rho_1| * dx*dy,
/// J their sum (+inf propagates from bb). Geodesic mode reports bb only.
IterationRecord objective(const DensityField& rho, const MomentumField& m,
                          const KSpaceData& f, const SolverConfig& cfg,
                          const SpaceTimeGrid& g);

/// Full primal-dual reconstruction from k-space data f with template mu
/// pinned as the t = 0 slice. Requires mu >= 0 with positive total mass.
/// Returns the final state (rho_1 = last slice is the reconstruction) and
/// the transport diagnostics of the returned (rho, m).
std::pair<SolverState, TransportDiagnostics> reconstruct(
    const KSpaceData& f, const SpatialImage& mu, const SolverConfig& cfg,
    const SpaceTimeGrid& g, const IterationObserver& observer = {});

/// Pinned-endpoint geodesic between mass-balanced images: the same loop
/// with the data and TV terms inactive and both endpoint slices overwritten
/// every iteration. Requires |mass(mu) - mass(nu)| <= 1e-6 mass(mu).
std::pair<SolverState, TransportDiagnostics> transport_geodesic(
    const SpatialImage& mu, const SpatialImage& nu, const SolverConfig& cfg,
    const SpaceTimeGrid& g, const IterationObserver& observer = {});

/// Power-iteration estimate of the norm of the stacked forward operator
/// (continuity block, plus the data and TV rows in reconstruct mode).
double estimate_operator_norm(const SolverConfig& cfg, const SamplingMask* mask,
                              const SpaceTimeGrid& g, int steps = 20);

/// Convergence-log schema: "iter,J,bb,fidelity,tv,mass_drift,rel_change".
void write_history_csv(const std::vector<IterationRecord>& history,
                       std::ostream& os);

}  // namespace wasstv
