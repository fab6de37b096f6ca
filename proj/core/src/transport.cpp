#include "wasstv/transport.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "wasstv/diffops.hpp"

namespace wasstv {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double psi(double t, const std::array<double, 2>& x) {
  const double x2 = x[0] * x[0] + x[1] * x[1];
  if (t > 0.0) return 0.5 * x2 / t;
  if (t == 0.0 && x2 == 0.0) return 0.0;
  return kInf;
}

double bb_energy(const DensityField& rho, const MomentumField& m,
                 const SpaceTimeGrid& g, double eps_zero) {
  const double w = g.dx * g.dy * g.dt;
  double acc = 0.0;
  for (int k = 0; k < g.nt; ++k) {
    for (int i = 0; i < g.nx; ++i) {
      for (int j = 0; j < g.ny; ++j) {
        const double r = rho(k, i, j);
        if (r < -eps_zero) return kInf;
        const double cx = 0.5 * (m.mx(k, i + 1, j) + m.mx(k, i, j));
        const double cy = 0.5 * (m.my(k, i, j + 1) + m.my(k, i, j));
        const double m2 = cx * cx + cy * cy;
        if (r <= eps_zero) {
          if (m2 > eps_zero * eps_zero) return kInf;
          continue;  // empty cell without momentum contributes nothing
        }
        acc += 0.5 * m2 / r;
      }
    }
  }
  return acc * w;
}

double bb_energy_staggered(const DensityField& rho, const MomentumField& m,
                           const SpaceTimeGrid& g, double eps_zero) {
  const double w = g.dx * g.dy * g.dt;
  double acc = 0.0;
  for (int k = 0; k < g.nt; ++k) {
    for (int i = 0; i < g.nx; ++i) {
      for (int j = 0; j < g.ny; ++j) {
        if (rho(k, i, j) < -eps_zero) return kInf;
      }
    }
    // x faces: stored index i pairs cells i-1 and i.
    for (int i = 1; i < g.nx; ++i) {
      for (int j = 0; j < g.ny; ++j) {
        const double rs = rho(k, i, j) + rho(k, i - 1, j);
        const double mf = m.mx(k, i, j);
        if (rs <= eps_zero) {
          if (std::abs(mf) > eps_zero) return kInf;
          continue;
        }
        acc += mf * mf / rs;  // = |m|^2 / (2 * average rho)
      }
    }
    for (int i = 0; i < g.nx; ++i) {
      for (int j = 1; j < g.ny; ++j) {
        const double rs = rho(k, i, j) + rho(k, i, j - 1);
        const double mf = m.my(k, i, j);
        if (rs <= eps_zero) {
          if (std::abs(mf) > eps_zero) return kInf;
          continue;
        }
        acc += mf * mf / rs;
      }
    }
  }
  return acc * w;
}

double legendre_gap(double t, const std::array<double, 2>& x, int n_samples,
                    std::uint64_t seed) {
  const double value = psi(t, x);
  if (!std::isfinite(value))
    throw std::domain_error("legendre_gap: psi(t, x) is infinite, the supremum is unbounded");
  if (n_samples < 1) throw std::invalid_argument("legendre_gap: n_samples >= 1 required");

  auto pay = [&](double bx, double by) {
    const double a = -0.5 * (bx * bx + by * by);
    return a * t + bx * x[0] + by * x[1];
  };

  // b = 0 (always feasible) and the analytic maximizer b = x/t anchor the
  // candidate set; the remaining samples scatter around the maximizer.
  double best = pay(0.0, 0.0);
  int used = 1;
  double bsx = 0.0, bsy = 0.0;
  if (t > 0.0) {
    bsx = x[0] / t;
    bsy = x[1] / t;
    if (used < n_samples) {
      best = std::max(best, pay(bsx, bsy));
      ++used;
    }
  }
  if (used < n_samples) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double scale = std::max(std::hypot(bsx, bsy), 1.0);
    for (; used < n_samples; ++used) {
      const double bx = bsx + scale * gauss(rng);
      const double by = bsy + scale * gauss(rng);
      best = std::max(best, pay(bx, by));
    }
  }
  return value - best;
}

TransportDiagnostics diagnostics(const DensityField& rho,
                                 const MomentumField& m,
                                 const SpaceTimeGrid& g, double eps_zero) {
  TransportDiagnostics d;
  d.bb_energy = bb_energy_staggered(rho, m, g, eps_zero);

  d.mass_profile.resize(g.nt);
  for (int k = 0; k < g.nt; ++k) {
    double s = 0.0;
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) s += rho(k, i, j);
    d.mass_profile[k] = s * g.dx * g.dy;
  }

  const double m0 = d.mass_profile[0];
  const double denom = std::abs(m0) > 0.0 ? std::abs(m0)
                                          : std::numeric_limits<double>::min();
  double drift = 0.0;
  for (int k = 1; k < g.nt; ++k)
    drift = std::max(drift, std::abs(d.mass_profile[k] - m0) / denom);
  d.mass_drift = drift;

  double l1 = 0.0;
  for (int k = 0; k < g.nt; ++k) {
    for (int i = 0; i < g.nx; ++i) {
      for (int j = 0; j < g.ny; ++j) {
        const double cx = 0.5 * (m.mx(k, i + 1, j) + m.mx(k, i, j));
        const double cy = 0.5 * (m.my(k, i, j + 1) + m.my(k, i, j));
        l1 += std::sqrt(cx * cx + cy * cy);
      }
    }
  }
  d.momentum_l1 = l1 * g.dx * g.dy * g.dt;
  return d;
}

double spacetime_mass(const TransportDiagnostics& d, const SpaceTimeGrid& g) {
  double s = 0.0;
  for (double mk : d.mass_profile) s += mk;
  return s * g.dt;
}

bool integrability_ok(const TransportDiagnostics& d, const SpaceTimeGrid& g,
                      double rel_tol) {
  if (!std::isfinite(d.bb_energy)) return true;
  const double bound = 2.0 * std::sqrt(d.bb_energy * spacetime_mass(d, g));
  return d.momentum_l1 <= bound * (1.0 + rel_tol) + rel_tol;
}

double w2_estimate(const DensityField& rho, const MomentumField& m,
                   const SpaceTimeGrid& g, double eps_zero) {
  const double b = bb_energy_staggered(rho, m, g, eps_zero);
  if (!std::isfinite(b))
    throw std::domain_error("w2_estimate: kinetic energy is infinite");
  return std::sqrt(2.0 * b);
}

}  // namespace wasstv
