#include "wasstv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "wasstv/diffops.hpp"
#include "wasstv/parallel.hpp"

namespace wasstv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double largest_root_bisect(double rho_tilde, double s, double tau) {
  // f(x) = (x+tau)^2 (x - rho_tilde) - s is strictly increasing beyond
  // lo = max(rho_tilde, -tau), where f(lo) = -s <= 0, so the unique root
  // past lo is the largest real root.
  auto f = [&](double x) {
    const double xt = x + tau;
    return xt * xt * (x - rho_tilde) - s;
  };
  double lo = std::max(rho_tilde, -tau);
  double hi = lo + std::cbrt(s) + tau + 1.0;
  if (f(lo) >= 0.0) return lo;
  while (f(hi) < 0.0) hi += hi - lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double rho_prox(double rho_tilde, double s, double tau) {
  if (s <= 0.0) return std::max(0.0, std::max(rho_tilde, -tau));

  // (x+tau)^2 (x - rho_tilde) - s = x^3 + b x^2 + c x + d
  const double b = 2.0 * tau - rho_tilde;
  const double c = tau * tau - 2.0 * tau * rho_tilde;
  const double d = -tau * tau * rho_tilde - s;
  const double p = c - b * b / 3.0;
  const double q = (2.0 * b * b * b - 9.0 * b * c) / 27.0 + d;

  double x;
  const double disc = 0.25 * q * q + p * p * p / 27.0;
  if (disc > 0.0) {
    // one real root (Cardano, cancellation-safe branch)
    const double r = std::sqrt(disc);
    const double big = (q >= 0.0) ? -std::cbrt(0.5 * q + r) : std::cbrt(-0.5 * q + r);
    const double other = (big == 0.0) ? 0.0 : -p / (3.0 * big);
    x = big + other - b / 3.0;
  } else {
    // three real roots; k = 0 of the trigonometric form is the largest
    const double mp3 = std::sqrt(std::max(0.0, -p / 3.0));
    if (mp3 == 0.0) {
      x = -b / 3.0;
    } else {
      const double arg = std::clamp(1.5 * q / (p * mp3), -1.0, 1.0);
      x = 2.0 * mp3 * std::cos(std::acos(arg) / 3.0) - b / 3.0;
    }
  }

  for (int it = 0; it < 2; ++it) {
    const double xt = x + tau;
    const double fx = xt * xt * (x - rho_tilde) - s;
    const double fpx = xt * (3.0 * x - 2.0 * rho_tilde + tau);
    if (!std::isfinite(fx) || fpx == 0.0) break;
    x -= fx / fpx;
  }

  const double scale =
      std::max({1.0, std::abs(rho_tilde * rho_tilde * rho_tilde), s});
  const double xt = x + tau;
  if (!std::isfinite(x) ||
      std::abs(xt * xt * (x - rho_tilde) - s) > 1e-11 * scale) {
    x = largest_root_bisect(rho_tilde, s, tau);
  }
  return std::max(0.0, x);
}

GradientPair project_linf_ball(const GradientPair& zeta, double beta) {
  GradientPair out(zeta.gx.nx(), zeta.gx.ny());
  if (beta <= 0.0) return out;
  for (std::size_t p = 0; p < zeta.gx.size(); ++p) {
    const double zx = zeta.gx.data()[p];
    const double zy = zeta.gy.data()[p];
    const double nrm = std::sqrt(zx * zx + zy * zy);
    const double scale = 1.0 / std::max(1.0, nrm / beta);
    out.gx.data()[p] = zx * scale;
    out.gy.data()[p] = zy * scale;
  }
  return out;
}

MomentumField momentum_update(const MomentumField& m_tilde,
                              const DensityField& rho_new,
                              const SpaceTimeGrid& g, double tau, int threads) {
  MomentumField out(g);
  const int nx = g.nx, ny = g.ny;
  const double two_tau = 2.0 * tau;
  parallel_for(0, g.nt, threads, [&](std::int64_t klo, std::int64_t khi) {
    for (int k = static_cast<int>(klo); k < khi; ++k) {
      for (int i = 1; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
          const double rr = rho_new(k, i, j) + rho_new(k, i - 1, j);
          out.mx(k, i, j) = rr / (rr + two_tau) * m_tilde.mx(k, i, j);
        }
      }
      for (int i = 0; i < nx; ++i) {
        for (int j = 1; j < ny; ++j) {
          const double rr = rho_new(k, i, j) + rho_new(k, i, j - 1);
          out.my(k, i, j) = rr / (rr + two_tau) * m_tilde.my(k, i, j);
        }
      }
    }
  });
  return out;
}

namespace {

struct Workspace {
  CenteredField ct_a;   // dt rho_bar
  CenteredField ct_b;   // div m_bar
  MomentumField mt;     // m_tilde
  CenteredField rt;     // rho_tilde
  DensityField rho_new;
  MomentumField m_new;
  SpatialImage slice1;  // final slice of rho_bar
  SpatialImage ka;      // K^T eta
  SpatialImage ga;      // grad^T zeta
  GradientPair gtmp;

  explicit Workspace(const SpaceTimeGrid& g)
      : ct_a(g.nt, g.nx, g.ny),
        ct_b(g.nt, g.nx, g.ny),
        mt(g),
        rt(g.nt, g.nx, g.ny),
        rho_new(g.nt, g.nx, g.ny),
        m_new(g),
        slice1(g.nx, g.ny),
        ka(g.nx, g.ny),
        ga(g.nx, g.ny),
        gtmp(g.nx, g.ny) {}
};

void copy_slice(const DensityField& rho, int k, SpatialImage& out) {
  for (int i = 0; i < rho.n1(); ++i)
    for (int j = 0; j < rho.n2(); ++j) out(i, j) = rho(k, i, j);
}

void dual_update_ws(SolverState& st, const SolverConfig& cfg,
                    const KSpaceData& f, const SpaceTimeGrid& g,
                    Workspace& ws) {
  dt_forward_into(st.rho_bar, g, ws.ct_a);
  divergence_into(st.m_bar, g, ws.ct_b);
  const double sigma = cfg.sigma;
  double* lam = st.duals.lambda.data();
  const double* a = ws.ct_a.data();
  const double* b = ws.ct_b.data();
  const std::int64_t ncells = static_cast<std::int64_t>(st.duals.lambda.size());
  parallel_for(0, ncells, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t p = lo; p < hi; ++p) lam[p] += sigma * (a[p] + b[p]);
  });

  if (cfg.mode == SolverMode::geodesic) return;  // eta, zeta stay zero

  copy_slice(st.rho_bar, g.nt - 1, ws.slice1);
  const KSpaceData kb = fourier_forward(ws.slice1, f.mask);
  const double shrink = 1.0 / (1.0 + sigma / cfg.alpha);
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      if (f.mask.at(i, j)) {
        st.duals.eta(i, j) =
            (st.duals.eta(i, j) + sigma * (kb.values(i, j) - f.values(i, j))) *
            shrink;
      } else {
        st.duals.eta(i, j) = 0.0;
      }
    }
  }

  grad_spatial_into(ws.slice1, g, ws.gtmp);
  if (cfg.beta <= 0.0) {
    st.duals.zeta.gx.fill(0.0);
    st.duals.zeta.gy.fill(0.0);
    return;
  }
  for (std::size_t p = 0; p < ws.gtmp.gx.size(); ++p) {
    const double zx = st.duals.zeta.gx.data()[p] + sigma * ws.gtmp.gx.data()[p];
    const double zy = st.duals.zeta.gy.data()[p] + sigma * ws.gtmp.gy.data()[p];
    const double nrm = std::sqrt(zx * zx + zy * zy);
    const double scale = 1.0 / std::max(1.0, nrm / cfg.beta);
    st.duals.zeta.gx.data()[p] = zx * scale;
    st.duals.zeta.gy.data()[p] = zy * scale;
  }
}

void primal_update_ws(const SolverState& st, const SolverConfig& cfg,
                      const KSpaceData& f, const SpatialImage& mu,
                      const SpatialImage* nu, const SpaceTimeGrid& g,
                      Workspace& ws) {
  const double tau = cfg.tau;
  const int nx = g.nx, ny = g.ny, nt = g.nt;

  // m_tilde = m - tau div^T lambda, rho_tilde = rho - tau dt^T lambda
  div_adjoint_into(st.duals.lambda, g, ws.mt);
  {
    double* ox = ws.mt.mx.data();
    double* oy = ws.mt.my.data();
    const double* ix = st.m.mx.data();
    const double* iy = st.m.my.data();
    const std::int64_t nmx = static_cast<std::int64_t>(ws.mt.mx.size());
    const std::int64_t nmy = static_cast<std::int64_t>(ws.mt.my.size());
    parallel_for(0, nmx, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t p = lo; p < hi; ++p) ox[p] = ix[p] - tau * ox[p];
    });
    parallel_for(0, nmy, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t p = lo; p < hi; ++p) oy[p] = iy[p] - tau * oy[p];
    });
  }
  dt_adjoint_into(st.duals.lambda, g, ws.rt);
  {
    double* rt = ws.rt.data();
    const double* r = st.rho.data();
    const std::int64_t n = static_cast<std::int64_t>(ws.rt.size());
    parallel_for(0, n, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t p = lo; p < hi; ++p) rt[p] = r[p] - tau * rt[p];
    });
  }

  // Data and TV adjoints act on the final slice only.
  if (cfg.mode == SolverMode::reconstruct) {
    ws.ka = fourier_adjoint(st.duals.eta);
    grad_adjoint_into(st.duals.zeta, g, ws.ga);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        ws.rt(nt - 1, i, j) -= tau * (ws.ka(i, j) + ws.ga(i, j));
    (void)f;
  }

  // Cubic prox per cell with s = (tau/8)((mtx_{i+1/2}+mtx_{i-1/2})^2 + ...).
  const double tau8 = tau / 8.0;
  parallel_for(0, nt, cfg.threads, [&](std::int64_t klo, std::int64_t khi) {
    for (int k = static_cast<int>(klo); k < khi; ++k) {
      for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
          const double sx = ws.mt.mx(k, i + 1, j) + ws.mt.mx(k, i, j);
          const double sy = ws.mt.my(k, i, j + 1) + ws.mt.my(k, i, j);
          const double s = tau8 * (sx * sx + sy * sy);
          ws.rho_new(k, i, j) = rho_prox(ws.rt(k, i, j), s, tau);
        }
      }
    }
  });

  // Endpoint resets come before the momentum update so the pinned slices'
  // momentum is scaled by the pinned density. Deriving it from the
  // pre-reset prox output leaves finite momentum over near-vacuum cells at
  // the pinned slices, which breaks the m = rho*v scaling there.
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) ws.rho_new(0, i, j) = mu(i, j);
  if (cfg.mode == SolverMode::geodesic && nu) {
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) ws.rho_new(nt - 1, i, j) = (*nu)(i, j);
  }

  // Momentum from the fresh density.
  const double two_tau = 2.0 * tau;
  parallel_for(0, nt, cfg.threads, [&](std::int64_t klo, std::int64_t khi) {
    for (int k = static_cast<int>(klo); k < khi; ++k) {
      for (int j = 0; j < ny; ++j) {
        ws.m_new.mx(k, 0, j) = 0.0;
        ws.m_new.mx(k, nx, j) = 0.0;
      }
      for (int i = 1; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
          const double rr = ws.rho_new(k, i, j) + ws.rho_new(k, i - 1, j);
          ws.m_new.mx(k, i, j) = rr / (rr + two_tau) * ws.mt.mx(k, i, j);
        }
      }
      for (int i = 0; i < nx; ++i) {
        ws.m_new.my(k, i, 0) = 0.0;
        ws.m_new.my(k, i, ny) = 0.0;
        for (int j = 1; j < ny; ++j) {
          const double rr = ws.rho_new(k, i, j) + ws.rho_new(k, i, j - 1);
          ws.m_new.my(k, i, j) = rr / (rr + two_tau) * ws.mt.my(k, i, j);
        }
      }
    }
  });
}

// Names the first non-finite field for the abort diagnostic.
std::string find_nonfinite(const SolverState& st) {
  auto scan = [](const double* p, std::size_t n) {
    for (std::size_t q = 0; q < n; ++q)
      if (!std::isfinite(p[q])) return true;
    return false;
  };
  if (scan(st.rho.data(), st.rho.size())) return "rho";
  if (scan(st.m.mx.data(), st.m.mx.size()) || scan(st.m.my.data(), st.m.my.size()))
    return "m";
  if (scan(st.duals.lambda.data(), st.duals.lambda.size())) return "lambda";
  for (std::size_t q = 0; q < st.duals.eta.size(); ++q)
    if (!std::isfinite(st.duals.eta.data()[q].real()) ||
        !std::isfinite(st.duals.eta.data()[q].imag()))
      return "eta";
  if (scan(st.duals.zeta.gx.data(), st.duals.zeta.gx.size()) ||
      scan(st.duals.zeta.gy.data(), st.duals.zeta.gy.size()))
    return "zeta";
  return "state";
}

double slice_mass_drift(const DensityField& rho, const SpaceTimeGrid& g) {
  double m0 = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) m0 += rho(0, i, j);
  m0 *= g.dx * g.dy;
  const double denom =
      std::abs(m0) > 0.0 ? std::abs(m0) : std::numeric_limits<double>::min();
  double drift = 0.0;
  for (int k = 1; k < g.nt; ++k) {
    double mk = 0.0;
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) mk += rho(k, i, j);
    mk *= g.dx * g.dy;
    drift = std::max(drift, std::abs(mk - m0) / denom);
  }
  return drift;
}

void validate_config(const SolverConfig& cfg, const SpaceTimeGrid& g) {
  if (cfg.tau <= 0.0 || cfg.sigma <= 0.0)
    throw std::invalid_argument("solver: tau, sigma > 0 required");
  if (cfg.mode == SolverMode::reconstruct && cfg.alpha <= 0.0)
    throw std::invalid_argument("solver: alpha > 0 required");
  if (cfg.beta < 0.0) throw std::invalid_argument("solver: beta >= 0 required");
  if (cfg.max_iters < 1)
    throw std::invalid_argument("solver: max_iters >= 1 required");
  if (cfg.rel_tol < 0.0)
    throw std::invalid_argument("solver: rel_tol >= 0 required");
  if (cfg.nt != g.nt)
    throw std::invalid_argument("solver: config nt does not match the grid");
}

void validate_density_image(const SpatialImage& img, const SpaceTimeGrid& g,
                            const char* name, bool require_positive_mass) {
  if (img.nx() != g.nx || img.ny() != g.ny)
    throw std::invalid_argument(std::string("solver: ") + name +
                                " shape does not match the grid");
  double mass = 0.0;
  for (std::size_t p = 0; p < img.size(); ++p) {
    const double v = img.data()[p];
    if (!(v >= 0.0))
      throw std::invalid_argument(std::string("solver: ") + name +
                                  " must be nonnegative");
    mass += v;
  }
  if (require_positive_mass && !(mass * g.dx * g.dy > 0.0))
    throw std::invalid_argument(std::string("solver: ") + name +
                                " must have positive total mass");
}

std::pair<SolverState, TransportDiagnostics> run_pdhg(
    const KSpaceData& f, const SpatialImage& mu, const SpatialImage* nu,
    const SolverConfig& cfg, const SpaceTimeGrid& g,
    const IterationObserver& observer) {
  validate_config(cfg, g);
  validate_density_image(mu, g, "template", true);
  if (cfg.mode == SolverMode::geodesic) {
    validate_density_image(*nu, g, "target", true);
    const double mm = total_mass(mu, g), mn = total_mass(*nu, g);
    if (std::abs(mm - mn) > 1e-6 * mm)
      throw std::invalid_argument(
          "transport_geodesic: endpoint masses differ by more than 1e-6 "
          "relative (" +
          std::to_string(mm) + " vs " + std::to_string(mn) + ")");
  }

  {
    const SamplingMask* mask =
        cfg.mode == SolverMode::reconstruct ? &f.mask : nullptr;
    const double norm = estimate_operator_norm(cfg, mask, g);
    if (cfg.sigma * cfg.tau * norm * norm >= 1.0) {
      std::cerr << "wasstv: warning: sigma*tau*||K||^2 = "
                << cfg.sigma * cfg.tau * norm * norm
                << " >= 1 (estimated ||K|| = " << norm
                << "); steps used as given\n";
    }
  }

  SolverState st;
  st.rho = DensityField(g.nt, g.nx, g.ny);
  for (int k = 0; k < g.nt; ++k)
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) st.rho(k, i, j) = mu(i, j);
  st.m = MomentumField(g);
  st.rho_bar = st.rho;
  st.m_bar = st.m;
  st.duals = DualState(g);

  Workspace ws(g);
  const int log_every = std::max(1, cfg.log_every);

  for (int l = 0; l < cfg.max_iters; ++l) {
    dual_update_ws(st, cfg, f, g, ws);
    primal_update_ws(st, cfg, f, mu, nu, g, ws);

    // Relative change of (rho, m), then extrapolate and swap in the new
    // iterate. Reductions are sequential for determinism.
    double num = 0.0, den = 0.0;
    {
      const double* rn = ws.rho_new.data();
      const double* ro = st.rho.data();
      for (std::size_t p = 0; p < st.rho.size(); ++p) {
        const double dd = rn[p] - ro[p];
        num += dd * dd;
        den += ro[p] * ro[p];
      }
      const double* mxn = ws.m_new.mx.data();
      const double* mxo = st.m.mx.data();
      for (std::size_t p = 0; p < st.m.mx.size(); ++p) {
        const double dd = mxn[p] - mxo[p];
        num += dd * dd;
        den += mxo[p] * mxo[p];
      }
      const double* myn = ws.m_new.my.data();
      const double* myo = st.m.my.data();
      for (std::size_t p = 0; p < st.m.my.size(); ++p) {
        const double dd = myn[p] - myo[p];
        num += dd * dd;
        den += myo[p] * myo[p];
      }
    }
    const double rel = den > 0.0 ? std::sqrt(num / den) : 0.0;

    {
      double* rb = st.rho_bar.data();
      const double* rn = ws.rho_new.data();
      const double* ro = st.rho.data();
      const std::int64_t n = static_cast<std::int64_t>(st.rho.size());
      parallel_for(0, n, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t p = lo; p < hi; ++p) rb[p] = 2.0 * rn[p] - ro[p];
      });
      double* bx = st.m_bar.mx.data();
      const double* nxp = ws.m_new.mx.data();
      const double* oxp = st.m.mx.data();
      const std::int64_t nmx = static_cast<std::int64_t>(st.m.mx.size());
      parallel_for(0, nmx, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t p = lo; p < hi; ++p) bx[p] = 2.0 * nxp[p] - oxp[p];
      });
      double* by = st.m_bar.my.data();
      const double* nyp = ws.m_new.my.data();
      const double* oyp = st.m.my.data();
      const std::int64_t nmy = static_cast<std::int64_t>(st.m.my.size());
      parallel_for(0, nmy, cfg.threads, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t p = lo; p < hi; ++p) by[p] = 2.0 * nyp[p] - oyp[p];
      });
    }
    std::swap(st.rho, ws.rho_new);
    std::swap(st.m.mx, ws.m_new.mx);
    std::swap(st.m.my, ws.m_new.my);
    st.iter = l + 1;

    if (!std::isfinite(rel) || !std::isfinite(num)) {
      throw std::runtime_error("solver: non-finite values in field '" +
                               find_nonfinite(st) + "' at iteration " +
                               std::to_string(st.iter));
    }

    const bool converged = rel <= cfg.rel_tol;
    const bool last = converged || st.iter == cfg.max_iters;
    if (st.iter % log_every == 0 || last) {
      IterationRecord rec = objective(st.rho, st.m, f, cfg, g);
      rec.iter = st.iter;
      rec.mass_drift = slice_mass_drift(st.rho, g);
      rec.rel_change = rel;
      st.history.push_back(rec);
      if (observer) observer(st, rec);
    }
    if (converged) break;
  }

  TransportDiagnostics diag = diagnostics(st.rho, st.m, g, cfg.eps_zero);
  return {std::move(st), std::move(diag)};
}

}  // namespace

void dual_update(SolverState& state, const SolverConfig& cfg,
                 const KSpaceData& f, const SpaceTimeGrid& g) {
  Workspace ws(g);
  dual_update_ws(state, cfg, f, g, ws);
}

std::pair<DensityField, MomentumField> primal_update(
    const SolverState& state, const DualState& duals, const SolverConfig& cfg,
    const KSpaceData& f, const SpatialImage& mu, const SpaceTimeGrid& g,
    const SpatialImage* nu) {
  Workspace ws(g);
  SolverState tmp;
  tmp.rho = state.rho;
  tmp.m.mx = state.m.mx;
  tmp.m.my = state.m.my;
  tmp.duals = duals;
  primal_update_ws(tmp, cfg, f, mu, nu, g, ws);
  MomentumField m_out(g);
  m_out.mx = std::move(ws.m_new.mx);
  m_out.my = std::move(ws.m_new.my);
  return {std::move(ws.rho_new), std::move(m_out)};
}

IterationRecord objective(const DensityField& rho, const MomentumField& m,
                          const KSpaceData& f, const SolverConfig& cfg,
                          const SpaceTimeGrid& g) {
  IterationRecord rec;
  // Face-collocated energy: the centered form is +inf whenever a face next
  // to an empty cell carries flux, which converged iterates always do.
  rec.bb = bb_energy_staggered(rho, m, g, cfg.eps_zero);
  if (cfg.mode == SolverMode::reconstruct) {
    SpatialImage rho1(g.nx, g.ny);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) rho1(i, j) = rho(g.nt - 1, i, j);
    const KSpaceData k1 = fourier_forward(rho1, f.mask);
    double res2 = 0.0;
    for (std::size_t p = 0; p < k1.values.size(); ++p) {
      const std::complex<double> d = k1.values.data()[p] - f.values.data()[p];
      res2 += std::norm(d);
    }
    rec.fidelity = 0.5 * cfg.alpha * res2;
    const GradientPair gr = grad_spatial(rho1, g);
    double tvsum = 0.0;
    for (std::size_t p = 0; p < gr.gx.size(); ++p)
      tvsum += std::sqrt(gr.gx.data()[p] * gr.gx.data()[p] +
                         gr.gy.data()[p] * gr.gy.data()[p]);
    rec.tv = cfg.beta * tvsum * g.dx * g.dy;
  }
  rec.J = rec.bb + rec.fidelity + rec.tv;
  return rec;
}

std::pair<SolverState, TransportDiagnostics> reconstruct(
    const KSpaceData& f, const SpatialImage& mu, const SolverConfig& cfg,
    const SpaceTimeGrid& g, const IterationObserver& observer) {
  SolverConfig c = cfg;
  c.mode = SolverMode::reconstruct;
  return run_pdhg(f, mu, nullptr, c, g, observer);
}

std::pair<SolverState, TransportDiagnostics> transport_geodesic(
    const SpatialImage& mu, const SpatialImage& nu, const SolverConfig& cfg,
    const SpaceTimeGrid& g, const IterationObserver& observer) {
  SolverConfig c = cfg;
  c.mode = SolverMode::geodesic;
  KSpaceData dummy;
  dummy.values = ComplexImage(g.nx, g.ny);
  dummy.mask = SamplingMask::full(g.nx, g.ny);
  return run_pdhg(dummy, mu, &nu, c, g, observer);
}

double estimate_operator_norm(const SolverConfig& cfg, const SamplingMask* mask,
                              const SpaceTimeGrid& g, int steps) {
  DensityField zr(g.nt, g.nx, g.ny);
  MomentumField zm(g);
  // Deterministic pseudo-random start vector.
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  auto next = [&seed]() {
    seed ^= seed << 13;
    seed ^= seed >> 7;
    seed ^= seed << 17;
    return static_cast<double>(seed >> 11) / 9007199254740992.0 - 0.5;
  };
  for (std::size_t p = 0; p < zr.size(); ++p) zr.data()[p] = next();
  for (std::size_t p = 0; p < zm.mx.size(); ++p) zm.mx.data()[p] = next();
  for (std::size_t p = 0; p < zm.my.size(); ++p) zm.my.data()[p] = next();
  zm.zero_boundary();

  const bool with_data = cfg.mode == SolverMode::reconstruct && mask != nullptr;
  double lambda_est = 0.0;
  CenteredField a, wr;
  MomentumField wm(g);
  SpatialImage s1(g.nx, g.ny);
  for (int it = 0; it < steps; ++it) {
    dt_forward_into(zr, g, a);
    divergence_into(zm, g, wr);
    for (std::size_t p = 0; p < a.size(); ++p) a.data()[p] += wr.data()[p];

    dt_adjoint_into(a, g, wr);
    div_adjoint_into(a, g, wm);
    if (with_data) {
      copy_slice(zr, g.nt - 1, s1);
      const KSpaceData kb = fourier_forward(s1, *mask);
      const SpatialImage kadj = fourier_adjoint(kb);
      const GradientPair gr = grad_spatial(s1, g);
      const SpatialImage gadj = grad_adjoint(gr, g);
      for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
          wr(g.nt - 1, i, j) += kadj(i, j) + gadj(i, j);
    }

    double nrm2 = 0.0;
    for (std::size_t p = 0; p < wr.size(); ++p) nrm2 += wr.data()[p] * wr.data()[p];
    for (std::size_t p = 0; p < wm.mx.size(); ++p)
      nrm2 += wm.mx.data()[p] * wm.mx.data()[p];
    for (std::size_t p = 0; p < wm.my.size(); ++p)
      nrm2 += wm.my.data()[p] * wm.my.data()[p];
    const double nrm = std::sqrt(nrm2);
    if (nrm == 0.0) return 0.0;
    lambda_est = nrm;
    const double inv = 1.0 / nrm;
    for (std::size_t p = 0; p < wr.size(); ++p) zr.data()[p] = wr.data()[p] * inv;
    for (std::size_t p = 0; p < wm.mx.size(); ++p)
      zm.mx.data()[p] = wm.mx.data()[p] * inv;
    for (std::size_t p = 0; p < wm.my.size(); ++p)
      zm.my.data()[p] = wm.my.data()[p] * inv;
  }
  return std::sqrt(lambda_est);
}

void write_history_csv(const std::vector<IterationRecord>& history,
                       std::ostream& os) {
  os << "iter,J,bb,fidelity,tv,mass_drift,rel_change\n";
  os.precision(12);
  for (const IterationRecord& r : history) {
    os << r.iter << ',' << r.J << ',' << r.bb << ',' << r.fidelity << ','
       << r.tv << ',' << r.mass_drift << ',' << r.rel_change << '\n';
  }
}

}  // namespace wasstv
