#include "wasstv/diffops.hpp"

#include <cassert>
#include <vector>

namespace wasstv {

namespace {

void resize_like(CenteredField& out, const SpaceTimeGrid& g) {
  if (out.n0() != g.nt || out.n1() != g.nx || out.n2() != g.ny)
    out = CenteredField(g.nt, g.nx, g.ny);
}

}  // namespace

void dt_forward_into(const CenteredField& rho, const SpaceTimeGrid& g,
                     CenteredField& out) {
  resize_like(out, g);
  const int nt = g.nt, nx = g.nx, ny = g.ny;
  const double idt = 1.0 / g.dt;
  const double i2dt = 0.5 / g.dt;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      out(0, i, j) = (rho(1, i, j) - rho(0, i, j)) * idt;
      for (int k = 1; k < nt - 1; ++k)
        out(k, i, j) = (rho(k + 1, i, j) - rho(k - 1, i, j)) * i2dt;
      out(nt - 1, i, j) = (rho(nt - 1, i, j) - rho(nt - 2, i, j)) * idt;
    }
  }
}

CenteredField dt_forward(const CenteredField& rho, const SpaceTimeGrid& g) {
  CenteredField out;
  dt_forward_into(rho, g, out);
  return out;
}

void dt_adjoint_into(const CenteredField& lam, const SpaceTimeGrid& g,
                     CenteredField& out) {
  resize_like(out, g);
  const int nt = g.nt, nx = g.nx, ny = g.ny;
  const double idt = 1.0 / g.dt;
  const double i2dt = 0.5 / g.dt;
  if (nt >= 4) {
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        out(0, i, j) = (-0.5 * lam(1, i, j) - lam(0, i, j)) * idt;
        out(1, i, j) = (-0.5 * lam(2, i, j) + lam(0, i, j)) * idt;
        for (int k = 2; k < nt - 2; ++k)
          out(k, i, j) = (-lam(k + 1, i, j) + lam(k - 1, i, j)) * i2dt;
        out(nt - 2, i, j) = (-lam(nt - 1, i, j) + 0.5 * lam(nt - 3, i, j)) * idt;
        out(nt - 1, i, j) = (lam(nt - 1, i, j) + 0.5 * lam(nt - 2, i, j)) * idt;
      }
    }
    return;
  }
  // nt in {2, 3}: the five-branch stencil does not apply; use the explicit
  // transpose of the dt_forward matrix.
  if (nt == 2) {
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        out(0, i, j) = -(lam(0, i, j) + lam(1, i, j)) * idt;
        out(1, i, j) = (lam(0, i, j) + lam(1, i, j)) * idt;
      }
    }
  } else {  // nt == 3
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        out(0, i, j) = -lam(0, i, j) * idt - lam(1, i, j) * i2dt;
        out(1, i, j) = (lam(0, i, j) - lam(2, i, j)) * idt;
        out(2, i, j) = lam(1, i, j) * i2dt + lam(2, i, j) * idt;
      }
    }
  }
}

CenteredField dt_adjoint(const CenteredField& lam, const SpaceTimeGrid& g) {
  CenteredField out;
  dt_adjoint_into(lam, g, out);
  return out;
}

void divergence_into(const MomentumField& m, const SpaceTimeGrid& g,
                     CenteredField& out) {
  resize_like(out, g);
  const int nt = g.nt, nx = g.nx, ny = g.ny;
  const double idx = 1.0 / g.dx;
  const double idy = 1.0 / g.dy;
  for (int k = 0; k < nt; ++k) {
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        out(k, i, j) = (m.mx(k, i + 1, j) - m.mx(k, i, j)) * idx +
                       (m.my(k, i, j + 1) - m.my(k, i, j)) * idy;
      }
    }
  }
}

CenteredField divergence(const MomentumField& m, const SpaceTimeGrid& g) {
  CenteredField out;
  divergence_into(m, g, out);
  return out;
}

void div_adjoint_into(const CenteredField& lam, const SpaceTimeGrid& g,
                      MomentumField& out) {
  if (out.mx.n0() != g.nt || out.mx.n1() != g.nx + 1 || out.mx.n2() != g.ny)
    out = MomentumField(g);
  const int nt = g.nt, nx = g.nx, ny = g.ny;
  const double idx = 1.0 / g.dx;
  const double idy = 1.0 / g.dy;
  for (int k = 0; k < nt; ++k) {
    for (int j = 0; j < ny; ++j) {
      out.mx(k, 0, j) = 0.0;
      out.mx(k, nx, j) = 0.0;
    }
    for (int i = 1; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        out.mx(k, i, j) = -(lam(k, i, j) - lam(k, i - 1, j)) * idx;
    for (int i = 0; i < nx; ++i) {
      out.my(k, i, 0) = 0.0;
      out.my(k, i, ny) = 0.0;
      for (int j = 1; j < ny; ++j)
        out.my(k, i, j) = -(lam(k, i, j) - lam(k, i, j - 1)) * idy;
    }
  }
}

MomentumField div_adjoint(const CenteredField& lam, const SpaceTimeGrid& g) {
  MomentumField out;
  div_adjoint_into(lam, g, out);
  return out;
}

void grad_spatial_into(const SpatialImage& u, const SpaceTimeGrid& g,
                       GradientPair& out) {
  if (out.gx.nx() != g.nx || out.gx.ny() != g.ny) out = GradientPair(g.nx, g.ny);
  const int nx = g.nx, ny = g.ny;
  const double idx = 1.0 / g.dx;
  const double idy = 1.0 / g.dy;
  for (int i = 0; i < nx - 1; ++i)
    for (int j = 0; j < ny; ++j)
      out.gx(i, j) = (u(i + 1, j) - u(i, j)) * idx;
  for (int j = 0; j < ny; ++j) out.gx(nx - 1, j) = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny - 1; ++j)
      out.gy(i, j) = (u(i, j + 1) - u(i, j)) * idy;
    out.gy(i, ny - 1) = 0.0;
  }
}

GradientPair grad_spatial(const SpatialImage& u, const SpaceTimeGrid& g) {
  GradientPair out;
  grad_spatial_into(u, g, out);
  return out;
}

void grad_adjoint_into(const GradientPair& z, const SpaceTimeGrid& g,
                       SpatialImage& out) {
  if (out.nx() != g.nx || out.ny() != g.ny) out = SpatialImage(g.nx, g.ny);
  const int nx = g.nx, ny = g.ny;
  const double idx = 1.0 / g.dx;
  const double idy = 1.0 / g.dy;
  // zx at row nx-1 and zy at column ny-1 never pair with grad_spatial
  // output, so they are read as zero.
  auto zx = [&](int i, int j) { return i == nx - 1 ? 0.0 : z.gx(i, j); };
  auto zy = [&](int i, int j) { return j == ny - 1 ? 0.0 : z.gy(i, j); };
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const double ax = zx(i, j) - (i > 0 ? zx(i - 1, j) : 0.0);
      const double ay = zy(i, j) - (j > 0 ? zy(i, j - 1) : 0.0);
      out(i, j) = -(ax * idx + ay * idy);
    }
  }
}

SpatialImage grad_adjoint(const GradientPair& z, const SpaceTimeGrid& g) {
  SpatialImage out;
  grad_adjoint_into(z, g, out);
  return out;
}

void center_average(const MomentumField& m, const SpaceTimeGrid& g,
                    CenteredField& cx, CenteredField& cy) {
  resize_like(cx, g);
  resize_like(cy, g);
  const int nt = g.nt, nx = g.nx, ny = g.ny;
  for (int k = 0; k < nt; ++k) {
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        cx(k, i, j) = 0.5 * (m.mx(k, i + 1, j) + m.mx(k, i, j));
        cy(k, i, j) = 0.5 * (m.my(k, i, j + 1) + m.my(k, i, j));
      }
    }
  }
}

}  // namespace wasstv
