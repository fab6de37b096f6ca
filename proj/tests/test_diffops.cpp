#include <doctest.h>

#include <array>
#include <random>
#include <vector>

#include "test_util.hpp"
#include "wasstv/diffops.hpp"
#include "wasstv/grid.hpp"

using namespace wasstv;
using namespace testutil;

namespace {

// Brute-force oracle: the nt x nt matrix of the time stencil, built by
// applying dt_forward to time-basis fields on a 1x... pixel.
std::vector<std::vector<double>> dt_matrix(const SpaceTimeGrid& g) {
  std::vector<std::vector<double>> A(g.nt, std::vector<double>(g.nt, 0.0));
  for (int col = 0; col < g.nt; ++col) {
    CenteredField e(g.nt, g.nx, g.ny, 0.0);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) e(col, i, j) = 1.0;
    const CenteredField out = dt_forward(e, g);
    for (int row = 0; row < g.nt; ++row) A[row][col] = out(row, 0, 0);
  }
  return A;
}

}  // namespace

TEST_CASE("dt_forward") {
  const SpaceTimeGrid g(4, 3, 7);

  SUBCASE("constant in time is zero") {
    CenteredField rho(g.nt, g.nx, g.ny, 1.7);
    const CenteredField out = dt_forward(rho, g);
    for (std::size_t p = 0; p < out.size(); ++p) CHECK(out.data()[p] == 0.0);
  }

  SUBCASE("linear ramp k*dt differentiates to one everywhere") {
    CenteredField rho(g.nt, g.nx, g.ny);
    for (int k = 0; k < g.nt; ++k)
      for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) rho(k, i, j) = k * g.dt;
    const CenteredField out = dt_forward(rho, g);
    for (std::size_t p = 0; p < out.size(); ++p)
      CHECK(out.data()[p] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("dt_adjoint matches the transposed stencil matrix") {
  std::mt19937_64 rng(7);
  for (int nt : {2, 3, 4, 5, 9}) {
    const SpaceTimeGrid g(3, 4, nt);
    const auto A = dt_matrix(g);
    const CenteredField lam = random_centered(g, rng);
    const CenteredField got = dt_adjoint(lam, g);
    for (int k = 0; k < nt; ++k) {
      for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
          double want = 0.0;
          for (int r = 0; r < nt; ++r) want += A[r][k] * lam(r, i, j);
          CHECK(got(k, i, j) == doctest::Approx(want).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("dt_adjoint of a middle time bump, nt = 5") {
  const SpaceTimeGrid g(2, 2, 5);
  CenteredField lam(g.nt, g.nx, g.ny, 0.0);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) lam(2, i, j) = 1.0;
  const CenteredField out = dt_adjoint(lam, g);
  // Transposing the stencil matrix puts -1/(2dt) at k=1 and +1/(2dt) at k=3.
  const double half = 0.5 / g.dt;
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      CHECK(out(0, i, j) == doctest::Approx(0.0));
      CHECK(out(1, i, j) == doctest::Approx(-half).epsilon(1e-13));
      CHECK(out(2, i, j) == doctest::Approx(0.0));
      CHECK(out(3, i, j) == doctest::Approx(half).epsilon(1e-13));
      CHECK(out(4, i, j) == doctest::Approx(0.0));
    }
  }
  CenteredField zero(g.nt, g.nx, g.ny, 0.0);
  const CenteredField z = dt_adjoint(zero, g);
  for (std::size_t p = 0; p < z.size(); ++p) CHECK(z.data()[p] == 0.0);
}

TEST_CASE("divergence") {
  const SpaceTimeGrid g(6, 5, 3);

  SUBCASE("zero momentum") {
    MomentumField m(g);
    const CenteredField out = divergence(m, g);
    for (std::size_t p = 0; p < out.size(); ++p) CHECK(out.data()[p] == 0.0);
  }

  SUBCASE("constant interior mx telescopes to the boundary columns") {
    const double c = 0.8;
    MomentumField m(g);
    m.mx.fill(c);
    m.zero_boundary();
    const CenteredField out = divergence(m, g);
    for (int k = 0; k < g.nt; ++k) {
      for (int j = 0; j < g.ny; ++j) {
        CHECK(out(k, 0, j) == doctest::Approx(c / g.dx).epsilon(1e-12));
        CHECK(out(k, g.nx - 1, j) == doctest::Approx(-c / g.dx).epsilon(1e-12));
        for (int i = 1; i < g.nx - 1; ++i)
          CHECK(out(k, i, j) == doctest::Approx(0.0));
      }
    }
  }

  SUBCASE("discrete divergence theorem: spatial sums vanish") {
    std::mt19937_64 rng(11);
    const MomentumField m = random_momentum(g, rng);
    const CenteredField out = divergence(m, g);
    for (int k = 0; k < g.nt; ++k) {
      double s = 0.0;
      for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) s += out(k, i, j);
      CHECK(std::abs(s) < 1e-11);
    }
  }
}

TEST_CASE("div_adjoint") {
  const SpaceTimeGrid g(5, 6, 3);

  SUBCASE("constant lambda maps to zero") {
    CenteredField lam(g.nt, g.nx, g.ny, 4.2);
    const MomentumField out = div_adjoint(lam, g);
    for (std::size_t p = 0; p < out.mx.size(); ++p) CHECK(out.mx.data()[p] == 0.0);
    for (std::size_t p = 0; p < out.my.size(); ++p) CHECK(out.my.data()[p] == 0.0);
  }

  SUBCASE("x ramp gives -1 at interior half-indices, 0 at the boundary") {
    CenteredField lam(g.nt, g.nx, g.ny);
    for (int k = 0; k < g.nt; ++k)
      for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) lam(k, i, j) = i * g.dx;
    const MomentumField out = div_adjoint(lam, g);
    for (int k = 0; k < g.nt; ++k) {
      for (int j = 0; j < g.ny; ++j) {
        CHECK(out.mx(k, 0, j) == 0.0);
        CHECK(out.mx(k, g.nx, j) == 0.0);
        for (int i = 1; i < g.nx; ++i)
          CHECK(out.mx(k, i, j) == doctest::Approx(-1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("grad_spatial and grad_adjoint") {
  const SpaceTimeGrid g(5, 4, 2);

  SUBCASE("constant image has zero gradient") {
    SpatialImage u(g.nx, g.ny, 3.3);
    const GradientPair out = grad_spatial(u, g);
    for (std::size_t p = 0; p < out.gx.size(); ++p) {
      CHECK(out.gx.data()[p] == 0.0);
      CHECK(out.gy.data()[p] == 0.0);
    }
  }

  SUBCASE("x ramp: gx one except the zero last row, gy zero") {
    SpatialImage u(g.nx, g.ny);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) u(i, j) = i * g.dx;
    const GradientPair out = grad_spatial(u, g);
    for (int i = 0; i < g.nx; ++i) {
      for (int j = 0; j < g.ny; ++j) {
        if (i < g.nx - 1)
          CHECK(out.gx(i, j) == doctest::Approx(1.0).epsilon(1e-12));
        else
          CHECK(out.gx(i, j) == 0.0);
        CHECK(out.gy(i, j) == 0.0);
      }
    }
  }

  SUBCASE("zero dual maps to zero") {
    GradientPair z(g.nx, g.ny);
    const SpatialImage out = grad_adjoint(z, g);
    for (std::size_t p = 0; p < out.size(); ++p) CHECK(out.data()[p] == 0.0);
  }

  SUBCASE("single interior bump spreads to -1/dx and +1/dx") {
    GradientPair z(g.nx, g.ny);
    const int i0 = 1, j0 = 2;
    z.gx(i0, j0) = 1.0;
    const SpatialImage out = grad_adjoint(z, g);
    for (int i = 0; i < g.nx; ++i) {
      for (int j = 0; j < g.ny; ++j) {
        double want = 0.0;
        if (i == i0 && j == j0) want = -1.0 / g.dx;
        if (i == i0 + 1 && j == j0) want = 1.0 / g.dx;
        CHECK(out(i, j) == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }

  SUBCASE("explicit matrix transpose on a small grid") {
    // Build the matrix of grad_spatial by columns, transpose it, and
    // compare a matrix-vector product against grad_adjoint.
    const int nx = g.nx, ny = g.ny, n = nx * ny;
    std::vector<std::vector<double>> Gx(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> Gy(n, std::vector<double>(n, 0.0));
    for (int col = 0; col < n; ++col) {
      SpatialImage e(nx, ny, 0.0);
      e.data()[col] = 1.0;
      const GradientPair out = grad_spatial(e, g);
      for (int row = 0; row < n; ++row) {
        Gx[row][col] = out.gx.data()[row];
        Gy[row][col] = out.gy.data()[row];
      }
    }
    std::mt19937_64 rng(3);
    GradientPair z(nx, ny);
    fill_random(z.gx, rng);
    fill_random(z.gy, rng);
    const SpatialImage got = grad_adjoint(z, g);
    for (int row = 0; row < n; ++row) {
      double want = 0.0;
      for (int col = 0; col < n; ++col)
        want += Gx[col][row] * z.gx.data()[col] + Gy[col][row] * z.gy.data()[col];
      CHECK(got.data()[row] == doctest::Approx(want).epsilon(1e-11));
    }
  }
}

TEST_CASE("center_average") {
  const SpaceTimeGrid g(5, 4, 3);

  SUBCASE("zero momentum averages to zero") {
    MomentumField m(g);
    CenteredField cx, cy;
    center_average(m, g, cx, cy);
    for (std::size_t p = 0; p < cx.size(); ++p) {
      CHECK(cx.data()[p] == 0.0);
      CHECK(cy.data()[p] == 0.0);
    }
  }

  SUBCASE("constant interior mx: c inside, c/2 next to the pinned boundary") {
    const double c = 1.4;
    MomentumField m(g);
    m.mx.fill(c);
    m.zero_boundary();
    CenteredField cx, cy;
    center_average(m, g, cx, cy);
    for (int k = 0; k < g.nt; ++k) {
      for (int j = 0; j < g.ny; ++j) {
        CHECK(cx(k, 0, j) == doctest::Approx(c / 2).epsilon(1e-14));
        CHECK(cx(k, g.nx - 1, j) == doctest::Approx(c / 2).epsilon(1e-14));
        for (int i = 1; i < g.nx - 1; ++i)
          CHECK(cx(k, i, j) == doctest::Approx(c).epsilon(1e-14));
      }
    }
  }

  SUBCASE("4(cx^2 + cy^2) equals the paired-sum form identically") {
    std::mt19937_64 rng(5);
    const MomentumField m = random_momentum(g, rng);
    CenteredField cx, cy;
    center_average(m, g, cx, cy);
    for (int k = 0; k < g.nt; ++k) {
      for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
          const double sx = m.mx(k, i + 1, j) + m.mx(k, i, j);
          const double sy = m.my(k, i, j + 1) + m.my(k, i, j);
          const double lhs = 4.0 * (cx(k, i, j) * cx(k, i, j) + cy(k, i, j) * cy(k, i, j));
          CHECK(lhs == doctest::Approx(sx * sx + sy * sy).epsilon(1e-13));
        }
      }
    }
  }
}

TEST_CASE("adjoint identities by direct summation") {
  std::mt19937_64 rng(2024);
  for (auto [nx, ny, nt] : {std::array<int, 3>{4, 4, 4},
                            std::array<int, 3>{8, 7, 5},
                            std::array<int, 3>{16, 16, 15}}) {
    const SpaceTimeGrid g(nx, ny, nt);
    for (int trial = 0; trial < 25; ++trial) {
      const CenteredField rho = random_centered(g, rng);
      const CenteredField lam = random_centered(g, rng);
      CHECK(adjoint_defect(dot(dt_forward(rho, g), lam),
                           dot(rho, dt_adjoint(lam, g))) < 1e-10);

      const MomentumField m = random_momentum(g, rng);
      CHECK(adjoint_defect(dot(divergence(m, g), lam),
                           dot(m, div_adjoint(lam, g))) < 1e-10);

      SpatialImage u(nx, ny);
      fill_random(u, rng);
      GradientPair z(nx, ny);
      fill_random(z.gx, rng);
      fill_random(z.gy, rng);
      CHECK(adjoint_defect(dot(grad_spatial(u, g), z),
                           dot(u, grad_adjoint(z, g))) < 1e-10);
    }
  }
}

TEST_CASE("stencils are linear") {
  const SpaceTimeGrid g(6, 5, 4);
  std::mt19937_64 rng(99);
  const double a = 1.7, b = -0.4;

  const CenteredField x1 = random_centered(g, rng), x2 = random_centered(g, rng);
  CenteredField xc(g.nt, g.nx, g.ny);
  for (std::size_t p = 0; p < xc.size(); ++p)
    xc.data()[p] = a * x1.data()[p] + b * x2.data()[p];
  const CenteredField d1 = dt_forward(x1, g), d2 = dt_forward(x2, g),
                      dc = dt_forward(xc, g);
  for (std::size_t p = 0; p < dc.size(); ++p)
    CHECK(dc.data()[p] ==
          doctest::Approx(a * d1.data()[p] + b * d2.data()[p]).epsilon(1e-12));

  const MomentumField m1 = random_momentum(g, rng), m2 = random_momentum(g, rng);
  MomentumField mc(g);
  for (std::size_t p = 0; p < mc.mx.size(); ++p)
    mc.mx.data()[p] = a * m1.mx.data()[p] + b * m2.mx.data()[p];
  for (std::size_t p = 0; p < mc.my.size(); ++p)
    mc.my.data()[p] = a * m1.my.data()[p] + b * m2.my.data()[p];
  const CenteredField v1 = divergence(m1, g), v2 = divergence(m2, g),
                      vc = divergence(mc, g);
  for (std::size_t p = 0; p < vc.size(); ++p)
    CHECK(vc.data()[p] ==
          doctest::Approx(a * v1.data()[p] + b * v2.data()[p]).epsilon(1e-12));
}
