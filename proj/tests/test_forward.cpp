#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "test_util.hpp"
#include "wasstv/forward.hpp"
#include "wasstv/metrics.hpp"
#include "wasstv/phantom.hpp"

using namespace wasstv;
using namespace testutil;

namespace {

double re_dot(const ComplexImage& a, const ComplexImage& b) {
  double s = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p)
    s += a.data()[p].real() * b.data()[p].real() +
         a.data()[p].imag() * b.data()[p].imag();
  return s;
}

double norm2(const ComplexImage& a) { return re_dot(a, a); }

}  // namespace

TEST_CASE("make_radial_mask") {
  SUBCASE("one spoke at angle zero is one full line") {
    const SamplingMask m = make_radial_mask(128, 128, 1);
    CHECK(m.count() == 128);
    CHECK(m.rate == doctest::Approx(128.0 / (128.0 * 128.0)).epsilon(1e-12));
  }

  SUBCASE("preconditions") {
    CHECK_THROWS_AS(make_radial_mask(128, 128, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_radial_mask(3, 128, 5), std::invalid_argument);
  }

  SUBCASE("reported sampling rates near the reference table") {
    CHECK(std::abs(make_radial_mask(128, 128, 5).rate - 0.0429) < 0.007);
    CHECK(std::abs(make_radial_mask(196, 196, 10).rate - 0.0558) < 0.007);
  }

  SUBCASE("central symmetry and DC for every spoke count") {
    for (auto [nx, ny] : {std::pair{16, 12}, std::pair{17, 13}, std::pair{64, 64}}) {
      for (int s : {1, 2, 3, 5, 8, 13, 21}) {
        const SamplingMask m = make_radial_mask(nx, ny, s);
        CHECK(m.at(0, 0));
        for (int i = 0; i < nx; ++i)
          for (int j = 0; j < ny; ++j)
            CHECK(m.at(i, j) == m.at((nx - i) % nx, (ny - j) % ny));
      }
    }
  }

  SUBCASE("enough spokes saturate the grid") {
    const SamplingMask m = make_radial_mask(16, 16, 10000);
    CHECK(m.rate == 1.0);
  }
}

TEST_CASE("fourier_forward") {
  const int n = 24;
  const SamplingMask full = SamplingMask::full(n, n);

  SUBCASE("unit impulse spreads flat") {
    SpatialImage u(n, n, 0.0);
    u(0, 0) = 1.0;
    const KSpaceData f = fourier_forward(u, full);
    const double want = 1.0 / n;  // 1/sqrt(n*n)
    for (std::size_t p = 0; p < f.values.size(); ++p) {
      CHECK(f.values.data()[p].real() == doctest::Approx(want).epsilon(1e-12));
      CHECK(std::abs(f.values.data()[p].imag()) < 1e-12);
    }
  }

  SUBCASE("constant image concentrates at DC") {
    const double c = 0.37;
    SpatialImage u(n, n, c);
    const KSpaceData f = fourier_forward(u, full);
    CHECK(f.values(0, 0).real() == doctest::Approx(c * n).epsilon(1e-12));
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i || j) off = std::max(off, std::abs(f.values(i, j)));
    CHECK(off < 1e-12);
  }

  SUBCASE("unitarity (Parseval)") {
    std::mt19937_64 rng(9);
    SpatialImage u(n, n);
    fill_random(u, rng);
    const KSpaceData f = fourier_forward(u, full);
    CHECK(norm2(f.values) == doctest::Approx(dot(u, u)).epsilon(1e-12));
  }
}

TEST_CASE("fourier_adjoint") {
  const int n = 20;
  const SamplingMask full = SamplingMask::full(n, n);
  std::mt19937_64 rng(19);

  SUBCASE("full-mask inverse recovers the image") {
    SpatialImage u(n, n);
    fill_random(u, rng);
    const SpatialImage back = fourier_adjoint(fourier_forward(u, full));
    for (std::size_t p = 0; p < u.size(); ++p)
      CHECK(back.data()[p] == doctest::Approx(u.data()[p]).epsilon(1e-12));
  }

  SUBCASE("zero data maps to zero") {
    KSpaceData f;
    f.values = ComplexImage(n, n);
    f.values.fill(0.0);
    f.mask = full;
    const SpatialImage z = fourier_adjoint(f);
    for (std::size_t p = 0; p < z.size(); ++p) CHECK(z.data()[p] == 0.0);
  }

  SUBCASE("adjoint identity under the real pairing") {
    for (int spokes : {2, 5, 9}) {
      const SamplingMask mask = make_radial_mask(n, n, spokes);
      for (int trial = 0; trial < 10; ++trial) {
        SpatialImage u(n, n);
        fill_random(u, rng);
        ComplexImage v(n, n);
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        for (std::size_t p = 0; p < v.size(); ++p)
          v.data()[p] = {d(rng), d(rng)};
        const KSpaceData f(std::move(v), mask);
        const double lhs = re_dot(fourier_forward(u, mask).values, f.values);
        const double rhs = dot(u, fourier_adjoint(f));
        CHECK(adjoint_defect(lhs, rhs) < 1e-12);
      }
    }
  }

  SUBCASE("K K^T is the identity on data simulated from real images") {
    const SamplingMask mask = make_radial_mask(n, n, 6);
    SpatialImage u(n, n);
    fill_random(u, rng);
    const KSpaceData f = fourier_forward(u, mask);
    const KSpaceData f2 = fourier_forward(fourier_adjoint(f), mask);
    double diff = 0.0;
    for (std::size_t p = 0; p < f.values.size(); ++p)
      diff += std::norm(f2.values.data()[p] - f.values.data()[p]);
    CHECK(std::sqrt(diff) <= 1e-10 * std::sqrt(norm2(f.values)));
  }
}

TEST_CASE("zero_fill_recon") {
  SUBCASE("full mask recovers exactly") {
    const int n = 16;
    std::mt19937_64 rng(29);
    SpatialImage u(n, n);
    fill_random(u, rng, 0.0, 1.0);
    const SpatialImage r = zero_fill_recon(fourier_forward(u, SamplingMask::full(n, n)));
    for (std::size_t p = 0; p < u.size(); ++p)
      CHECK(r.data()[p] == doctest::Approx(u.data()[p]).epsilon(1e-12));
  }

  SUBCASE("DC-only mask yields the mean image") {
    const int n = 12;
    std::mt19937_64 rng(31);
    SpatialImage u(n, n);
    fill_random(u, rng, 0.0, 1.0);
    SamplingMask dc;
    dc.nx = dc.ny = n;
    dc.n_spokes = 0;
    dc.keep.assign(n * n, 0);
    dc.keep[0] = 1;
    dc.rate = 1.0 / (n * n);
    const SpatialImage r = zero_fill_recon(fourier_forward(u, dc));
    double mean = 0.0;
    for (std::size_t p = 0; p < u.size(); ++p) mean += u.data()[p];
    mean /= u.size();
    for (std::size_t p = 0; p < r.size(); ++p)
      CHECK(r.data()[p] == doctest::Approx(mean).epsilon(1e-12));
  }

  SUBCASE("five-spoke head phantom lands near the reference zero-fill quality") {
    const SpatialImage u = shepp_logan(128);
    const SamplingMask mask = make_radial_mask(128, 128, 5);
    const SpatialImage r = zero_fill_recon(fourier_forward(u, mask));
    CHECK(std::abs(psnr(r, u) - 15.40) < 1.5);
  }
}

TEST_CASE("mask file round-trip") {
  const SamplingMask m = make_radial_mask(48, 36, 7);
  std::stringstream ss;
  write_mask(m, ss);
  const SamplingMask r = read_mask(ss);
  CHECK(r.nx == m.nx);
  CHECK(r.ny == m.ny);
  CHECK(r.n_spokes == m.n_spokes);
  CHECK(r.rate == m.rate);
  CHECK(r.keep == m.keep);

  std::stringstream bad("msk 4 4 1 0.5\n");
  CHECK_THROWS(read_mask(bad));
  std::stringstream trunc("mask 4 4 1 0.5\n0011\n");
  CHECK_THROWS(read_mask(trunc));
}
