#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "test_util.hpp"
#include "wasstv/grid.hpp"
#include "wasstv/phantom.hpp"

using namespace wasstv;
using namespace testutil;

TEST_CASE("shepp_logan") {
  SUBCASE("range and center") {
    const SpatialImage p = shepp_logan(128);
    double mn = 1e300, mx = -1e300;
    for (std::size_t q = 0; q < p.size(); ++q) {
      mn = std::min(mn, p.data()[q]);
      mx = std::max(mx, p.data()[q]);
    }
    CHECK(mn == 0.0);
    CHECK(mx <= 1.0);
    CHECK(p(63, 63) > 0.0);  // inside the head outline
    CHECK_THROWS_AS(shepp_logan(8), std::invalid_argument);
  }

  SUBCASE("deterministic") {
    const SpatialImage a = shepp_logan(64);
    const SpatialImage b = shepp_logan(64);
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
  }

  SUBCASE("pointwise values from direct ellipse membership") {
    // n = 201 puts grid nodes exactly on x = -1 + i/100. Expected values
    // are the summed intensities of the ellipses containing each point,
    // read off the parameter table by hand.
    const SpatialImage p = shepp_logan(201);
    auto at = [&](int i, int j) { return p(i, j); };
    CHECK(at(100, 100) == doctest::Approx(0.2).epsilon(1e-12));  // (0, 0): head + interior
    CHECK(at(100, 135) == doctest::Approx(0.3).epsilon(1e-12));  // (0, 0.35): + top ellipse
    CHECK(at(100, 90) == doctest::Approx(0.3).epsilon(1e-12));   // (0, -0.1): + small blob
    CHECK(at(100, 170) == doctest::Approx(0.2).epsilon(1e-12));  // (0, 0.7): inside both shells
    CHECK(at(92, 40) == doctest::Approx(0.3).epsilon(1e-12));    // (-0.08, -0.6): bottom blob
    CHECK(at(190, 190) == 0.0);                                  // outside the head
  }
}

TEST_CASE("gaussian_blob") {
  SUBCASE("exact mass and argmax at the nearest node") {
    const SpaceTimeGrid g(64, 64, 2);
    const SpatialImage b = gaussian_blob(64, 0.35, 0.5, 0.06, 1.0);
    CHECK(total_mass(b, g) == doctest::Approx(1.0).epsilon(1e-12));
    int bi = 0, bj = 0;
    double best = -1.0;
    for (int i = 0; i < 64; ++i)
      for (int j = 0; j < 64; ++j)
        if (b(i, j) > best) {
          best = b(i, j);
          bi = i;
          bj = j;
        }
    CHECK(bi == int(std::lround(0.35 * 63)));
    CHECK(bj == int(std::lround(0.5 * 63)));
  }

  SUBCASE("integer-pixel translates are shifted copies") {
    const int n = 64;
    const double h = 1.0 / (n - 1);
    const int shift = 16;
    const SpatialImage a = gaussian_blob(n, 0.35, 0.5, 0.06, 1.0);
    const SpatialImage b = gaussian_blob(n, 0.35 + shift * h, 0.5, 0.06, 1.0);
    for (int i = 0; i + shift < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(b(i + shift, j) == doctest::Approx(a(i, j)).epsilon(1e-6));
  }

  SUBCASE("support precondition") {
    CHECK_THROWS_AS(gaussian_blob(64, 0.1, 0.5, 0.06, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_blob(64, 0.5, 0.5, -0.1, 1.0), std::invalid_argument);
  }
}

TEST_CASE("warp_template") {
  const SpatialImage u = shepp_logan(64);

  SUBCASE("identity warp is bit-exact") {
    DeformationSpec spec;
    spec.amp_x = spec.amp_y = 0.0;
    const SpatialImage w = warp_template(u, spec);
    CHECK(std::memcmp(w.data(), u.data(), u.size() * sizeof(double)) == 0);
  }

  SUBCASE("mass is preserved exactly and values stay in range") {
    // The sinusoidal displacement is not volume preserving, so the
    // mass-restoring rescale can push the peak above max(u) by the mass
    // ratio (about 1.2 at the amplitude cap); bilinear sampling itself
    // never exceeds the input range.
    const SpaceTimeGrid g(64, 64, 2);
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> ad(0.0, 0.15);
    std::uniform_int_distribution<int> fd(1, 4);
    double mx_in = 0.0;
    for (std::size_t p = 0; p < u.size(); ++p)
      mx_in = std::max(mx_in, u.data()[p]);
    for (int trial = 0; trial < 10; ++trial) {
      DeformationSpec spec;
      spec.amp_x = ad(rng);
      spec.amp_y = ad(rng);
      spec.freq_x = fd(rng);
      spec.freq_y = fd(rng);
      const SpatialImage w = warp_template(u, spec);
      CHECK(total_mass(w, g) == doctest::Approx(total_mass(u, g)).epsilon(1e-12));
      for (std::size_t p = 0; p < w.size(); ++p) {
        CHECK(w.data()[p] >= 0.0);
        CHECK(w.data()[p] <= mx_in * 1.25);
      }
    }
  }

  SUBCASE("a real warp changes the image") {
    DeformationSpec spec;
    spec.amp_x = spec.amp_y = 0.05;
    spec.freq_x = spec.freq_y = 2;
    const SpatialImage w = warp_template(u, spec);
    double d2 = 0.0;
    for (std::size_t p = 0; p < u.size(); ++p) {
      const double d = w.data()[p] - u.data()[p];
      d2 += d * d;
    }
    CHECK(d2 > 0.0);
  }

  SUBCASE("fold-over guard") {
    DeformationSpec spec;
    spec.amp_x = 0.5;
    CHECK_THROWS_AS(warp_template(u, spec), std::invalid_argument);
  }
}
