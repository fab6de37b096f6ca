#include "wasstv/grid.hpp"

#include <stdexcept>
#include <string>

namespace wasstv {

SpaceTimeGrid::SpaceTimeGrid(int nx_, int ny_, int nt_)
    : nx(nx_), ny(ny_), nt(nt_) {
  if (nx < 2 || ny < 2 || nt < 2) {
    throw std::invalid_argument("SpaceTimeGrid: need nx, ny, nt >= 2, got (" +
                                std::to_string(nx) + ", " + std::to_string(ny) +
                                ", " + std::to_string(nt) + ")");
  }
  dx = 1.0 / (nx - 1);
  dy = 1.0 / (ny - 1);
  dt = 1.0 / (nt - 1);
}

void MomentumField::zero_boundary() {
  const int nt = mx.n0();
  const int nxp1 = mx.n1();
  const int ny = mx.n2();
  const int nx = my.n1();
  const int nyp1 = my.n2();
  for (int k = 0; k < nt; ++k) {
    for (int j = 0; j < ny; ++j) {
      mx(k, 0, j) = 0.0;
      mx(k, nxp1 - 1, j) = 0.0;
    }
    for (int i = 0; i < nx; ++i) {
      my(k, i, 0) = 0.0;
      my(k, i, nyp1 - 1) = 0.0;
    }
  }
}

SpatialImage time_slice(const DensityField& rho, int k) {
  if (k < 0 || k >= rho.n0()) {
    throw std::out_of_range("time_slice: k = " + std::to_string(k) +
                            " out of [0, " + std::to_string(rho.n0() - 1) + "]");
  }
  SpatialImage img(rho.n1(), rho.n2());
  for (int i = 0; i < rho.n1(); ++i)
    for (int j = 0; j < rho.n2(); ++j) img(i, j) = rho(k, i, j);
  return img;
}

void set_time_slice(DensityField& rho, int k, const SpatialImage& img) {
  if (k < 0 || k >= rho.n0()) {
    throw std::out_of_range("set_time_slice: k = " + std::to_string(k) +
                            " out of [0, " + std::to_string(rho.n0() - 1) + "]");
  }
  if (img.nx() != rho.n1() || img.ny() != rho.n2()) {
    throw std::invalid_argument("set_time_slice: shape mismatch");
  }
  for (int i = 0; i < rho.n1(); ++i)
    for (int j = 0; j < rho.n2(); ++j) rho(k, i, j) = img(i, j);
}

double total_mass(const SpatialImage& img, const SpaceTimeGrid& g) {
  double s = 0.0;
  const double* p = img.data();
  for (std::size_t n = 0; n < img.size(); ++n) s += p[n];
  return s * g.dx * g.dy;
}

}  // namespace wasstv
