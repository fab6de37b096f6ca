#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wasstv {

/// Space-time discretization of the unit cube [0,1]^2 x [0,1].
///
/// Scalars (density rho, multiplier lambda) live on the centered nodes
/// (i*dx, j*dy, k*dt); momentum components live on half-index staggered
/// nodes, see MomentumField. Index order is (time k, x i, y j) everywhere.
struct SpaceTimeGrid {
  int nx = 0;
  int ny = 0;
  int nt = 0;
  double dx = 0.0;
  double dy = 0.0;
  double dt = 0.0;

  SpaceTimeGrid() = default;
  SpaceTimeGrid(int nx_, int ny_, int nt_);  // throws std::invalid_argument if any count < 2
};

/// Dense 3-D tensor with layout [(a*n1 + b)*n2 + c].
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int n0, int n1, int n2, double fill = 0.0)
      : n0_(n0), n1_(n1), n2_(n2),
        v_(static_cast<std::size_t>(n0) * n1 * n2, fill) {}

  int n0() const { return n0_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  std::size_t size() const { return v_.size(); }

  double& operator()(int a, int b, int c) {
    return v_[(static_cast<std::size_t>(a) * n1_ + b) * n2_ + c];
  }
  double operator()(int a, int b, int c) const {
    return v_[(static_cast<std::size_t>(a) * n1_ + b) * n2_ + c];
  }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  void fill(double x) { v_.assign(v_.size(), x); }

  bool same_shape(const Tensor3& o) const {
    return n0_ == o.n0_ && n1_ == o.n1_ && n2_ == o.n2_;
  }

 private:
  int n0_ = 0, n1_ = 0, n2_ = 0;
  std::vector<double> v_;
};

/// Space-time scalar field on centered nodes, shape (nt, nx, ny).
using CenteredField = Tensor3;
/// Nonnegative mass density; same storage as any centered field.
using DensityField = Tensor3;

/// 2-D scalar image, shape (nx, ny), layout [i*ny + j].
class SpatialImage {
 public:
  SpatialImage() = default;
  SpatialImage(int nx, int ny, double fill = 0.0)
      : nx_(nx), ny_(ny), v_(static_cast<std::size_t>(nx) * ny, fill) {}

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return v_.size(); }

  double& operator()(int i, int j) { return v_[static_cast<std::size_t>(i) * ny_ + j]; }
  double operator()(int i, int j) const { return v_[static_cast<std::size_t>(i) * ny_ + j]; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  void fill(double x) { v_.assign(v_.size(), x); }

  bool same_shape(const SpatialImage& o) const { return nx_ == o.nx_ && ny_ == o.ny_; }

 private:
  int nx_ = 0, ny_ = 0;
  std::vector<double> v_;
};

/// 2-D complex image, shape (nx, ny); used for k-space data and the dual eta.
class ComplexImage {
 public:
  ComplexImage() = default;
  ComplexImage(int nx, int ny)
      : nx_(nx), ny_(ny), v_(static_cast<std::size_t>(nx) * ny) {}

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return v_.size(); }

  std::complex<double>& operator()(int i, int j) {
    return v_[static_cast<std::size_t>(i) * ny_ + j];
  }
  const std::complex<double>& operator()(int i, int j) const {
    return v_[static_cast<std::size_t>(i) * ny_ + j];
  }

  std::complex<double>* data() { return v_.data(); }
  const std::complex<double>* data() const { return v_.data(); }

  void fill(std::complex<double> x) { v_.assign(v_.size(), x); }

 private:
  int nx_ = 0, ny_ = 0;
  std::vector<std::complex<double>> v_;
};

/// Momentum on staggered grids with zero-flux boundary.
///
/// Stored index i of mx holds the value at physical half-index location
/// (i - 1/2)*dx, i = 0..nx, so mx has shape (nt, nx+1, ny); my analogously
/// has shape (nt, nx, ny+1). The boundary entries mx[.,0,.], mx[.,nx,.],
/// my[.,.,0], my[.,.,ny] are pinned to zero.
struct MomentumField {
  Tensor3 mx;  // (nt, nx+1, ny)
  Tensor3 my;  // (nt, nx, ny+1)

  MomentumField() = default;
  explicit MomentumField(const SpaceTimeGrid& g)
      : mx(g.nt, g.nx + 1, g.ny), my(g.nt, g.nx, g.ny + 1) {}

  void fill(double x) {
    mx.fill(x);
    my.fill(x);
    zero_boundary();
  }

  /// Re-pin the zero-flux boundary entries.
  void zero_boundary();
};

/// Pixelwise vector field (zeta, or a spatial gradient). The producing
/// operators keep the last row of gx and the last column of gy at zero.
struct GradientPair {
  SpatialImage gx;
  SpatialImage gy;

  GradientPair() = default;
  GradientPair(int nx, int ny) : gx(nx, ny), gy(nx, ny) {}
};

/// Dual variables of the saddle-point problem: lambda pairs with the
/// continuity residual, eta with the k-space data residual (supported on
/// the sampling mask), zeta with the spatial gradient of the final slice.
struct DualState {
  CenteredField lambda;   // (nt, nx, ny)
  ComplexImage eta;       // (nx, ny), off-mask entries zero
  GradientPair zeta;      // (nx, ny) each component

  DualState() = default;
  explicit DualState(const SpaceTimeGrid& g)
      : lambda(g.nt, g.nx, g.ny), eta(g.nx, g.ny), zeta(g.nx, g.ny) {}
};

/// Extract the (nx, ny) slice at time index k. Slice 0 is rho_0, slice
/// nt-1 is rho_1. Throws std::out_of_range for k outside [0, nt-1].
SpatialImage time_slice(const DensityField& rho, int k);

/// Write an image back into time slice k (inverse of time_slice).
void set_time_slice(DensityField& rho, int k, const SpatialImage& img);

/// Discrete total mass: sum(img) * dx * dy.
double total_mass(const SpatialImage& img, const SpaceTimeGrid& g);

}  // namespace wasstv
