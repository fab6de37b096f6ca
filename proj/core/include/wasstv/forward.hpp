#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wasstv/grid.hpp"

namespace wasstv {

/// Boolean frequency-domain sampling pattern in DFT index space, DC at
/// index (0,0). Centrally symmetric: keep[i,j] == keep[(-i) mod nx,
/// (-j) mod ny], and DC is always kept for n_spokes >= 1.
struct SamplingMask {
  int nx = 0;
  int ny = 0;
  int n_spokes = 0;
  double rate = 0.0;                // (#kept) / (nx*ny), in (0, 1]
  std::vector<std::uint8_t> keep;   // nx*ny entries, row-major [i*ny + j]

  bool at(int i, int j) const { return keep[static_cast<std::size_t>(i) * ny + j] != 0; }
  std::size_t count() const;

  static SamplingMask full(int nx, int ny);
};

/// Equispaced radial pattern: spoke angles theta_s = s*pi/n_spokes,
/// s = 0..n_spokes-1; a frequency pixel is kept when its centered
/// coordinate lies within half a pixel of some spoke line through the
/// center. The result is symmetrized so the central-symmetry invariant
/// holds exactly. Throws std::invalid_argument for n_spokes < 1 or
/// nx, ny < 4.
SamplingMask make_radial_mask(int nx, int ny, int n_spokes);

/// Complex k-space samples with off-mask entries identically zero.
struct KSpaceData {
  ComplexImage values;  // (nx, ny), off-mask entries zero
  SamplingMask mask;

  KSpaceData() = default;
  /// Zeroes the off-mask entries of v.
  KSpaceData(ComplexImage v, SamplingMask m);
};

/// K = sampling . DFT with the unitary normalization 1/sqrt(nx*ny).
KSpaceData fourier_forward(const SpatialImage& u, const SamplingMask& mask);

/// K^T: real part of the unitary inverse DFT. Exact adjoint of
/// fourier_forward against real images under Re<.,.>.
SpatialImage fourier_adjoint(const KSpaceData& f);

/// K^T on raw k-space values already supported on the mask.
SpatialImage fourier_adjoint(const ComplexImage& values);

/// Baseline reconstruction: invert the DFT with unmeasured frequencies
/// left at zero (identical to fourier_adjoint).
SpatialImage zero_fill_recon(const KSpaceData& f);

/// Plain-text mask format: header "mask <n_x> <n_y> <n_spokes> <rate>"
/// followed by n_x lines of n_y characters '0'/'1' (DC-at-origin indexing).
void write_mask(const SamplingMask& mask, std::ostream& os);
void write_mask_file(const SamplingMask& mask, const std::string& path);
SamplingMask read_mask(std::istream& is);
SamplingMask read_mask_file(const std::string& path);

}  // namespace wasstv
