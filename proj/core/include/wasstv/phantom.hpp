#pragma once

#include <cstdint>

#include "wasstv/grid.hpp"

namespace wasstv {

/// Smooth sinusoidal warp used to derive templates from ground truths:
/// displacement d(x,y) = (amp_x sin(2 pi freq_x y), amp_y sin(2 pi freq_y x))
/// on the unit square. Amplitudes above 0.2 risk fold-over and are rejected.
struct DeformationSpec {
  double amp_x = 0.0;
  double amp_y = 0.0;
  int freq_x = 1;
  int freq_y = 1;
  std::uint64_t seed = 0;
};

/// Ten-ellipse head phantom on an n x n grid, evaluated at the node-centered
/// coordinates of [-1,1]^2 with the standard parameter table (the variant
/// whose intensities land in [0,1]); negatives from overlapping ellipses are
/// clamped at zero. Deterministic. Requires n >= 16.
SpatialImage shepp_logan(int n);

/// Isotropic Gaussian on the unit square rescaled so total_mass == mass
/// exactly. The blob must fit: center at least 3*sigma_g from every edge.
SpatialImage gaussian_blob(int n, double cx, double cy, double sigma_g,
                           double mass);

/// Backward-warp u through the spec's displacement field with bilinear
/// interpolation (edge-clamped sampling), then rescale so the total mass of
/// the output equals that of u exactly. A zero-amplitude spec returns the
/// input bit-exactly.
SpatialImage warp_template(const SpatialImage& u, const DeformationSpec& spec);

}  // namespace wasstv
