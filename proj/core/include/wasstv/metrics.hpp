#pragma once

#include "wasstv/grid.hpp"

namespace wasstv {

struct QualityReport {
  double psnr_db = 0.0;  // +inf when the images coincide
  double ssim = 0.0;     // in [-1, 1]
};

/// PSNR = 10 log10(M*N / ||u - ref||^2) with M = 1 channel and N the pixel
/// count, for intensities nominally in [0,1]. Returns +inf when the error
/// is exactly zero. Throws std::invalid_argument on shape mismatch.
double psnr(const SpatialImage& u, const SpatialImage& ref);

/// Single-window SSIM over the whole image with population statistics:
///   (2 mu_u mu_r + c1)(2 cov + c2) / ((mu_u^2 + mu_r^2 + c1)(var_u + var_r + c2)).
/// Defaults c1 = 0.01^2, c2 = 0.03^2 for unit dynamic range.
double ssim(const SpatialImage& u, const SpatialImage& ref, double c1 = 1e-4,
            double c2 = 9e-4);

}  // namespace wasstv
