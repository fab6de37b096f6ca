#include "wasstv/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wasstv {

double psnr(const SpatialImage& u, const SpatialImage& ref) {
  if (!u.same_shape(ref)) throw std::invalid_argument("psnr: shape mismatch");
  double err2 = 0.0;
  for (std::size_t p = 0; p < u.size(); ++p) {
    const double d = u.data()[p] - ref.data()[p];
    err2 += d * d;
  }
  if (err2 == 0.0) return std::numeric_limits<double>::infinity();
  const double mn = static_cast<double>(u.size());  // M = 1 channel
  return 10.0 * std::log10(mn / err2);
}

double ssim(const SpatialImage& u, const SpatialImage& ref, double c1, double c2) {
  if (!u.same_shape(ref)) throw std::invalid_argument("ssim: shape mismatch");
  if (c1 <= 0.0 || c2 <= 0.0)
    throw std::invalid_argument("ssim: c1, c2 > 0 required");
  const double n = static_cast<double>(u.size());
  double su = 0.0, sr = 0.0;
  for (std::size_t p = 0; p < u.size(); ++p) {
    su += u.data()[p];
    sr += ref.data()[p];
  }
  const double mu = su / n, mr = sr / n;
  double vu = 0.0, vr = 0.0, cov = 0.0;
  for (std::size_t p = 0; p < u.size(); ++p) {
    const double du = u.data()[p] - mu;
    const double dr = ref.data()[p] - mr;
    vu += du * du;
    vr += dr * dr;
    cov += du * dr;
  }
  vu /= n;  // population variance
  vr /= n;
  cov /= n;
  return (2.0 * mu * mr + c1) * (2.0 * cov + c2) /
         ((mu * mu + mr * mr + c1) * (vu + vr + c2));
}

}  // namespace wasstv
