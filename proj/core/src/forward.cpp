#include "wasstv/forward.hpp"

#include <fftw3.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wasstv {

std::size_t SamplingMask::count() const {
  std::size_t c = 0;
  for (auto k : keep) c += (k != 0);
  return c;
}

SamplingMask SamplingMask::full(int nx, int ny) {
  SamplingMask m;
  m.nx = nx;
  m.ny = ny;
  m.n_spokes = 0;
  m.keep.assign(static_cast<std::size_t>(nx) * ny, 1);
  m.rate = 1.0;
  return m;
}

SamplingMask make_radial_mask(int nx, int ny, int n_spokes) {
  if (n_spokes < 1)
    throw std::invalid_argument("make_radial_mask: n_spokes >= 1 required");
  if (nx < 4 || ny < 4)
    throw std::invalid_argument("make_radial_mask: nx, ny >= 4 required");

  SamplingMask m;
  m.nx = nx;
  m.ny = ny;
  m.n_spokes = n_spokes;
  m.keep.assign(static_cast<std::size_t>(nx) * ny, 0);

  // Centered frequency coordinate of a DFT index.
  auto centered = [](int i, int n) { return i > n / 2 ? i - n : i; };

  for (int s = 0; s < n_spokes; ++s) {
    const double theta = s * M_PI / n_spokes;
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    for (int i = 0; i < nx; ++i) {
      const double u = centered(i, nx);
      for (int j = 0; j < ny; ++j) {
        const double v = centered(j, ny);
        if (std::abs(-u * st + v * ct) <= 0.5)
          m.keep[static_cast<std::size_t>(i) * ny + j] = 1;
      }
    }
  }

  // The Nyquist row/column has an ambiguous sign in centered coordinates;
  // symmetrize so keep[i,j] == keep[(-i) mod nx, (-j) mod ny] exactly.
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const int im = (nx - i) % nx;
      const int jm = (ny - j) % ny;
      if (m.keep[static_cast<std::size_t>(im) * ny + jm])
        m.keep[static_cast<std::size_t>(i) * ny + j] = 1;
    }
  }

  m.rate = static_cast<double>(m.count()) / (static_cast<double>(nx) * ny);
  return m;
}

KSpaceData::KSpaceData(ComplexImage v, SamplingMask msk)
    : values(std::move(v)), mask(std::move(msk)) {
  if (values.nx() != mask.nx || values.ny() != mask.ny)
    throw std::invalid_argument("KSpaceData: values/mask shape mismatch");
  for (int i = 0; i < mask.nx; ++i)
    for (int j = 0; j < mask.ny; ++j)
      if (!mask.at(i, j)) values(i, j) = 0.0;
}

namespace {

// FFTW plans are cached per (nx, ny, sign); plan creation and execution on
// the shared buffers are serialized. Transforms stay deterministic for a
// fixed size regardless of caller threading.
struct PlanEntry {
  int nx, ny, sign;
  fftw_complex* buf_in;
  fftw_complex* buf_out;
  fftw_plan plan;
};

std::mutex g_fft_mutex;
std::vector<PlanEntry>& plan_cache() {
  static std::vector<PlanEntry> cache;
  return cache;
}

PlanEntry& get_plan(int nx, int ny, int sign) {
  for (auto& e : plan_cache())
    if (e.nx == nx && e.ny == ny && e.sign == sign) return e;
  PlanEntry e;
  e.nx = nx;
  e.ny = ny;
  e.sign = sign;
  const std::size_t n = static_cast<std::size_t>(nx) * ny;
  e.buf_in = fftw_alloc_complex(n);
  e.buf_out = fftw_alloc_complex(n);
  e.plan = fftw_plan_dft_2d(nx, ny, e.buf_in, e.buf_out, sign, FFTW_ESTIMATE);
  if (!e.plan) throw std::runtime_error("fftw_plan_dft_2d failed");
  plan_cache().push_back(e);
  return plan_cache().back();
}

}  // namespace

KSpaceData fourier_forward(const SpatialImage& u, const SamplingMask& mask) {
  if (u.nx() != mask.nx || u.ny() != mask.ny)
    throw std::invalid_argument("fourier_forward: image/mask shape mismatch");
  const int nx = u.nx(), ny = u.ny();
  const std::size_t n = u.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));

  ComplexImage out(nx, ny);
  {
    std::lock_guard<std::mutex> lock(g_fft_mutex);
    PlanEntry& e = get_plan(nx, ny, FFTW_FORWARD);
    for (std::size_t p = 0; p < n; ++p) {
      e.buf_in[p][0] = u.data()[p];
      e.buf_in[p][1] = 0.0;
    }
    fftw_execute(e.plan);
    for (std::size_t p = 0; p < n; ++p)
      out.data()[p] = {e.buf_out[p][0] * scale, e.buf_out[p][1] * scale};
  }

  KSpaceData f;
  f.values = std::move(out);
  f.mask = mask;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      if (!mask.at(i, j)) f.values(i, j) = 0.0;
  return f;
}

SpatialImage fourier_adjoint(const ComplexImage& values) {
  const int nx = values.nx(), ny = values.ny();
  const std::size_t n = values.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));

  SpatialImage out(nx, ny);
  std::lock_guard<std::mutex> lock(g_fft_mutex);
  PlanEntry& e = get_plan(nx, ny, FFTW_BACKWARD);
  for (std::size_t p = 0; p < n; ++p) {
    e.buf_in[p][0] = values.data()[p].real();
    e.buf_in[p][1] = values.data()[p].imag();
  }
  fftw_execute(e.plan);
  for (std::size_t p = 0; p < n; ++p) out.data()[p] = e.buf_out[p][0] * scale;
  return out;
}

SpatialImage fourier_adjoint(const KSpaceData& f) { return fourier_adjoint(f.values); }

SpatialImage zero_fill_recon(const KSpaceData& f) { return fourier_adjoint(f); }

void write_mask(const SamplingMask& mask, std::ostream& os) {
  os << "mask " << mask.nx << ' ' << mask.ny << ' ' << mask.n_spokes << ' '
     << std::setprecision(17) << mask.rate << '\n';
  for (int i = 0; i < mask.nx; ++i) {
    for (int j = 0; j < mask.ny; ++j) os << (mask.at(i, j) ? '1' : '0');
    os << '\n';
  }
}

void write_mask_file(const SamplingMask& mask, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_mask(mask, os);
  if (!os) throw std::runtime_error("write failed: " + path);
}

SamplingMask read_mask(std::istream& is) {
  std::string tag;
  SamplingMask m;
  double header_rate = 0.0;
  if (!(is >> tag >> m.nx >> m.ny >> m.n_spokes >> header_rate) || tag != "mask")
    throw std::runtime_error("read_mask: malformed header");
  if (m.nx < 1 || m.ny < 1)
    throw std::runtime_error("read_mask: bad dimensions");
  m.keep.assign(static_cast<std::size_t>(m.nx) * m.ny, 0);
  for (int i = 0; i < m.nx; ++i) {
    std::string row;
    if (!(is >> row) || static_cast<int>(row.size()) != m.ny)
      throw std::runtime_error("read_mask: bad row " + std::to_string(i));
    for (int j = 0; j < m.ny; ++j) {
      if (row[j] == '1')
        m.keep[static_cast<std::size_t>(i) * m.ny + j] = 1;
      else if (row[j] != '0')
        throw std::runtime_error("read_mask: bad character in row " + std::to_string(i));
    }
  }
  m.rate = static_cast<double>(m.count()) / (static_cast<double>(m.nx) * m.ny);
  return m;
}

SamplingMask read_mask_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open mask file: " + path);
  return read_mask(is);
}

}  // namespace wasstv
