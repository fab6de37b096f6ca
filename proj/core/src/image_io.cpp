#include "wasstv/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace wasstv {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return is;
}

}  // namespace

void write_pgm16(const SpatialImage& img, const std::string& path) {
  auto os = open_out(path);
  os << "P5\n" << img.ny() << ' ' << img.nx() << "\n65535\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(img.ny()) * 2);
  for (int i = 0; i < img.nx(); ++i) {
    for (int j = 0; j < img.ny(); ++j) {
      const double v = std::clamp(img(i, j), 0.0, 1.0);
      const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
      row[2 * j] = static_cast<unsigned char>(q >> 8);
      row[2 * j + 1] = static_cast<unsigned char>(q & 0xff);
    }
    os.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

SpatialImage read_pgm16(const std::string& path) {
  auto is = open_in(path);
  std::string magic;
  int width = 0, height = 0, maxval = 0;
  is >> magic >> width >> height >> maxval;
  if (!is || magic != "P5" || width < 1 || height < 1 || maxval != 65535)
    throw std::runtime_error("read_pgm16: unsupported or malformed PGM: " + path);
  is.get();  // single whitespace after maxval
  SpatialImage img(height, width);
  std::vector<unsigned char> row(static_cast<std::size_t>(width) * 2);
  for (int i = 0; i < height; ++i) {
    is.read(reinterpret_cast<char*>(row.data()), row.size());
    if (!is) throw std::runtime_error("read_pgm16: truncated raster: " + path);
    for (int j = 0; j < width; ++j) {
      const std::uint16_t q = static_cast<std::uint16_t>((row[2 * j] << 8) | row[2 * j + 1]);
      img(i, j) = q / 65535.0;
    }
  }
  return img;
}

void write_f64(const SpatialImage& img, const std::string& path) {
  auto os = open_out(path);
  os << "f64 " << img.nx() << ' ' << img.ny() << '\n';
  os.write(reinterpret_cast<const char*>(img.data()),
           static_cast<std::streamsize>(img.size() * sizeof(double)));
  if (!os) throw std::runtime_error("write failed: " + path);
}

SpatialImage read_f64(const std::string& path) {
  auto is = open_in(path);
  std::string magic;
  int nx = 0, ny = 0;
  is >> magic >> nx >> ny;
  if (!is || magic != "f64" || nx < 1 || ny < 1)
    throw std::runtime_error("read_f64: malformed header: " + path);
  is.get();  // newline
  SpatialImage img(nx, ny);
  is.read(reinterpret_cast<char*>(img.data()),
          static_cast<std::streamsize>(img.size() * sizeof(double)));
  if (!is) throw std::runtime_error("read_f64: truncated payload: " + path);
  return img;
}

SpatialImage read_image(const std::string& path) {
  {
    auto is = open_in(path);
    char magic[3] = {0, 0, 0};
    is.read(magic, 3);
    if (is && std::strncmp(magic, "f64", 3) == 0) return read_f64(path);
  }
  return read_pgm16(path);
}

}  // namespace wasstv
