#pragma once

#include <string>

#include "wasstv/grid.hpp"

namespace wasstv {

/// 16-bit binary PGM (P5, maxval 65535, big-endian samples) with a linear
/// mapping of [0,1]; values outside [0,1] are clamped. Row i of the raster
/// holds the ny samples of image row i.
void write_pgm16(const SpatialImage& img, const std::string& path);
SpatialImage read_pgm16(const std::string& path);

/// Lossless raw format: one text header line "f64 <n_x> <n_y>\n" followed
/// by n_x*n_y little-endian doubles in row-major order.
void write_f64(const SpatialImage& img, const std::string& path);
SpatialImage read_f64(const std::string& path);

/// Reads either format, dispatching on the magic bytes ("P5" or "f64").
SpatialImage read_image(const std::string& path);

}  // namespace wasstv
