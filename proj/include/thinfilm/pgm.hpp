#pragma once

// 8-bit grayscale images and the binary PGM (P5) codec.

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "thinfilm/error.hpp"

namespace thinfilm {

/// Row-major intensities in [0,1], row 0 first.
struct ImageGray {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  ImageGray() = default;
  ImageGray(int w, int h, double fill = 0.0) : width(w), height(h), pixels(std::size_t(w) * std::size_t(h), fill) {
    require(w > 0 && h > 0, "image dimensions must be positive");
  }

  double& at(int x, int y) { return pixels[std::size_t(y) * std::size_t(width) + std::size_t(x)]; }
  double at(int x, int y) const { return pixels[std::size_t(y) * std::size_t(width) + std::size_t(x)]; }
};

inline std::uint8_t encode_intensity(double v) {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  return std::uint8_t(std::min(255.0, std::round(v * 255.0)));
}

inline double decode_intensity(std::uint8_t b) { return double(b) / 255.0; }

namespace detail {
inline int read_pgm_int(std::istream& is) {
  int c = is.peek();
  while (is && (std::isspace(c) || c == '#')) {
    if (c == '#') {
      std::string skip;
      std::getline(is, skip);
    } else {
      is.get();
    }
    c = is.peek();
  }
  int v = -1;
  if (!(is >> v)) throw Error(ErrorKind::io, "PGM: malformed header");
  return v;
}
}  // namespace detail

inline ImageGray read_pgm(std::istream& is) {
  char magic[2] = {};
  if (!is.read(magic, 2) || magic[0] != 'P' || magic[1] != '5') throw Error(ErrorKind::io, "PGM: not a P5 file");
  const int w = detail::read_pgm_int(is);
  const int h = detail::read_pgm_int(is);
  const int maxval = detail::read_pgm_int(is);
  if (w <= 0 || h <= 0) throw Error(ErrorKind::io, "PGM: bad dimensions");
  if (maxval != 255) throw Error(ErrorKind::io, "PGM: only maxval 255 is supported");
  is.get();  // single whitespace before the raster
  ImageGray img(w, h);
  std::vector<unsigned char> raw(img.pixels.size());
  if (!is.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size())))
    throw Error(ErrorKind::io, "PGM: truncated raster");
  for (std::size_t k = 0; k < raw.size(); ++k) img.pixels[k] = decode_intensity(raw[k]);
  return img;
}

/// Clamps to [0,1] and rounds to 8 bits.
inline void write_pgm(std::ostream& os, const ImageGray& img) {
  os << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  std::vector<char> raw(img.pixels.size());
  for (std::size_t k = 0; k < raw.size(); ++k) raw[k] = char(encode_intensity(img.pixels[k]));
  os.write(raw.data(), std::streamsize(raw.size()));
  if (!os) throw Error(ErrorKind::io, "PGM: write failed");
}

inline ImageGray load_pgm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::io, "cannot open image " + path);
  return read_pgm(is);
}

inline void save_pgm(const std::string& path, const ImageGray& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  write_pgm(os, img);
}

}  // namespace thinfilm
