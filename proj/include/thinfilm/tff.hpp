#pragma once

// TFF1 field snapshots: one ASCII header line "TFF1 <Nx> <Ny> <Lx> <Ly>\n"
// followed by Nx*Ny little-endian IEEE-754 doubles, j outer, i inner.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "thinfilm/grid.hpp"

namespace thinfilm {

namespace detail {
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

inline void write_tff(std::ostream& os, const Field& u) {
  const Grid2D& g = u.grid();
  os << "TFF1 " << g.nx() << ' ' << g.ny() << ' ' << detail::format_real(g.lx()) << ' '
     << detail::format_real(g.ly()) << '\n';
  for (double v : u.values()) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = char((bits >> (8 * b)) & 0xffu);
    os.write(bytes, 8);
  }
  if (!os) throw Error(ErrorKind::io, "failed writing TFF1 stream");
}

inline Field read_tff(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw Error(ErrorKind::io, "TFF1: missing header");
  std::istringstream hs(header);
  std::string magic;
  int nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0;
  hs >> magic >> nx >> ny >> lx >> ly;
  if (!hs || magic != "TFF1") throw Error(ErrorKind::io, "TFF1: malformed header");
  Field u(Grid2D(lx, ly, nx, ny));
  for (double& v : u.values()) {
    unsigned char bytes[8];
    if (!is.read(reinterpret_cast<char*>(bytes), 8)) throw Error(ErrorKind::io, "TFF1: truncated payload");
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t(bytes[b]) << (8 * b);
    v = std::bit_cast<double>(bits);
  }
  return u;
}

inline void save_tff(const std::string& path, const Field& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  write_tff(os, u);
}

inline Field load_tff(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::io, "cannot open " + path);
  return read_tff(is);
}

}  // namespace thinfilm
