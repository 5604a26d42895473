#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "pcstruct/depth_geometry.hpp"
#include "pcstruct/image.hpp"
#include "pcstruct/pnm.hpp"

namespace pcstruct {

// Raw float container for inverse/metric encodings: 16-byte header
// { "PCDR", uint32 width, uint32 height, uint32 encoding } little-endian,
// followed by width*height float32 samples, row-major little-endian.
// Encoding codes: 0 positive_16bit, 1 inverse_unit, 2 metric_mm.
inline constexpr char kDepthRawMagic[4] = {'P', 'C', 'D', 'R'};

namespace detail {
inline void put_u32_le(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
               static_cast<char>((v >> 16) & 0xFF),
               static_cast<char>((v >> 24) & 0xFF)};
  out.write(b, 4);
}
inline std::uint32_t get_u32_le(std::istream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw std::runtime_error(path + ": truncated raw depth header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}
}  // namespace detail

inline void write_depth_raw(const DepthMap& d, const std::string& path) {
  d.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out.write(kDepthRawMagic, 4);
  detail::put_u32_le(out, static_cast<std::uint32_t>(d.width));
  detail::put_u32_le(out, static_cast<std::uint32_t>(d.height));
  detail::put_u32_le(out, static_cast<std::uint32_t>(d.encoding));
  for (double v : d.data) {
    const float f = static_cast<float>(v);
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    detail::put_u32_le(out, bits);
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

inline DepthMap read_depth_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kDepthRawMagic, 4) != 0)
    throw std::runtime_error(path + ": not a raw depth file (bad magic)");
  const std::uint32_t width = detail::get_u32_le(in, path);
  const std::uint32_t height = detail::get_u32_le(in, path);
  const std::uint32_t enc = detail::get_u32_le(in, path);
  if (width < 1 || height < 1 || enc > 2)
    throw std::runtime_error(path + ": bad raw depth header fields");
  DepthMap d(static_cast<int>(width), static_cast<int>(height),
             static_cast<DepthEncoding>(enc));
  for (double& v : d.data) {
    const std::uint32_t bits = detail::get_u32_le(in, path);
    float f;
    std::memcpy(&f, &bits, 4);
    v = f;
  }
  return d;
}

// 16-bit PGM carries the positive_16bit encoding losslessly.
inline void write_depth_pgm16(const DepthMap& d, const std::string& path) {
  if (d.encoding != DepthEncoding::positive_16bit)
    throw std::invalid_argument("write_depth_pgm16: encoding must be positive_16bit");
  GrayImage img(d.width, d.height, 65535.0);
  img.data = d.data;
  write_pnm(img, path);
}

inline DepthMap read_depth_pgm16(const std::string& path) {
  const GrayImage img = read_pnm_gray(path);
  DepthMap d(img.width, img.height, DepthEncoding::positive_16bit);
  d.data = img.data;
  return d;
}

// Accepts either container by extension: .pgm/.pnm -> 16-bit PGM, else raw.
inline DepthMap read_depth_any(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".pgm" || ext == ".pnm" || ext == ".ppm") return read_depth_pgm16(path);
  return read_depth_raw(path);
}

}  // namespace pcstruct
