#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include "pcstruct/image.hpp"

namespace pcstruct {

using PnmImage = std::variant<GrayImage, ColorImage>;

struct PnmParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PnmIoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Skips whitespace and '#' comment lines, then reads one ASCII integer.
// Reports the byte offset of the failure point on malformed input.
inline long pnm_read_int(std::istream& in, const std::string& path) {
  int c;
  for (;;) {
    c = in.peek();
    if (c == EOF)
      throw PnmParseError(path + ": unexpected end of header at byte offset " +
                          std::to_string(static_cast<long>(in.tellg())));
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  if (!std::isdigit(in.peek())) {
    std::ostringstream msg;
    msg << path << ": malformed header token at byte offset " << in.tellg();
    throw PnmParseError(msg.str());
  }
  long v = 0;
  while (std::isdigit(in.peek())) v = v * 10 + (in.get() - '0');
  return v;
}

inline double pnm_read_sample(std::istream& in, bool binary, long maxval,
                              const std::string& path) {
  if (!binary) return static_cast<double>(pnm_read_int(in, path));
  if (maxval > 255) {
    const int hi = in.get();
    const int lo = in.get();
    if (lo == EOF)
      throw PnmIoError(path + ": truncated payload (size mismatch)");
    return static_cast<double>((hi << 8) | lo);  // big-endian per PNM spec
  }
  const int b = in.get();
  if (b == EOF) throw PnmIoError(path + ": truncated payload (size mismatch)");
  return static_cast<double>(b);
}

inline void pnm_write_sample(std::ostream& out, double v, long maxval) {
  long code = std::lround(v);
  if (code < 0) code = 0;
  if (code > maxval) code = maxval;
  if (maxval > 255) {
    out.put(static_cast<char>((code >> 8) & 0xFF));
    out.put(static_cast<char>(code & 0xFF));
  } else {
    out.put(static_cast<char>(code & 0xFF));
  }
}

}  // namespace detail

// Reads P2/P3/P5/P6 with maxval 255 or 65535. 16-bit binary samples are
// big-endian. Header comments are accepted and ignored.
inline PnmImage read_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PnmIoError(path + ": cannot open for reading");

  const int magic0 = in.get();
  const int magic1 = in.get();
  if (magic0 != 'P' || magic1 < '1' || magic1 > '6')
    throw PnmParseError(path + ": bad magic at byte offset 0");
  const int kind = magic1 - '0';
  if (kind != 2 && kind != 3 && kind != 5 && kind != 6)
    throw PnmParseError(path + ": unsupported PNM kind P" + std::to_string(kind));
  const bool color = (kind == 3 || kind == 6);
  const bool binary = (kind >= 5);

  const long width = detail::pnm_read_int(in, path);
  const long height = detail::pnm_read_int(in, path);
  const long maxval = detail::pnm_read_int(in, path);
  if (width < 1 || height < 1)
    throw PnmParseError(path + ": nonpositive dimensions");
  if (maxval != 255 && maxval != 65535)
    throw PnmParseError(path + ": unsupported maxval " + std::to_string(maxval));
  if (binary) in.get();  // single whitespace byte after maxval

  const std::size_t npix = static_cast<std::size_t>(width) * height;
  if (color) {
    ColorImage img(static_cast<int>(width), static_cast<int>(height),
                   static_cast<double>(maxval));
    for (std::size_t i = 0; i < npix * 3; ++i)
      img.data[i] = detail::pnm_read_sample(in, binary, maxval, path);
    return img;
  }
  GrayImage img(static_cast<int>(width), static_cast<int>(height),
                static_cast<double>(maxval));
  for (std::size_t i = 0; i < npix; ++i)
    img.data[i] = detail::pnm_read_sample(in, binary, maxval, path);
  return img;
}

// Writes binary P5. Values are rounded and clamped to [0, max_value].
inline void write_pnm(const GrayImage& img, const std::string& path) {
  img.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PnmIoError(path + ": cannot open for writing");
  const long maxval = std::lround(img.max_value);
  out << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
  for (double v : img.data) detail::pnm_write_sample(out, v, maxval);
  if (!out) throw PnmIoError(path + ": write failed");
}

// Writes binary P6.
inline void write_pnm(const ColorImage& img, const std::string& path) {
  img.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PnmIoError(path + ": cannot open for writing");
  const long maxval = std::lround(img.max_value);
  out << "P6\n" << img.width << " " << img.height << "\n" << maxval << "\n";
  for (double v : img.data) detail::pnm_write_sample(out, v, maxval);
  if (!out) throw PnmIoError(path + ": write failed");
}

inline void write_pnm(const PnmImage& img, const std::string& path) {
  std::visit([&](const auto& im) { write_pnm(im, path); }, img);
}

// Forces any PNM payload to grayscale.
inline GrayImage read_pnm_gray(const std::string& path) {
  PnmImage img = read_pnm(path);
  if (std::holds_alternative<GrayImage>(img)) return std::get<GrayImage>(img);
  return to_luminance(std::get<ColorImage>(img));
}

}  // namespace pcstruct
