#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcstruct {

// Row-major single-channel raster. Values are stored as doubles regardless
// of the source bit depth; max_value records the nominal full-scale code
// (255 for 8-bit sources, 65535 for 16-bit, 1.0 for normalized data).
struct GrayImage {
  int width = 0;
  int height = 0;
  double max_value = 255.0;
  std::vector<double> data;

  GrayImage() = default;
  GrayImage(int w, int h, double maxval, double fill = 0.0)
      : width(w), height(h), max_value(maxval),
        data(static_cast<std::size_t>(w) * h, fill) {
    if (w < 1 || h < 1)
      throw std::invalid_argument("GrayImage: width and height must be >= 1");
  }

  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return data.size(); }

  void validate() const {
    if (width < 1 || height < 1)
      throw std::invalid_argument("GrayImage: width and height must be >= 1");
    if (data.size() != static_cast<std::size_t>(width) * height)
      throw std::invalid_argument("GrayImage: data length != width*height");
    for (double v : data)
      if (!std::isfinite(v))
        throw std::invalid_argument("GrayImage: non-finite pixel value");
  }
};

// Row-major interleaved RGB raster.
struct ColorImage {
  int width = 0;
  int height = 0;
  double max_value = 255.0;
  std::vector<double> data;  // r,g,b triples

  ColorImage() = default;
  ColorImage(int w, int h, double maxval, double fill = 0.0)
      : width(w), height(h), max_value(maxval),
        data(static_cast<std::size_t>(w) * h * 3, fill) {
    if (w < 1 || h < 1)
      throw std::invalid_argument("ColorImage: width and height must be >= 1");
  }

  double& at(int x, int y, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  double at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }

  void validate() const {
    if (width < 1 || height < 1)
      throw std::invalid_argument("ColorImage: width and height must be >= 1");
    if (data.size() != static_cast<std::size_t>(width) * height * 3)
      throw std::invalid_argument("ColorImage: data length != 3*width*height");
    for (double v : data)
      if (!std::isfinite(v))
        throw std::invalid_argument("ColorImage: non-finite pixel value");
  }
};

// ITU-R BT.601 luminance. Output shares the input's max_value.
inline GrayImage to_luminance(const ColorImage& img) {
  GrayImage out(img.width, img.height, img.max_value);
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.data[i] = 0.299 * img.data[3 * i] + 0.587 * img.data[3 * i + 1] +
                  0.114 * img.data[3 * i + 2];
  }
  return out;
}

// Linear rescale from [0, max_value] to [0, target_max].
inline GrayImage normalize(const GrayImage& img, double target_max) {
  if (!(target_max > 0.0))
    throw std::invalid_argument("normalize: target_max must be > 0");
  GrayImage out = img;
  const double scale = target_max / img.max_value;
  for (double& v : out.data) v *= scale;
  out.max_value = target_max;
  return out;
}

}  // namespace pcstruct
