#pragma once

#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcstruct/image.hpp"

namespace pcstruct {

enum class EdgeOperator { roberts, prewitt, sobel, canny, laplacian };

struct EdgeParams {
  double canny_sigma = 1.4;
  double canny_low = 0.1;   // hysteresis thresholds, fraction of max gradient
  double canny_high = 0.3;
};

struct EdgeMap {
  int width = 0;
  int height = 0;
  EdgeOperator op = EdgeOperator::sobel;
  bool binary = false;  // canny emits 0/1
  std::vector<double> values;
};

namespace detail {

inline double px(const GrayImage& img, int x, int y) {
  x = x < 0 ? 0 : (x >= img.width ? img.width - 1 : x);
  y = y < 0 ? 0 : (y >= img.height ? img.height - 1 : y);
  return img.at(x, y);
}

// 3x3 convolution pair -> gradient magnitude, replicate borders.
inline std::vector<double> magnitude3x3(const GrayImage& img, const int kx[3][3],
                                        const int ky[3][3]) {
  std::vector<double> out(img.size());
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double gx = 0.0, gy = 0.0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const double v = px(img, x + dx, y + dy);
          gx += kx[dy + 1][dx + 1] * v;
          gy += ky[dy + 1][dx + 1] * v;
        }
      out[static_cast<std::size_t>(y) * img.width + x] = std::hypot(gx, gy);
    }
  }
  return out;
}

inline GrayImage gaussian_blur(const GrayImage& img, double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;

  GrayImage tmp(img.width, img.height, img.max_value);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * px(img, x + i, y);
      tmp.at(x, y) = acc;
    }
  GrayImage out(img.width, img.height, img.max_value);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * px(tmp, x, y + i);
      out.at(x, y) = acc;
    }
  return out;
}

inline std::vector<double> canny_edges(const GrayImage& img, const EdgeParams& p) {
  if (!(p.canny_low >= 0.0) || !(p.canny_low < p.canny_high))
    throw std::invalid_argument("canny: need 0 <= low < high");
  const GrayImage smoothed = gaussian_blur(img, p.canny_sigma);

  const int w = img.width, h = img.height;
  std::vector<double> gx(img.size()), gy(img.size()), mag(img.size());
  static const int sx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static const int sy[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  double max_mag = 0.0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double ax = 0.0, ay = 0.0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const double v = px(smoothed, x + dx, y + dy);
          ax += sx[dy + 1][dx + 1] * v;
          ay += sy[dy + 1][dx + 1] * v;
        }
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      gx[i] = ax;
      gy[i] = ay;
      mag[i] = std::hypot(ax, ay);
      max_mag = std::max(max_mag, mag[i]);
    }

  // numerically flat image: rounding residue is not signal
  if (max_mag < 1e-9 * std::max(img.max_value, 1.0))
    return std::vector<double>(img.size(), 0.0);

  const double low = p.canny_low * max_mag;
  const double high = p.canny_high * max_mag;

  // non-maximum suppression along the quantized gradient direction
  auto mag_at = [&](int x, int y) -> double {
    if (x < 0 || x >= w || y < 0 || y >= h) return 0.0;
    return mag[static_cast<std::size_t>(y) * w + x];
  };
  std::vector<int> state(img.size(), 0);  // 0 none, 1 weak, 2 strong
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (mag[i] < low) continue;
      const double ang = std::atan2(gy[i], gx[i]);
      const int sector =
          ((static_cast<int>(std::round(ang / (M_PI / 4.0))) % 4) + 4) % 4;
      int nx = 1, ny = 0;  // sector 0: horizontal gradient
      if (sector == 1) { nx = 1; ny = 1; }
      else if (sector == 2) { nx = 0; ny = 1; }
      else if (sector == 3) { nx = -1; ny = 1; }
      // strict on the trailing side so plateau ties keep exactly one pixel
      if (mag[i] >= mag_at(x + nx, y + ny) && mag[i] > mag_at(x - nx, y - ny))
        state[i] = mag[i] >= high ? 2 : 1;
    }

  // hysteresis: weak pixels survive only when 8-connected to a strong one
  std::vector<double> out(img.size(), 0.0);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state[i] == 2) {
      out[i] = 1.0;
      queue.push_back(i);
    }
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int qx = x + dx, qy = y + dy;
        if (qx < 0 || qx >= w || qy < 0 || qy >= h) continue;
        const std::size_t q = static_cast<std::size_t>(qy) * w + qx;
        if (state[q] == 1 && out[q] == 0.0) {
          out[q] = 1.0;
          queue.push_back(q);
        }
      }
  }
  return out;
}

}  // namespace detail

inline EdgeMap edge_detect(const GrayImage& img, EdgeOperator op,
                           const EdgeParams& params = {}) {
  img.validate();
  EdgeMap out;
  out.width = img.width;
  out.height = img.height;
  out.op = op;

  switch (op) {
    case EdgeOperator::roberts: {
      out.values.resize(img.size());
      for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
          const double gx = detail::px(img, x, y) - detail::px(img, x + 1, y + 1);
          const double gy = detail::px(img, x + 1, y) - detail::px(img, x, y + 1);
          out.values[static_cast<std::size_t>(y) * img.width + x] = std::hypot(gx, gy);
        }
      break;
    }
    case EdgeOperator::prewitt: {
      static const int kx[3][3] = {{-1, 0, 1}, {-1, 0, 1}, {-1, 0, 1}};
      static const int ky[3][3] = {{-1, -1, -1}, {0, 0, 0}, {1, 1, 1}};
      out.values = detail::magnitude3x3(img, kx, ky);
      break;
    }
    case EdgeOperator::sobel: {
      static const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
      static const int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
      out.values = detail::magnitude3x3(img, kx, ky);
      break;
    }
    case EdgeOperator::laplacian: {
      out.values.resize(img.size());
      for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
          const double v = detail::px(img, x - 1, y) + detail::px(img, x + 1, y) +
                           detail::px(img, x, y - 1) + detail::px(img, x, y + 1) -
                           4.0 * detail::px(img, x, y);
          out.values[static_cast<std::size_t>(y) * img.width + x] = std::abs(v);
        }
      break;
    }
    case EdgeOperator::canny: {
      out.values = detail::canny_edges(img, params);
      out.binary = true;
      break;
    }
  }
  return out;
}

inline std::string edge_operator_name(EdgeOperator op) {
  switch (op) {
    case EdgeOperator::roberts: return "roberts";
    case EdgeOperator::prewitt: return "prewitt";
    case EdgeOperator::sobel: return "sobel";
    case EdgeOperator::canny: return "canny";
    case EdgeOperator::laplacian: return "laplacian";
  }
  return "unknown";
}

}  // namespace pcstruct
