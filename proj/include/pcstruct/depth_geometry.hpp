#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <vector>

namespace pcstruct {

enum class DepthEncoding {
  positive_16bit,  // D+ in [0, 65535]
  inverse_unit,    // D- = 1 - D+/65535, in [0, 1]
  metric_mm,
};

struct DepthMap {
  int width = 0;
  int height = 0;
  DepthEncoding encoding = DepthEncoding::positive_16bit;
  std::vector<double> data;

  DepthMap() = default;
  DepthMap(int w, int h, DepthEncoding enc, double fill = 0.0)
      : width(w), height(h), encoding(enc),
        data(static_cast<std::size_t>(w) * h, fill) {
    if (w < 1 || h < 1)
      throw std::invalid_argument("DepthMap: width and height must be >= 1");
  }

  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return data.size(); }

  void validate() const {
    if (data.size() != static_cast<std::size_t>(width) * height)
      throw std::invalid_argument("DepthMap: data length != width*height");
    for (double v : data)
      if (!std::isfinite(v))
        throw std::invalid_argument("DepthMap: non-finite depth value");
  }
};

// Per-pixel unit 3-vectors, +z toward camera.
struct NormalMap {
  int width = 0;
  int height = 0;
  std::vector<std::array<double, 3>> normals;

  const std::array<double, 3>& at(int x, int y) const {
    return normals[static_cast<std::size_t>(y) * width + x];
  }
};

struct QuantizationStats {
  std::size_t distinct_levels = 0;
  double mean_plateau_run = 0.0;  // mean horizontal run length of constant segments
  double max_step = 0.0;          // max adjacent-pixel jump (horizontal or vertical)
};

// D- = 1 - D+/65535.
inline DepthMap invert_depth(const DepthMap& d) {
  if (d.encoding != DepthEncoding::positive_16bit)
    throw std::invalid_argument("invert_depth: encoding must be positive_16bit");
  DepthMap out = d;
  out.encoding = DepthEncoding::inverse_unit;
  for (double& v : out.data) v = 1.0 - v / 65535.0;
  return out;
}

// D+ = (1 - D-) * 65535.
inline DepthMap revert_depth(const DepthMap& d) {
  if (d.encoding != DepthEncoding::inverse_unit)
    throw std::invalid_argument("revert_depth: encoding must be inverse_unit");
  DepthMap out = d;
  out.encoding = DepthEncoding::positive_16bit;
  for (double& v : out.data) v = (1.0 - v) * 65535.0;
  return out;
}

namespace detail {

// Finite-difference depth slope: central in the interior, one-sided at the
// borders. Matches the stencil differentiated in normal_loss_gradient.
inline void depth_gradients(const DepthMap& d, std::vector<double>& dx,
                            std::vector<double>& dy) {
  const int w = d.width, h = d.height;
  dx.resize(d.size());
  dy.resize(d.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (x == 0)
        dx[i] = d.at(1, y) - d.at(0, y);
      else if (x == w - 1)
        dx[i] = d.at(w - 1, y) - d.at(w - 2, y);
      else
        dx[i] = 0.5 * (d.at(x + 1, y) - d.at(x - 1, y));
      if (y == 0)
        dy[i] = d.at(x, 1) - d.at(x, 0);
      else if (y == h - 1)
        dy[i] = d.at(x, h - 1) - d.at(x, h - 2);
      else
        dy[i] = 0.5 * (d.at(x, y + 1) - d.at(x, y - 1));
    }
  }
}

}  // namespace detail

// Normal direction (-dD/dx, -dD/dy, step_scale), normalized. step_scale
// converts one pixel of extent into depth units.
inline NormalMap normals_from_depth(const DepthMap& d, double step_scale = 1.0) {
  if (d.width < 2 || d.height < 2)
    throw std::invalid_argument("normals_from_depth: map must be at least 2x2");
  if (!(step_scale > 0.0))
    throw std::invalid_argument("normals_from_depth: step_scale must be > 0");
  d.validate();
  std::vector<double> dx, dy;
  detail::depth_gradients(d, dx, dy);
  NormalMap out;
  out.width = d.width;
  out.height = d.height;
  out.normals.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double gx = -dx[i], gy = -dy[i], gz = step_scale;
    const double inv_norm = 1.0 / std::sqrt(gx * gx + gy * gy + gz * gz);
    out.normals[i] = {gx * inv_norm, gy * inv_norm, gz * inv_norm};
  }
  return out;
}

// L_n = (1/N) sum (1 - cos(n_sim, n_rec)).
inline double normal_loss(const DepthMap& d_sim, const DepthMap& d_rec,
                          double step_scale = 1.0) {
  if (d_sim.width != d_rec.width || d_sim.height != d_rec.height)
    throw std::invalid_argument("normal_loss: dimension mismatch");
  if (d_sim.encoding != d_rec.encoding)
    throw std::invalid_argument("normal_loss: encoding mismatch");
  const NormalMap n_sim = normals_from_depth(d_sim, step_scale);
  const NormalMap n_rec = normals_from_depth(d_rec, step_scale);
  double sum = 0.0;
  for (std::size_t i = 0; i < n_sim.normals.size(); ++i) {
    const auto& a = n_sim.normals[i];
    const auto& b = n_rec.normals[i];
    sum += 1.0 - (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
  }
  return sum / static_cast<double>(n_sim.normals.size());
}

// Exact gradient of normal_loss with respect to each d_rec value under the
// same finite-difference stencil.
inline std::vector<double> normal_loss_gradient(const DepthMap& d_sim,
                                                const DepthMap& d_rec,
                                                double step_scale = 1.0) {
  if (d_sim.width != d_rec.width || d_sim.height != d_rec.height)
    throw std::invalid_argument("normal_loss_gradient: dimension mismatch");
  if (d_sim.encoding != d_rec.encoding)
    throw std::invalid_argument("normal_loss_gradient: encoding mismatch");
  const NormalMap n_sim = normals_from_depth(d_sim, step_scale);

  std::vector<double> dx, dy;
  detail::depth_gradients(d_rec, dx, dy);

  const int w = d_rec.width, h = d_rec.height;
  const double inv_n = 1.0 / static_cast<double>(d_rec.size());
  std::vector<double> grad(d_rec.size(), 0.0);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const double gx = -dx[i], gy = -dy[i], gz = step_scale;
      const double norm = std::sqrt(gx * gx + gy * gy + gz * gz);
      const double nx = gx / norm, ny = gy / norm, nz = gz / norm;
      const auto& s = n_sim.normals[i];
      // d(s . g/|g|)/dg = (s - (s.n) n) / |g|
      const double sn = s[0] * nx + s[1] * ny + s[2] * nz;
      const double wx = (s[0] - sn * nx) / norm;
      const double wy = (s[1] - sn * ny) / norm;
      // loss term is -(s.n)/N; g = (-dx, -dy, const)
      const double d_dx = inv_n * wx;  // dL/d(dx) = -(1/N)(-wx)
      const double d_dy = inv_n * wy;

      if (x == 0) {
        grad[i + 1] += d_dx;
        grad[i] -= d_dx;
      } else if (x == w - 1) {
        grad[i] += d_dx;
        grad[i - 1] -= d_dx;
      } else {
        grad[i + 1] += 0.5 * d_dx;
        grad[i - 1] -= 0.5 * d_dx;
      }
      if (y == 0) {
        grad[i + w] += d_dy;
        grad[i] -= d_dy;
      } else if (y == h - 1) {
        grad[i] += d_dy;
        grad[i - w] -= d_dy;
      } else {
        grad[i + w] += 0.5 * d_dy;
        grad[i - w] -= 0.5 * d_dy;
      }
    }
  }
  return grad;
}

// Depth samples along a single row.
inline std::vector<double> extract_profile(const DepthMap& d, int row) {
  if (row < 0 || row >= d.height)
    throw std::invalid_argument("extract_profile: row out of bounds");
  std::vector<double> out(d.width);
  for (int x = 0; x < d.width; ++x) out[x] = d.at(x, row);
  return out;
}

// Depth samples along a Bresenham traversal from (x0,y0) to (x1,y1).
inline std::vector<double> extract_profile(const DepthMap& d, int x0, int y0,
                                           int x1, int y1) {
  if (x0 < 0 || x0 >= d.width || x1 < 0 || x1 >= d.width || y0 < 0 ||
      y0 >= d.height || y1 < 0 || y1 >= d.height)
    throw std::invalid_argument("extract_profile: endpoint out of bounds");
  std::vector<double> out;
  const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  int x = x0, y = y0;
  for (;;) {
    out.push_back(d.at(x, y));
    if (x == x1 && y == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
  return out;
}

// Stair-step diagnostics: distinct values, mean horizontal plateau run, and
// the largest adjacent-pixel jump. Uses exact value equality; inputs are
// expected to carry quantized codes.
inline QuantizationStats quantization_stats(const DepthMap& d) {
  d.validate();
  QuantizationStats stats;
  stats.distinct_levels = std::set<double>(d.data.begin(), d.data.end()).size();

  std::size_t run_count = 0;
  for (int y = 0; y < d.height; ++y) {
    ++run_count;
    for (int x = 1; x < d.width; ++x) {
      const double step = std::abs(d.at(x, y) - d.at(x - 1, y));
      if (step != 0.0) ++run_count;
      stats.max_step = std::max(stats.max_step, step);
    }
  }
  stats.mean_plateau_run = static_cast<double>(d.size()) / static_cast<double>(run_count);

  for (int y = 1; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x)
      stats.max_step = std::max(stats.max_step, std::abs(d.at(x, y) - d.at(x, y - 1)));
  return stats;
}

}  // namespace pcstruct
