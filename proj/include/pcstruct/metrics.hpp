#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pcstruct/depth_geometry.hpp"
#include "pcstruct/image.hpp"

namespace pcstruct {

struct DepthMetrics {
  double rmse = 0.0;
  double mae = 0.0;
  double sq_rel = 0.0;
  std::size_t n_valid = 0;
};

struct ImageMetrics {
  double psnr = 0.0;  // dB, +inf for identical images
  double ssim = 0.0;
};

// Masked depth errors: rmse = sqrt(mean((p-g)^2)), mae = mean|p-g|,
// sq_rel = mean((p-g)^2 / g). gt must be positive under the mask.
inline DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt,
                                  const std::vector<bool>& valid_mask) {
  if (pred.width != gt.width || pred.height != gt.height)
    throw std::invalid_argument("depth_metrics: dimension mismatch");
  if (valid_mask.size() != pred.size())
    throw std::invalid_argument("depth_metrics: mask size mismatch");
  double sum_sq = 0.0, sum_abs = 0.0, sum_rel = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!valid_mask[i]) continue;
    if (!(gt.data[i] > 0.0))
      throw std::domain_error("depth_metrics: nonpositive ground truth under mask");
    const double e = pred.data[i] - gt.data[i];
    sum_sq += e * e;
    sum_abs += std::abs(e);
    sum_rel += e * e / gt.data[i];
    ++n;
  }
  if (n == 0) throw std::invalid_argument("depth_metrics: empty mask");
  DepthMetrics m;
  m.n_valid = n;
  m.rmse = std::sqrt(sum_sq / static_cast<double>(n));
  m.mae = sum_abs / static_cast<double>(n);
  m.sq_rel = sum_rel / static_cast<double>(n);
  return m;
}

inline DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt) {
  return depth_metrics(pred, gt, std::vector<bool>(pred.size(), true));
}

// Least-squares scale factor s minimizing ||s*pred - gt||^2 over the mask.
inline double scale_alignment(const DepthMap& pred, const DepthMap& gt,
                              const std::vector<bool>& valid_mask) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!valid_mask[i]) continue;
    num += pred.data[i] * gt.data[i];
    den += pred.data[i] * pred.data[i];
  }
  if (!(den > 0.0))
    throw std::domain_error("scale_alignment: prediction is identically zero");
  return num / den;
}

// 10*log10(max_value^2 / MSE); +inf when the images are identical.
inline double psnr(const GrayImage& a, const GrayImage& b) {
  if (a.width != b.width || a.height != b.height || a.max_value != b.max_value)
    throw std::invalid_argument("psnr: dimension or max_value mismatch");
  double mse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = a.data[i] - b.data[i];
    mse += e * e;
  }
  mse /= static_cast<double>(a.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(a.max_value * a.max_value / mse);
}

inline double psnr(const ColorImage& a, const ColorImage& b) {
  if (a.width != b.width || a.height != b.height || a.max_value != b.max_value)
    throw std::invalid_argument("psnr: dimension or max_value mismatch");
  double mse = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double e = a.data[i] - b.data[i];
    mse += e * e;
  }
  mse /= static_cast<double>(a.data.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(a.max_value * a.max_value / mse);
}

// Mean local SSIM over valid 11x11 windows, Gaussian weights sigma=1.5,
// K1=0.01, K2=0.03, L=max_value.
inline double ssim(const GrayImage& a, const GrayImage& b) {
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument("ssim: dimension mismatch");
  constexpr int kWindow = 11;
  constexpr int kRadius = kWindow / 2;
  if (a.width < kWindow || a.height < kWindow)
    throw std::invalid_argument("ssim: image smaller than 11x11 window");

  double weights[kWindow][kWindow];
  double wsum = 0.0;
  const double sigma = 1.5;
  for (int dy = -kRadius; dy <= kRadius; ++dy)
    for (int dx = -kRadius; dx <= kRadius; ++dx) {
      const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      weights[dy + kRadius][dx + kRadius] = w;
      wsum += w;
    }
  for (auto& row : weights)
    for (double& w : row) w /= wsum;

  const double L = a.max_value;
  const double c1 = (0.01 * L) * (0.01 * L);
  const double c2 = (0.03 * L) * (0.03 * L);

  double total = 0.0;
  std::size_t count = 0;
  for (int y = kRadius; y < a.height - kRadius; ++y) {
    for (int x = kRadius; x < a.width - kRadius; ++x) {
      double mu_a = 0.0, mu_b = 0.0;
      for (int dy = -kRadius; dy <= kRadius; ++dy)
        for (int dx = -kRadius; dx <= kRadius; ++dx) {
          const double w = weights[dy + kRadius][dx + kRadius];
          mu_a += w * a.at(x + dx, y + dy);
          mu_b += w * b.at(x + dx, y + dy);
        }
      double var_a = 0.0, var_b = 0.0, cov = 0.0;
      for (int dy = -kRadius; dy <= kRadius; ++dy)
        for (int dx = -kRadius; dx <= kRadius; ++dx) {
          const double w = weights[dy + kRadius][dx + kRadius];
          const double da = a.at(x + dx, y + dy) - mu_a;
          const double db = b.at(x + dx, y + dy) - mu_b;
          var_a += w * da * da;
          var_b += w * db * db;
          cov += w * da * db;
        }
      const double num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
      const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
      total += num / den;
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace pcstruct
