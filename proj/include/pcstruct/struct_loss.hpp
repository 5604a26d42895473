#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcstruct/image.hpp"
#include "pcstruct/phase_congruency.hpp"
#include "pcstruct/spectral.hpp"

namespace pcstruct {

struct GradientMap {
  int width = 0;
  int height = 0;
  std::vector<double> magnitude;
  std::string operator_name;
};

struct SimilarityMaps {
  int width = 0;
  int height = 0;
  std::vector<double> s_pc;   // in (0,1]
  std::vector<double> s_g;    // in (0,1]
  std::vector<double> pc_m;   // max(pc_gen, pc_real)
  double t1 = 0.85;
  double t2 = 160.0;
};

struct PcLossBreakdown {
  double loss = 0.0;   // 1 - fsim
  double fsim = 0.0;
  double mean_s_pc = 0.0;
  double mean_s_g = 0.0;
};

namespace detail {
inline int clamp_coord(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }
}

// Scharr 3x3 gradient magnitude, replicate-padded borders. The kernel is
// applied to half-differences, so a unit ramp measures 16 (the weight sum
// of one kernel side).
inline GradientMap gradient_magnitude(const GrayImage& img) {
  img.validate();
  GradientMap out;
  out.width = img.width;
  out.height = img.height;
  out.operator_name = "scharr";
  out.magnitude.resize(img.size());
  for (int y = 0; y < img.height; ++y) {
    const int ym = detail::clamp_coord(y - 1, img.height);
    const int yp = detail::clamp_coord(y + 1, img.height);
    for (int x = 0; x < img.width; ++x) {
      const int xm = detail::clamp_coord(x - 1, img.width);
      const int xp = detail::clamp_coord(x + 1, img.width);
      const double gx = 0.5 * (3.0 * (img.at(xp, ym) - img.at(xm, ym)) +
                               10.0 * (img.at(xp, y) - img.at(xm, y)) +
                               3.0 * (img.at(xp, yp) - img.at(xm, yp)));
      const double gy = 0.5 * (3.0 * (img.at(xm, yp) - img.at(xm, ym)) +
                               10.0 * (img.at(x, yp) - img.at(x, ym)) +
                               3.0 * (img.at(xp, yp) - img.at(xp, ym)));
      out.magnitude[static_cast<std::size_t>(y) * img.width + x] = std::hypot(gx, gy);
    }
  }
  return out;
}

// Pointwise similarity ratios:
//   S_PC = (2*pc_gen*pc_real + T1) / (pc_gen^2 + pc_real^2 + T1)
//   S_G  = (2*g_gen*g_real  + T2) / (g_gen^2  + g_real^2  + T2)
inline SimilarityMaps similarity_maps(const std::vector<double>& pc_gen,
                                      const std::vector<double>& pc_real,
                                      const std::vector<double>& g_gen,
                                      const std::vector<double>& g_real,
                                      int width, int height, double t1 = 0.85,
                                      double t2 = 160.0) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (pc_gen.size() != n || pc_real.size() != n || g_gen.size() != n ||
      g_real.size() != n)
    throw std::invalid_argument("similarity_maps: dimension mismatch");
  SimilarityMaps out;
  out.width = width;
  out.height = height;
  out.t1 = t1;
  out.t2 = t2;
  out.s_pc.resize(n);
  out.s_g.resize(n);
  out.pc_m.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.s_pc[i] = (2.0 * pc_gen[i] * pc_real[i] + t1) /
                  (pc_gen[i] * pc_gen[i] + pc_real[i] * pc_real[i] + t1);
    out.s_g[i] = (2.0 * g_gen[i] * g_real[i] + t2) /
                 (g_gen[i] * g_gen[i] + g_real[i] * g_real[i] + t2);
    out.pc_m[i] = std::max(pc_gen[i], pc_real[i]);
  }
  return out;
}

// FSIM-style index: sum S_PC*S_G*PC_m / sum PC_m. The phase congruency
// loss is its exact complement. T2=160 presumes gradients on a [0,255]
// intensity scale, so gradients are evaluated on [0,255]-normalized images
// regardless of the storage scale.
inline PcLossBreakdown pc_loss_breakdown(const GrayImage& img_gen,
                                         const GrayImage& img_real,
                                         const FilterBank& bank,
                                         double epsilon = 1e-4, double t1 = 0.85,
                                         double t2 = 160.0) {
  if (img_gen.width != img_real.width || img_gen.height != img_real.height)
    throw std::invalid_argument("pc_loss: image dimensions differ");

  const PCResult pc_gen = compute_pc(img_gen, bank, epsilon);
  const PCResult pc_real = compute_pc(img_real, bank, epsilon);
  const GradientMap g_gen = gradient_magnitude(normalize(img_gen, 255.0));
  const GradientMap g_real = gradient_magnitude(normalize(img_real, 255.0));

  const SimilarityMaps sim =
      similarity_maps(pc_gen.pc, pc_real.pc, g_gen.magnitude, g_real.magnitude,
                      img_gen.width, img_gen.height, t1, t2);

  double num = 0.0, den = 0.0, sum_s_pc = 0.0, sum_s_g = 0.0;
  const std::size_t n = sim.pc_m.size();
  for (std::size_t i = 0; i < n; ++i) {
    num += sim.s_pc[i] * sim.s_g[i] * sim.pc_m[i];
    den += sim.pc_m[i];
    sum_s_pc += sim.s_pc[i];
    sum_s_g += sim.s_g[i];
  }
  if (!(den > 0.0))
    throw std::domain_error("pc_loss: degenerate input, sum of PC_m is zero "
                            "(both images constant)");
  PcLossBreakdown out;
  out.fsim = num / den;
  out.loss = 1.0 - out.fsim;
  out.mean_s_pc = sum_s_pc / static_cast<double>(n);
  out.mean_s_g = sum_s_g / static_cast<double>(n);
  return out;
}

inline double pc_loss(const GrayImage& img_gen, const GrayImage& img_real,
                      const FilterBank& bank, double epsilon = 1e-4,
                      double t1 = 0.85, double t2 = 160.0) {
  return pc_loss_breakdown(img_gen, img_real, bank, epsilon, t1, t2).loss;
}

inline double fsim_score(const GrayImage& img_gen, const GrayImage& img_real,
                         const FilterBank& bank, double epsilon = 1e-4,
                         double t1 = 0.85, double t2 = 160.0) {
  return pc_loss_breakdown(img_gen, img_real, bank, epsilon, t1, t2).fsim;
}

}  // namespace pcstruct
