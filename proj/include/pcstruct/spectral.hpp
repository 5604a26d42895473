#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "pcstruct/image.hpp"
#include "pcstruct/parallel.hpp"

namespace pcstruct {

namespace detail {
// FFTW's planner is not thread-safe; execution on distinct buffers is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

// Forward 2D DFT, unnormalized. Row-major data, grid of width x height.
inline std::vector<std::complex<double>> dft2(const std::vector<double>& grid,
                                              int width, int height) {
  if (grid.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("dft2: grid size != width*height");
  std::vector<std::complex<double>> in(grid.begin(), grid.end());
  std::vector<std::complex<double>> out(in.size());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_2d(height, width,
                            reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()),
                            FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

// Inverse 2D DFT with 1/(WH) normalization, so idft2(dft2(x)) == x.
inline std::vector<std::complex<double>> idft2(
    const std::vector<std::complex<double>>& spectrum, int width, int height) {
  if (spectrum.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("idft2: spectrum size != width*height");
  std::vector<std::complex<double>> in = spectrum;
  std::vector<std::complex<double>> out(in.size());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_2d(height, width,
                            reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()),
                            FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double norm = 1.0 / (static_cast<double>(width) * height);
  for (auto& v : out) v *= norm;
  return out;
}

struct FilterBankConfig {
  int n_scales = 4;
  int n_orientations = 4;
  double min_wavelength = 6.0;
  double scale_multiplier = 2.0;
  double sigma_on_f = 0.55;     // radial bandwidth ratio
  double d_theta_sigma = 1.2;   // angular spread as a fraction of pi/n_orientations

  void validate() const {
    if (n_scales < 1) throw std::invalid_argument("FilterBankConfig: n_scales < 1");
    if (n_orientations < 1)
      throw std::invalid_argument("FilterBankConfig: n_orientations < 1");
    if (min_wavelength < 2.0)
      throw std::invalid_argument("FilterBankConfig: min_wavelength below Nyquist");
    if (!(scale_multiplier > 1.0))
      throw std::invalid_argument("FilterBankConfig: scale_multiplier must be > 1");
    if (!(sigma_on_f > 0.0 && sigma_on_f < 1.0))
      throw std::invalid_argument("FilterBankConfig: sigma_on_f must be in (0,1)");
    if (!(d_theta_sigma > 0.0))
      throw std::invalid_argument("FilterBankConfig: d_theta_sigma must be > 0");
  }
};

// Precomputed real frequency-domain transfer functions, one grid per
// (scale, orientation) pair, values in [0,1] and exactly 0 at DC.
struct FilterBank {
  FilterBankConfig config;
  int width = 0;
  int height = 0;
  std::vector<std::vector<double>> transfer;  // indexed scale*n_orientations + orient

  const std::vector<double>& at(int scale, int orientation) const {
    return transfer[static_cast<std::size_t>(scale) * config.n_orientations +
                    orientation];
  }
};

// Quadrature pair of one log-Gabor filter: even = real part of the filtered
// image, odd = imaginary part. sqrt(even^2 + odd^2) is the local amplitude.
struct QuadratureResponse {
  std::vector<double> even;
  std::vector<double> odd;
  int scale = 0;
  int orientation = 0;
};

// Builds the log-Gabor bank on the standard DFT frequency grid (Nyquist bin
// on the negative side). Radial term is a Gaussian on log frequency, angular
// term a Gaussian in angular distance from the orientation axis.
inline FilterBank build_bank(const FilterBankConfig& config, int width, int height) {
  config.validate();
  if (width < 4 || height < 4)
    throw std::invalid_argument("build_bank: width and height must be >= 4");

  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<double> radius(n), angle(n);
  for (int y = 0; y < height; ++y) {
    const double fy = (y <= (height - 1) / 2 ? y : y - height) / static_cast<double>(height);
    for (int x = 0; x < width; ++x) {
      const double fx = (x <= (width - 1) / 2 ? x : x - width) / static_cast<double>(width);
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      radius[i] = std::sqrt(fx * fx + fy * fy);
      angle[i] = std::atan2(fy, fx);
    }
  }
  radius[0] = 1.0;  // avoid log(0); the DC bin is zeroed below

  const double log_sigma = std::log(config.sigma_on_f);
  const double radial_denom = 2.0 * log_sigma * log_sigma;
  const double theta_sigma =
      config.d_theta_sigma * std::numbers::pi / config.n_orientations;
  const double angular_denom = 2.0 * theta_sigma * theta_sigma;

  FilterBank bank;
  bank.config = config;
  bank.width = width;
  bank.height = height;
  bank.transfer.resize(static_cast<std::size_t>(config.n_scales) *
                       config.n_orientations);

  for (int s = 0; s < config.n_scales; ++s) {
    const double wavelength =
        config.min_wavelength * std::pow(config.scale_multiplier, s);
    const double f0 = 1.0 / wavelength;
    std::vector<double> radial(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double lr = std::log(radius[i] / f0);
      radial[i] = std::exp(-(lr * lr) / radial_denom);
    }
    radial[0] = 0.0;

    for (int o = 0; o < config.n_orientations; ++o) {
      const double theta0 = o * std::numbers::pi / config.n_orientations;
      std::vector<double>& t =
          bank.transfer[static_cast<std::size_t>(s) * config.n_orientations + o];
      t.resize(n);
      const double sin0 = std::sin(theta0);
      const double cos0 = std::cos(theta0);
      for (std::size_t i = 0; i < n; ++i) {
        // angular distance on the full circle; the filter covers one
        // half-plane, which is what makes the spatial kernel a
        // quadrature (even + i*odd) pair
        const double ds = std::sin(angle[i]) * cos0 - std::cos(angle[i]) * sin0;
        const double dc = std::cos(angle[i]) * cos0 + std::sin(angle[i]) * sin0;
        const double d = std::abs(std::atan2(ds, dc));
        t[i] = radial[i] * std::exp(-(d * d) / angular_denom);
      }
      t[0] = 0.0;
    }
  }
  return bank;
}

// Frequency-domain filtering (circular convolution). The image mean is
// subtracted first; the filters have no DC so this cannot change results
// beyond suppressing spectral leakage.
inline std::vector<QuadratureResponse> apply_bank(const GrayImage& img,
                                                  const FilterBank& bank) {
  if (img.width != bank.width || img.height != bank.height)
    throw std::invalid_argument("apply_bank: image dimensions do not match bank");

  std::vector<double> centered = img.data;
  double mean = 0.0;
  for (double v : centered) mean += v;
  mean /= static_cast<double>(centered.size());
  for (double& v : centered) v -= mean;

  const auto spectrum = dft2(centered, img.width, img.height);
  const int nfilters = bank.config.n_scales * bank.config.n_orientations;
  std::vector<QuadratureResponse> responses(nfilters);

  parallel_for(nfilters, [&](int f) {
    const int s = f / bank.config.n_orientations;
    const int o = f % bank.config.n_orientations;
    const std::vector<double>& t = bank.at(s, o);
    std::vector<std::complex<double>> filtered(spectrum.size());
    for (std::size_t i = 0; i < spectrum.size(); ++i)
      filtered[i] = spectrum[i] * t[i];
    const auto spatial = idft2(filtered, img.width, img.height);
    QuadratureResponse& r = responses[f];
    r.scale = s;
    r.orientation = o;
    r.even.resize(spatial.size());
    r.odd.resize(spatial.size());
    for (std::size_t i = 0; i < spatial.size(); ++i) {
      r.even[i] = spatial[i].real();
      r.odd[i] = spatial[i].imag();
    }
  });
  return responses;
}

}  // namespace pcstruct
