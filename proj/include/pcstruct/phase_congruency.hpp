#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pcstruct/image.hpp"
#include "pcstruct/parallel.hpp"
#include "pcstruct/spectral.hpp"

namespace pcstruct {

struct PCResult {
  int width = 0;
  int height = 0;
  std::vector<double> pc;                              // in [0,1]
  std::vector<std::vector<double>> orientation_energy; // one grid per orientation
  std::vector<double> total_amplitude;
  double epsilon = 1e-4;
};

enum class NoiseMethod {
  none,
  median_rayleigh,  // Rayleigh noise floor from the smallest-scale amplitude median
};

// Local energy for one orientation: magnitude of the response vector summed
// across scales. Responses must share one grid size.
inline std::vector<double> local_energy(
    const std::vector<const QuadratureResponse*>& responses) {
  if (responses.empty())
    throw std::invalid_argument("local_energy: empty response list");
  const std::size_t n = responses.front()->even.size();
  std::vector<double> sum_even(n, 0.0), sum_odd(n, 0.0);
  for (const QuadratureResponse* r : responses) {
    if (r->even.size() != n || r->odd.size() != n)
      throw std::invalid_argument("local_energy: mismatched response sizes");
    for (std::size_t i = 0; i < n; ++i) {
      sum_even[i] += r->even[i];
      sum_odd[i] += r->odd[i];
    }
  }
  std::vector<double> energy(n);
  for (std::size_t i = 0; i < n; ++i)
    energy[i] = std::hypot(sum_even[i], sum_odd[i]);
  return energy;
}

inline std::vector<double> local_energy(
    const std::vector<QuadratureResponse>& responses) {
  std::vector<const QuadratureResponse*> ptrs;
  ptrs.reserve(responses.size());
  for (const auto& r : responses) ptrs.push_back(&r);
  return local_energy(ptrs);
}

namespace detail {

inline double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lo = *std::max_element(v.begin(), v.begin() + mid);
    m = 0.5 * (m + lo);
  }
  return m;
}

inline PCResult compute_pc_impl(const GrayImage& img, const FilterBank& bank,
                                double epsilon, NoiseMethod noise_method) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("compute_pc: epsilon must be > 0");
  img.validate();

  // Fixed [0,1] working scale so epsilon has a consistent meaning.
  const GrayImage unit = normalize(img, 1.0);
  const auto responses = apply_bank(unit, bank);
  const int n_scales = bank.config.n_scales;
  const int n_orient = bank.config.n_orientations;
  const std::size_t n = unit.size();

  PCResult result;
  result.width = img.width;
  result.height = img.height;
  result.epsilon = epsilon;
  result.orientation_energy.resize(n_orient);
  result.total_amplitude.assign(n, 0.0);
  result.pc.assign(n, 0.0);

  std::vector<std::vector<double>> per_orient_amplitude(n_orient);
  parallel_for(n_orient, [&](int o) {
    std::vector<const QuadratureResponse*> orient_responses;
    orient_responses.reserve(n_scales);
    for (int s = 0; s < n_scales; ++s)
      orient_responses.push_back(&responses[static_cast<std::size_t>(s) * n_orient + o]);

    std::vector<double> energy = local_energy(orient_responses);

    std::vector<double>& amp = per_orient_amplitude[o];
    amp.assign(n, 0.0);
    for (const QuadratureResponse* r : orient_responses)
      for (std::size_t i = 0; i < n; ++i)
        amp[i] += std::hypot(r->even[i], r->odd[i]);

    if (noise_method == NoiseMethod::median_rayleigh) {
      // Noise floor from the smallest-scale amplitude: the median of a
      // Rayleigh(tau) sample is tau*sqrt(ln 4); threshold at mean + 2 sigma.
      std::vector<double> smallest(n);
      const QuadratureResponse* r0 = orient_responses.front();
      for (std::size_t i = 0; i < n; ++i)
        smallest[i] = std::hypot(r0->even[i], r0->odd[i]);
      const double tau = median(smallest) / std::sqrt(std::log(4.0));
      const double rayleigh_mean = tau * std::sqrt(std::numbers::pi / 2.0);
      const double rayleigh_sigma = tau * std::sqrt(2.0 - std::numbers::pi / 2.0);
      const double threshold = rayleigh_mean + 2.0 * rayleigh_sigma;
      for (double& e : energy) e = std::max(e - threshold, 0.0);
    }
    result.orientation_energy[o] = std::move(energy);
  });

  for (int o = 0; o < n_orient; ++o)
    for (std::size_t i = 0; i < n; ++i)
      result.total_amplitude[i] += per_orient_amplitude[o][i];

  for (std::size_t i = 0; i < n; ++i) {
    double energy_sum = 0.0;
    for (int o = 0; o < n_orient; ++o)
      energy_sum += result.orientation_energy[o][i];
    result.pc[i] = energy_sum / (epsilon + result.total_amplitude[i]);
  }
  return result;
}

}  // namespace detail

// PC(x) = sum_j E_theta_j(x) / (epsilon + sum_n sum_j A_{n,theta_j}(x)).
inline PCResult compute_pc(const GrayImage& img, const FilterBank& bank,
                           double epsilon = 1e-4) {
  return detail::compute_pc_impl(img, bank, epsilon, NoiseMethod::none);
}

// Same ratio with a per-orientation noise floor subtracted from the local
// energy before the division.
inline PCResult compute_pc_noise_compensated(
    const GrayImage& img, const FilterBank& bank, double epsilon = 1e-4,
    NoiseMethod noise_method = NoiseMethod::median_rayleigh) {
  return detail::compute_pc_impl(img, bank, epsilon, noise_method);
}

}  // namespace pcstruct
