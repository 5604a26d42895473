#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pcstruct/loss_schedule.hpp"
#include "pcstruct/spectral.hpp"

namespace pcstruct {

using KeyValueMap = std::map<std::string, std::string>;

// Flat key=value text format. Blank lines and '#' comments are skipped.
inline KeyValueMap parse_key_values(std::istream& in) {
  KeyValueMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

inline KeyValueMap load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config");
  return parse_key_values(in);
}

namespace detail {
inline double kv_double(const KeyValueMap& kv, const std::string& key, double fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : std::stod(it->second);
}
inline int kv_int(const KeyValueMap& kv, const std::string& key, int fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : std::stoi(it->second);
}
}  // namespace detail

inline FilterBankConfig filter_bank_config_from(const KeyValueMap& kv) {
  FilterBankConfig c;
  c.n_scales = detail::kv_int(kv, "scales", c.n_scales);
  c.n_orientations = detail::kv_int(kv, "orientations", c.n_orientations);
  c.min_wavelength = detail::kv_double(kv, "min_wavelength", c.min_wavelength);
  c.scale_multiplier = detail::kv_double(kv, "mult", c.scale_multiplier);
  c.sigma_on_f = detail::kv_double(kv, "sigma_on_f", c.sigma_on_f);
  c.d_theta_sigma = detail::kv_double(kv, "d_theta_sigma", c.d_theta_sigma);
  c.validate();
  return c;
}

inline void write_filter_bank_config(std::ostream& out, const FilterBankConfig& c) {
  out << "scales=" << c.n_scales << "\n"
      << "orientations=" << c.n_orientations << "\n"
      << "min_wavelength=" << c.min_wavelength << "\n"
      << "mult=" << c.scale_multiplier << "\n"
      << "sigma_on_f=" << c.sigma_on_f << "\n"
      << "d_theta_sigma=" << c.d_theta_sigma << "\n";
}

inline LossWeights loss_weights_from(const KeyValueMap& kv) {
  LossWeights w;
  w.alpha = detail::kv_double(kv, "alpha", w.alpha);
  w.beta = detail::kv_double(kv, "beta", w.beta);
  w.gamma = detail::kv_double(kv, "gamma", w.gamma);
  w.lambda = detail::kv_double(kv, "lambda", w.lambda);
  w.pc_start_epoch = detail::kv_int(kv, "pc_start_epoch", w.pc_start_epoch);
  w.validate();
  return w;
}

inline void write_loss_weights(std::ostream& out, const LossWeights& w) {
  out << "alpha=" << w.alpha << "\n"
      << "beta=" << w.beta << "\n"
      << "gamma=" << w.gamma << "\n"
      << "lambda=" << w.lambda << "\n"
      << "pc_start_epoch=" << w.pc_start_epoch << "\n";
}

}  // namespace pcstruct
