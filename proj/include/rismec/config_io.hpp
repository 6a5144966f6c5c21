#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rismec/harness.hpp"

namespace rismec {

// "n=10:10:50" -> axis "n", values {10, 20, 30, 40, 50}; "d=280" -> {280}.
inline void parse_sweep_spec(const std::string& spec, std::string& axis,
                             std::vector<double>& values) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("sweep spec must look like n=10:10:50");
  axis = spec.substr(0, eq);
  if (axis != "n" && axis != "d") {
    throw std::invalid_argument("sweep axis must be 'n' or 'd', got '" + axis + "'");
  }
  const std::string range = spec.substr(eq + 1);
  values.clear();
  std::vector<double> parts;
  std::stringstream ss(range);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    std::size_t used = 0;
    const double x = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("bad sweep number: '" + tok + "'");
    parts.push_back(x);
  }
  if (parts.size() == 1) {
    values.push_back(parts[0]);
    return;
  }
  if (parts.size() != 3) throw std::invalid_argument("sweep range must be start:step:stop");
  const double start = parts[0], step = parts[1], stop = parts[2];
  if (!(step > 0.0) || stop < start) {
    throw std::invalid_argument("sweep range needs step > 0 and stop >= start");
  }
  for (double v = start; v <= stop + 1e-9 * step; v += step) values.push_back(v);
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad number '" + value + "'");
  }
  if (used != value.size()) {
    throw std::invalid_argument("config key '" + key + "': bad number '" + value + "'");
  }
  return static_cast<T>(x);
}

}  // namespace detail

// Flat key = value configuration. Keys match the SystemParams and
// ExperimentConfig field names; unknown keys are errors. '#' starts a
// comment line.
inline void apply_config_line(ExperimentConfig& cfg, const std::string& key,
                              const std::string& value) {
  SystemParams& p = cfg.params;
  if (key == "M") p.M = detail::parse_number<int>(key, value);
  else if (key == "K") p.K = detail::parse_number<int>(key, value);
  else if (key == "N") p.N = detail::parse_number<int>(key, value);
  else if (key == "R") p.R = detail::parse_number<double>(key, value);
  else if (key == "r_cluster") p.r_cluster = detail::parse_number<double>(key, value);
  else if (key == "d") p.d = detail::parse_number<double>(key, value);
  else if (key == "bandwidth") p.bandwidth = detail::parse_number<double>(key, value);
  else if (key == "tx_power") p.tx_power = detail::parse_number<double>(key, value);
  else if (key == "noise_power") p.noise_power = detail::parse_number<double>(key, value);
  else if (key == "alpha_direct") p.alpha_direct = detail::parse_number<double>(key, value);
  else if (key == "alpha_ris") p.alpha_ris = detail::parse_number<double>(key, value);
  else if (key == "ref_loss") p.ref_loss = detail::parse_number<double>(key, value);
  else if (key == "rician_k") p.rician_k = detail::parse_number<double>(key, value);
  else if (key == "cycles_per_bit_local") p.cycles_per_bit_local = detail::parse_number<double>(key, value);
  else if (key == "cycles_per_bit_edge") p.cycles_per_bit_edge = detail::parse_number<double>(key, value);
  else if (key == "f_local") p.f_local = detail::parse_number<double>(key, value);
  else if (key == "f_edge_max") p.f_edge_max = detail::parse_number<double>(key, value);
  else if (key == "task_bits_min") p.task_bits_min = detail::parse_number<double>(key, value);
  else if (key == "task_bits_max") p.task_bits_max = detail::parse_number<double>(key, value);
  else if (key == "scheme") {
    if (value == "all") {
      cfg.schemes = {Scheme::without_ris, Scheme::random_phase, Scheme::optimized};
    } else {
      cfg.schemes = {parse_scheme(value)};
    }
  } else if (key == "sweep") {
    parse_sweep_spec(value, cfg.sweep_axis, cfg.sweep_values);
  } else if (key == "trials") cfg.trials = detail::parse_number<int>(key, value);
  else if (key == "seed") cfg.seed = detail::parse_number<std::uint64_t>(key, value);
  else if (key == "outer_tol") cfg.outer_tol = detail::parse_number<double>(key, value);
  else if (key == "outer_max_iter") cfg.outer_max_iter = detail::parse_number<int>(key, value);
  else if (key == "mu") cfg.mu = detail::parse_number<double>(key, value);
  else if (key == "mm_tol") cfg.mm_tol = detail::parse_number<double>(key, value);
  else if (key == "mm_max_iter") cfg.mm_max_iter = detail::parse_number<int>(key, value);
  else if (key == "alloc_tol") cfg.alloc_tol = detail::parse_number<double>(key, value);
  else if (key == "out") cfg.out_path = value;
  else if (key == "threads") cfg.threads = detail::parse_number<int>(key, value);
  else throw std::invalid_argument("unknown config key: '" + key + "'");
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = detail::trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    }
    const std::string key = detail::trim(body.substr(0, eq));
    const std::string value = detail::trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    }
    try {
      apply_config_line(cfg, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

}  // namespace rismec
