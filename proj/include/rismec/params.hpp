#pragma once

#include <stdexcept>
#include <string>

namespace rismec {

// Carrier wavelength fixing the LoS phase terms (3 GHz).
inline constexpr double kCarrierWavelengthM = 0.1;

// Distances below this are clamped before evaluating the path-loss law.
inline constexpr double kMinDistanceM = 0.1;

// All scalar constants of the scenario. Defaults reproduce the reference
// setup: 5-antenna AP, 4 devices in a 10 m cluster 280 m from the AP,
// RIS 300 m out on the same axis, 1 MHz band, 50 GHz edge CPU budget.
struct SystemParams {
  int M = 5;  // AP antennas
  int K = 4;  // devices
  int N = 30; // RIS elements

  double R = 300.0;        // AP-RIS distance, m
  double r_cluster = 10.0; // device cluster radius, m
  double d = 280.0;        // cluster-center-to-AP distance, m

  double bandwidth = 1e6;     // Hz
  double tx_power = 0.1;      // W per device
  double noise_power = 1e-13; // W

  double alpha_direct = 3.5; // path-loss exponent, device-AP
  double alpha_ris = 2.2;    // path-loss exponent, device-RIS and RIS-AP
  double ref_loss = 1e-3;    // linear gain at 1 m reference distance
  double rician_k = 10.0;    // Rician factor (linear) for LoS-dominated links

  double cycles_per_bit_local = 1000.0;
  double cycles_per_bit_edge = 1000.0;
  double f_local = 1e9;     // device CPU clock, Hz (0 = no local compute)
  double f_edge_max = 50e9; // MEC node total clock budget, Hz

  double task_bits_min = 250e3;
  double task_bits_max = 350e3;

  void validate() const {
    auto fail = [](const std::string& what) {
      throw std::invalid_argument("SystemParams: " + what);
    };
    if (M < 1 || K < 1 || N < 1) fail("M, K, N must all be >= 1");
    if (!(R > 0.0)) fail("R must be > 0");
    if (r_cluster < 0.0) fail("r_cluster must be >= 0");
    if (d < 0.0) fail("d must be >= 0");
    if (!(bandwidth > 0.0)) fail("bandwidth must be > 0");
    if (!(tx_power > 0.0)) fail("tx_power must be > 0");
    if (!(noise_power > 0.0)) fail("noise_power must be > 0");
    if (!(alpha_ris > 0.0)) fail("alpha_ris must be > 0");
    if (alpha_direct < alpha_ris) fail("alpha_direct must be >= alpha_ris");
    if (!(ref_loss > 0.0)) fail("ref_loss must be > 0");
    if (rician_k < 0.0) fail("rician_k must be >= 0");
    if (!(cycles_per_bit_local > 0.0)) fail("cycles_per_bit_local must be > 0");
    if (!(cycles_per_bit_edge > 0.0)) fail("cycles_per_bit_edge must be > 0");
    if (f_local < 0.0) fail("f_local must be >= 0");
    if (!(f_edge_max > 0.0)) fail("f_edge_max must be > 0");
    if (task_bits_min < 0.0) fail("task_bits_min must be >= 0");
    if (task_bits_min > task_bits_max) fail("task_bits_min must be <= task_bits_max");
  }
};

}  // namespace rismec
