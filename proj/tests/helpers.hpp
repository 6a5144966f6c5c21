#pragma once

// Shared generators and independent oracles for the test suites. Everything
// here is test-only and deliberately avoids the library's main code paths:
// the MMSE-SINR oracle goes through the matrix-inversion-lemma form, the
// phase objective is re-derived through effective channels, and latency
// references come from closed forms or grid search.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "rismec/channel.hpp"
#include "rismec/mud.hpp"
#include "rismec/phase_opt.hpp"
#include "rismec/rng.hpp"

namespace testutil {

inline Eigen::MatrixXcd random_matrix(Eigen::Index rows, Eigen::Index cols,
                                      rismec::RngStream& rng) {
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.cnormal();
  }
  return m;
}

inline rismec::PhaseVector random_unit_vector(Eigen::Index n, rismec::RngStream& rng) {
  rismec::PhaseVector theta(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    theta(i) = std::polar(1.0, 2.0 * rismec::RngStream::kPi * rng.uniform());
  }
  return theta;
}

// O(1)-scale synthetic channel realization, independent of the geometry
// pipeline. Suitable for purely algebraic checks.
inline rismec::ChannelRealization random_channel(int n_antennas, int n_devices, int n_elements,
                                                 rismec::RngStream& rng) {
  rismec::ChannelRealization chan;
  chan.h_direct = random_matrix(n_antennas, n_devices, rng);
  chan.h_dr = random_matrix(n_elements, n_devices, rng);
  chan.G = random_matrix(n_antennas, n_elements, rng);
  return chan;
}

// MMSE output SINR via the matrix-inversion-lemma closed form,
//   sinr_k = 1 / [(I + (p / sigma^2) H^H H)^{-1}]_kk - 1.
inline Eigen::VectorXd sinr_inversion_lemma(const Eigen::MatrixXcd& H, double tx_power,
                                            double noise_power) {
  const Eigen::Index K = H.cols();
  Eigen::MatrixXcd inner = (tx_power / noise_power) * (H.adjoint() * H);
  inner += Eigen::MatrixXcd::Identity(K, K);
  const Eigen::MatrixXcd inv = inner.inverse();
  Eigen::VectorXd sinr(K);
  for (Eigen::Index k = 0; k < K; ++k) sinr(k) = 1.0 / inv(k, k).real() - 1.0;
  return sinr;
}

// The phase objective evaluated the long way round: through effective
// channels and the per-device detector outputs.
inline double phase_objective_direct(const rismec::ChannelRealization& chan,
                                     const Eigen::MatrixXcd& W, double tx_power, double mu,
                                     const rismec::PhaseVector& theta) {
  const Eigen::MatrixXcd H = rismec::effective_channel(chan, theta);
  const Eigen::Index K = H.cols();
  double g = 0.0;
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index j = 0; j < K; ++j) {
      const double term = tx_power * std::norm(W.col(k).dot(H.col(j)));
      g += (j == k) ? term : -mu * term;
    }
  }
  return g;
}

// Channel-shaped quadratic model for optimizer quality tests: MMSE weights
// at all-ones phases, then the surrogate around them.
inline rismec::QuadraticModel channel_model(int n_antennas, int n_devices, int n_elements,
                                            double mu, rismec::RngStream& rng,
                                            rismec::ChannelRealization* chan_out = nullptr,
                                            Eigen::MatrixXcd* w_out = nullptr) {
  const rismec::ChannelRealization chan = random_channel(n_antennas, n_devices, n_elements, rng);
  const Eigen::MatrixXcd H = rismec::effective_channel(chan, rismec::all_ones_phases(n_elements));
  const Eigen::MatrixXcd W = rismec::mmse_weights(H, 1.0, 0.1);
  if (chan_out) *chan_out = chan;
  if (w_out) *w_out = W;
  return rismec::build_quadratic(chan, W, 1.0, mu);
}

}  // namespace testutil
