#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "rismec/geometry.hpp"
#include "rismec/params.hpp"
#include "rismec/rng.hpp"

namespace rismec {

// One Monte-Carlo draw of all channel coefficients. Columns index devices.
struct ChannelRealization {
  Eigen::MatrixXcd h_direct; // M x K, device -> AP
  Eigen::MatrixXcd h_dr;     // N x K, device -> RIS
  Eigen::MatrixXcd G;        // M x N, RIS -> AP
};

// Assigned per-entry mean-square gains. The 1 m reference loss enters the
// cascaded device-RIS-AP path once (on the device-RIS hop); the RIS-AP hop
// is normalized to unit reference gain, so the cascade's entry gain equals
// path_loss(d_dr * d_ra, alpha_ris, ref_loss).
inline double direct_gain(const Geometry& geom, const SystemParams& params, int k) {
  return path_loss(distance(geom.device_positions.at(static_cast<std::size_t>(k)), geom.ap_position),
                   params.alpha_direct, params.ref_loss);
}

inline double device_ris_gain(const Geometry& geom, const SystemParams& params, int k) {
  return path_loss(distance(geom.device_positions.at(static_cast<std::size_t>(k)), geom.ris_position),
                   params.alpha_ris, params.ref_loss);
}

inline double ris_ap_gain(const Geometry& geom, const SystemParams& params) {
  return path_loss(distance(geom.ris_position, geom.ap_position), params.alpha_ris, 1.0);
}

namespace detail {

// Rician entry with mean-square gain `pl` and LoS phase 2*pi*dist/lambda.
inline std::complex<double> rician_entry(double pl, double dist, double rician_k, RngStream& rng) {
  const double phase = 2.0 * RngStream::kPi * dist / kCarrierWavelengthM;
  const std::complex<double> los = std::polar(1.0, phase);
  if (std::isinf(rician_k)) return std::sqrt(pl) * los;
  const std::complex<double> scatter = rng.cnormal();
  const double los_w = std::sqrt(rician_k / (1.0 + rician_k));
  const double nlos_w = std::sqrt(1.0 / (1.0 + rician_k));
  return std::sqrt(pl) * (los_w * los + nlos_w * scatter);
}

}  // namespace detail

// Direct links are Rayleigh; device-RIS and RIS-AP links are Rician with
// factor params.rician_k. The direct block is drawn first so its values do
// not depend on N.
inline ChannelRealization draw_channels(const Geometry& geom, const SystemParams& params,
                                        RngStream& rng) {
  if (static_cast<int>(geom.device_positions.size()) != params.K) {
    throw std::invalid_argument("draw_channels: geometry/params device count mismatch");
  }
  const int M = params.M;
  const int K = params.K;
  const int N = params.N;

  ChannelRealization chan;
  chan.h_direct.resize(M, K);
  for (int k = 0; k < K; ++k) {
    const double amp = std::sqrt(direct_gain(geom, params, k));
    for (int m = 0; m < M; ++m) chan.h_direct(m, k) = amp * rng.cnormal();
  }

  chan.h_dr.resize(N, K);
  for (int k = 0; k < K; ++k) {
    const double pl = device_ris_gain(geom, params, k);
    const double dist = distance(geom.device_positions[static_cast<std::size_t>(k)], geom.ris_position);
    for (int n = 0; n < N; ++n) chan.h_dr(n, k) = detail::rician_entry(pl, dist, params.rician_k, rng);
  }

  chan.G.resize(M, N);
  {
    const double pl = ris_ap_gain(geom, params);
    const double dist = distance(geom.ris_position, geom.ap_position);
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < M; ++m) chan.G(m, n) = detail::rician_entry(pl, dist, params.rician_k, rng);
  }
  return chan;
}

// h_k = h_direct_k + G diag(theta) h_dr_k for every device. `theta` is any
// coefficient vector; the unit-modulus invariant lives with PhaseVector.
inline Eigen::MatrixXcd effective_channel(const ChannelRealization& chan,
                                          const Eigen::VectorXcd& theta) {
  if (theta.size() != chan.h_dr.rows() || chan.G.cols() != chan.h_dr.rows() ||
      chan.G.rows() != chan.h_direct.rows()) {
    throw std::invalid_argument("effective_channel: dimension mismatch");
  }
  Eigen::MatrixXcd H = chan.h_direct;
  for (Eigen::Index k = 0; k < H.cols(); ++k) {
    H.col(k) += chan.G * theta.cwiseProduct(chan.h_dr.col(k));
  }
  return H;
}

}  // namespace rismec
