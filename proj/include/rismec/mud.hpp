#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace rismec {

// Per-device detector output quality and the resulting offloading rates.
struct RateVector {
  Eigen::VectorXd sinr;     // unitless, >= 0
  Eigen::VectorXd rate_bps; // bandwidth * log2(1 + sinr)
};

// MMSE combining matrix, column k detects device k:
//   w_k = (sum_j p h_j h_j^H + noise I)^(-1) h_k.
// The covariance is Hermitian positive definite for noise_power > 0, so the
// solve always succeeds. Column scaling is immaterial to SINR.
inline Eigen::MatrixXcd mmse_weights(const Eigen::MatrixXcd& H, double tx_power,
                                     double noise_power) {
  if (!(noise_power > 0.0)) throw std::invalid_argument("mmse_weights: noise_power must be > 0");
  const Eigen::Index M = H.rows();
  Eigen::MatrixXcd A = tx_power * (H * H.adjoint());
  A += noise_power * Eigen::MatrixXcd::Identity(M, M);
  return A.llt().solve(H);
}

// sinr_k = p |w_k^H h_k|^2 / (sum_{j != k} p |w_k^H h_j|^2 + noise ||w_k||^2)
inline Eigen::VectorXd output_sinr(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W,
                                   double tx_power, double noise_power) {
  if (H.rows() != W.rows() || H.cols() != W.cols()) {
    throw std::invalid_argument("output_sinr: dimension mismatch");
  }
  const Eigen::Index K = H.cols();
  Eigen::VectorXd sinr(K);
  const Eigen::MatrixXcd cross = W.adjoint() * H; // cross(k, j) = w_k^H h_j
  for (Eigen::Index k = 0; k < K; ++k) {
    const double wnorm2 = W.col(k).squaredNorm();
    if (wnorm2 == 0.0) throw std::invalid_argument("output_sinr: zero-norm combining vector");
    double interference = 0.0;
    for (Eigen::Index j = 0; j < K; ++j) {
      if (j != k) interference += tx_power * std::norm(cross(k, j));
    }
    sinr(k) = tx_power * std::norm(cross(k, k)) / (interference + noise_power * wnorm2);
  }
  return sinr;
}

inline Eigen::VectorXd shannon_rates(const Eigen::VectorXd& sinr, double bandwidth) {
  Eigen::VectorXd rates(sinr.size());
  for (Eigen::Index k = 0; k < sinr.size(); ++k) {
    if (sinr(k) < 0.0) throw std::invalid_argument("shannon_rates: negative SINR");
    rates(k) = bandwidth * std::log2(1.0 + sinr(k));
  }
  return rates;
}

inline RateVector detector_rates(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W,
                                 double tx_power, double noise_power, double bandwidth) {
  RateVector rv;
  rv.sinr = output_sinr(H, W, tx_power, noise_power);
  rv.rate_bps = shannon_rates(rv.sinr, bandwidth);
  return rv;
}

}  // namespace rismec
