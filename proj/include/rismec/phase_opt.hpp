#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rismec/channel.hpp"
#include "rismec/rng.hpp"

namespace rismec {

// N unit-modulus reflection coefficients.
using PhaseVector = Eigen::VectorXcd;

inline bool is_unit_modulus(const PhaseVector& theta, double tol = 1e-12) {
  for (Eigen::Index n = 0; n < theta.size(); ++n) {
    if (std::abs(std::abs(theta(n)) - 1.0) > tol) return false;
  }
  return true;
}

inline PhaseVector all_ones_phases(int n_elements) {
  return PhaseVector::Ones(n_elements);
}

// Phases i.i.d. uniform on [0, 2*pi).
inline PhaseVector random_phases(int n_elements, RngStream& rng) {
  if (n_elements < 1) throw std::invalid_argument("random_phases: N must be >= 1");
  PhaseVector theta(n_elements);
  for (int n = 0; n < n_elements; ++n) {
    theta(n) = std::polar(1.0, 2.0 * RngStream::kPi * rng.uniform());
  }
  return theta;
}

// g(theta) = theta^H Phi theta + 2 Re(v^H theta) + c, real on the
// unit-modulus set since Phi is Hermitian.
struct QuadraticModel {
  Eigen::MatrixXcd Phi;
  Eigen::VectorXcd v;
  double c = 0.0;

  double evaluate(const PhaseVector& theta) const {
    const std::complex<double> quad = (theta.adjoint() * Phi * theta).value();
    return quad.real() + 2.0 * v.dot(theta).real() + c;
  }
};

// Encodes g(theta) = sum_k p |w_k^H h_k(theta)|^2
//                  - mu * sum_k sum_{j!=k} p |w_k^H h_j(theta)|^2
// with h_j(theta) = h_direct_j + G diag(theta) h_dr_j. Expanding
// w_k^H h_j(theta) = b_kj + c_kj^T theta gives rank-one Hermitian updates.
inline QuadraticModel build_quadratic(const ChannelRealization& chan, const Eigen::MatrixXcd& W,
                                      double tx_power, double mu = 1.0) {
  if (W.rows() != chan.h_direct.rows() || W.cols() != chan.h_direct.cols()) {
    throw std::invalid_argument("build_quadratic: weight/channel dimension mismatch");
  }
  if (mu < 0.0) throw std::invalid_argument("build_quadratic: mu must be >= 0");
  const Eigen::Index K = W.cols();
  const Eigen::Index N = chan.h_dr.rows();

  QuadraticModel model;
  model.Phi = Eigen::MatrixXcd::Zero(N, N);
  model.v = Eigen::VectorXcd::Zero(N);
  model.c = 0.0;

  for (Eigen::Index k = 0; k < K; ++k) {
    const Eigen::VectorXcd a = chan.G.adjoint() * W.col(k); // a_n = (w_k^H G e_n)^*
    for (Eigen::Index j = 0; j < K; ++j) {
      const std::complex<double> b = W.col(k).dot(chan.h_direct.col(j));
      // u = conj(c_kj) with c_kj[n] = conj(a_n) * h_dr(n, j)
      const Eigen::VectorXcd u = a.cwiseProduct(chan.h_dr.col(j).conjugate());
      const double s = (j == k) ? tx_power : -mu * tx_power;
      model.Phi.noalias() += s * (u * u.adjoint());
      model.v += (s * b) * u;
      model.c += s * std::norm(b);
    }
  }
  return model;
}

namespace detail {

// Deterministic generic start vector for power iteration.
inline Eigen::VectorXcd power_iteration_start(Eigen::Index n) {
  Eigen::VectorXcd x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double di = static_cast<double>(i);
    x(i) = std::complex<double>(std::cos(1.7 * di + 0.3), std::sin(0.9 * di + 0.1));
  }
  return x;
}

// Rayleigh quotient of the dominant eigenpair of a Hermitian matrix.
inline double dominant_eigenvalue(const Eigen::MatrixXcd& A, double rel_tol = 1e-10,
                                  int max_iter = 3000) {
  Eigen::VectorXcd x = power_iteration_start(A.rows());
  x.normalize();
  double rho = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXcd y = A * x;
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    const double next = x.dot(y).real(); // real for Hermitian A
    const bool settled = std::abs(next - rho) <= rel_tol * std::max(1e-300, std::abs(next));
    rho = next;
    x = y / norm;
    if (settled && it > 2) break;
  }
  return rho;
}

// Lower spectral bound: lambda_min(Phi) estimated by power iteration on the
// positive-shifted complement, minus a small safety margin.
inline double ascent_shift(const Eigen::MatrixXcd& Phi) {
  const Eigen::Index n = Phi.rows();
  const double top = std::abs(dominant_eigenvalue(Phi));
  const double lift = top * (1.0 + 1e-6) + 1e-30;
  const Eigen::MatrixXcd C = lift * Eigen::MatrixXcd::Identity(n, n) - Phi;
  const double lambda_min = lift - dominant_eigenvalue(C);
  return lambda_min - 1e-6 * (1.0 + top + std::abs(lambda_min));
}

}  // namespace detail

struct MmResult {
  PhaseVector theta;          // best iterate
  double objective = 0.0;     // g at the best iterate
  int iterations = 0;
  double shift = 0.0;         // spectral shift used by the surrogate
  std::vector<double> trace;  // g(theta_0), g(theta_1), ...
};

// Majorization-minimization ascent on the unit-modulus set. Each step
// maximizes the touching linear minorant
//   g(theta) >= const + 2 Re(theta^H ((Phi - lambda I) theta_t + v)),
// valid for lambda <= lambda_min(Phi), whose unit-modulus maximizer is
// theta_{t+1} = exp(i arg((Phi - lambda I) theta_t + v)). The objective is
// nondecreasing at every step; the best iterate is returned.
inline MmResult mm_ascend(const QuadraticModel& model, const PhaseVector& theta0,
                          double tol = 1e-4, int max_iter = 200) {
  const Eigen::Index N = model.Phi.rows();
  if (model.Phi.cols() != N || model.v.size() != N || theta0.size() != N) {
    throw std::invalid_argument("mm_ascend: dimension mismatch");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("mm_ascend: tol must be > 0");
  if (!is_unit_modulus(theta0)) {
    throw std::invalid_argument("mm_ascend: theta0 violates the unit-modulus constraint");
  }
  const double herm_err = (model.Phi - model.Phi.adjoint()).norm();
  if (herm_err > 1e-12 * std::max(1.0, model.Phi.norm())) {
    throw std::invalid_argument("mm_ascend: Phi is not Hermitian");
  }

  MmResult res;
  res.shift = detail::ascent_shift(model.Phi);
  const Eigen::MatrixXcd B =
      model.Phi - res.shift * Eigen::MatrixXcd::Identity(N, N);

  PhaseVector theta = theta0;
  double g = model.evaluate(theta);
  res.trace.push_back(g);
  res.theta = theta;
  res.objective = g;

  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXcd y = B * theta + model.v;
    PhaseVector next(N);
    for (Eigen::Index n = 0; n < N; ++n) {
      const double mag = std::abs(y(n));
      next(n) = (mag == 0.0) ? theta(n) : y(n) / mag;
    }
    const double g_next = model.evaluate(next);
    res.trace.push_back(g_next);
    res.iterations = it + 1;
    if (g_next > res.objective) {
      res.objective = g_next;
      res.theta = next;
    }
    const double gain = g_next - g;
    theta = next;
    const double scale = std::max({std::abs(g_next), std::abs(g), 1e-30});
    g = g_next;
    if (gain <= tol * scale) break;
  }
  return res;
}

// Globally best theta over the quantized grid {exp(i 2 pi l / levels)}^N.
// The correctness reference for mm_ascend on small instances.
inline PhaseVector exhaustive_phase_search(const QuadraticModel& model, int levels) {
  const Eigen::Index N = model.Phi.rows();
  if (levels < 1) throw std::invalid_argument("exhaustive_phase_search: levels must be >= 1");
  const double space = std::pow(static_cast<double>(levels), static_cast<double>(N));
  if (!(space <= 1e6)) {
    throw std::invalid_argument(
        "exhaustive_phase_search: levels^N exceeds the 1e6 search-space limit");
  }

  std::vector<std::complex<double>> alphabet(static_cast<std::size_t>(levels));
  for (int l = 0; l < levels; ++l) {
    alphabet[static_cast<std::size_t>(l)] =
        std::polar(1.0, 2.0 * RngStream::kPi * l / levels);
  }

  std::vector<int> digits(static_cast<std::size_t>(N), 0);
  PhaseVector theta(N), best(N);
  double best_g = -std::numeric_limits<double>::infinity();
  const auto total = static_cast<std::uint64_t>(space + 0.5);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    for (Eigen::Index n = 0; n < N; ++n) {
      theta(n) = alphabet[static_cast<std::size_t>(digits[static_cast<std::size_t>(n)])];
    }
    const double g = model.evaluate(theta);
    if (g > best_g) {
      best_g = g;
      best = theta;
    }
    for (Eigen::Index n = 0; n < N; ++n) {
      auto& dig = digits[static_cast<std::size_t>(n)];
      if (++dig < levels) break;
      dig = 0;
    }
  }
  return best;
}

}  // namespace rismec
