#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rismec/params.hpp"
#include "rismec/rng.hpp"

namespace rismec {

inline constexpr double kInfLatency = std::numeric_limits<double>::infinity();

// Per-device task sizes in bits, uniform in [task_bits_min, task_bits_max].
inline std::vector<double> draw_tasks(const SystemParams& params, RngStream& rng) {
  std::vector<double> tasks(static_cast<std::size_t>(params.K));
  for (auto& bits : tasks) bits = rng.uniform(params.task_bits_min, params.task_bits_max);
  return tasks;
}

// Split of each task between local and edge computing plus the edge CPU
// shares, and the worst-device latency the split achieves.
struct AllocationPlan {
  std::vector<double> offload_bits; // l_k
  std::vector<double> edge_freq;    // f_k^e, Hz
  double latency = 0.0;             // seconds
};

struct UnservableDevice : std::runtime_error {
  explicit UnservableDevice(int device_index)
      : std::runtime_error("device " + std::to_string(device_index) +
                           " is unservable: no local CPU and zero offloading rate"),
        device(device_index) {}
  int device;
};

// max over devices of max(local time, offload time + edge compute time).
// Offloading with zero rate or zero edge share yields the infinite sentinel.
inline double latency_of(const AllocationPlan& plan, const std::vector<double>& rates,
                         const std::vector<double>& tasks, const SystemParams& params) {
  const std::size_t K = tasks.size();
  if (plan.offload_bits.size() != K || plan.edge_freq.size() != K || rates.size() != K) {
    throw std::invalid_argument("latency_of: dimension mismatch");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double l = plan.offload_bits[k];
    if (l < 0.0 || l > tasks[k]) throw std::invalid_argument("latency_of: offload_bits out of [0, L]");
    const double local_bits = tasks[k] - l;
    double local_time = 0.0;
    if (local_bits > 0.0) {
      local_time = (params.f_local > 0.0)
                       ? params.cycles_per_bit_local * local_bits / params.f_local
                       : kInfLatency;
    }
    double remote_time = 0.0;
    if (l > 0.0) {
      const double offload_time = (rates[k] > 0.0) ? l / rates[k] : kInfLatency;
      const double edge_time =
          (plan.edge_freq[k] > 0.0) ? params.cycles_per_bit_edge * l / plan.edge_freq[k] : kInfLatency;
      remote_time = offload_time + edge_time;
    }
    worst = std::max(worst, std::max(local_time, remote_time));
  }
  return worst;
}

struct FeasibilityResult {
  bool feasible = false;
  std::vector<double> offload_bits; // minimal offload meeting the deadline locally
  std::vector<double> edge_freq;    // required edge clock per device
  double edge_total = 0.0;
};

// Deadline test: device k must offload at least
//   l_k* = max(0, L_k - f_local T / cycles_local)
// bits (offloading more only raises the required edge clock at fixed T).
// Feasible iff every l_k* can be delivered within T and the required edge
// clocks fit the budget.
inline FeasibilityResult feasible(double deadline, const std::vector<double>& rates,
                                  const std::vector<double>& tasks, const SystemParams& params) {
  if (deadline < 0.0) throw std::invalid_argument("feasible: deadline must be >= 0");
  if (rates.size() != tasks.size()) throw std::invalid_argument("feasible: dimension mismatch");
  const std::size_t K = tasks.size();

  FeasibilityResult res;
  res.feasible = true;
  res.offload_bits.assign(K, 0.0);
  res.edge_freq.assign(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const double local_capacity = params.f_local * deadline / params.cycles_per_bit_local;
    const double l_min = std::max(0.0, tasks[k] - local_capacity);
    res.offload_bits[k] = l_min;
    if (l_min <= 0.0) continue;
    const double offload_time = (rates[k] > 0.0) ? l_min / rates[k] : kInfLatency;
    if (offload_time >= deadline) {
      res.feasible = false;
      res.edge_freq[k] = kInfLatency;
      res.edge_total = kInfLatency;
      continue;
    }
    res.edge_freq[k] = params.cycles_per_bit_edge * l_min / (deadline - offload_time);
    res.edge_total += res.edge_freq[k];
  }
  if (res.edge_total > params.f_edge_max) res.feasible = false;
  return res;
}

// Minimizes the worst-device latency by bisection on the monotone deadline
// test. The returned plan is feasible and within tol (relative) of the
// optimum.
inline AllocationPlan min_latency_allocation(const std::vector<double>& rates,
                                             const std::vector<double>& tasks,
                                             const SystemParams& params, double tol = 1e-6) {
  if (!(tol > 0.0)) throw std::invalid_argument("min_latency_allocation: tol must be > 0");
  if (rates.size() != tasks.size()) {
    throw std::invalid_argument("min_latency_allocation: dimension mismatch");
  }
  const std::size_t K = tasks.size();
  for (std::size_t k = 0; k < K; ++k) {
    if (rates[k] < 0.0) throw std::invalid_argument("min_latency_allocation: negative rate");
  }

  AllocationPlan plan;
  plan.offload_bits.assign(K, 0.0);
  plan.edge_freq.assign(K, 0.0);
  if (std::all_of(tasks.begin(), tasks.end(), [](double b) { return b == 0.0; })) {
    plan.latency = 0.0;
    return plan;
  }

  // Finite upper bound: all-local completion, or full offload with an even
  // edge split when the devices have no local CPU.
  double hi = 0.0;
  if (params.f_local > 0.0) {
    for (std::size_t k = 0; k < K; ++k) {
      hi = std::max(hi, params.cycles_per_bit_local * tasks[k] / params.f_local);
    }
  } else {
    for (std::size_t k = 0; k < K; ++k) {
      if (tasks[k] > 0.0 && rates[k] == 0.0) throw UnservableDevice(static_cast<int>(k));
      if (tasks[k] > 0.0) {
        hi = std::max(hi, tasks[k] / rates[k] + params.cycles_per_bit_edge * tasks[k] *
                                                    static_cast<double>(K) / params.f_edge_max);
      }
    }
  }
  for (int guard = 0; guard < 128 && !feasible(hi, rates, tasks, params).feasible; ++guard) hi *= 2.0;

  double lo = 0.0;
  for (int it = 0; it < 200 && (hi - lo) > tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid, rates, tasks, params).feasible) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  const FeasibilityResult fin = feasible(hi, rates, tasks, params);
  plan.offload_bits = fin.offload_bits;
  plan.edge_freq = fin.edge_freq;
  plan.latency = latency_of(plan, rates, tasks, params);
  return plan;
}

namespace detail {

// Minimal worst-device latency for a fixed offload split, allocating edge
// clocks by the same closed form the deadline test uses. Exact up to the
// root-finder tolerance; infinity when the split cannot finish.
inline double fixed_offload_latency(const std::vector<double>& offload,
                                    const std::vector<double>& rates,
                                    const std::vector<double>& tasks, const SystemParams& params,
                                    std::vector<double>* edge_freq_out = nullptr) {
  const std::size_t K = tasks.size();
  double local_max = 0.0;
  double rate_floor = 0.0; // infimum deadline from offload transmission alone
  double cycle_sum = 0.0;
  bool any_offload = false;
  for (std::size_t k = 0; k < K; ++k) {
    const double local_bits = tasks[k] - offload[k];
    if (local_bits > 0.0) {
      if (params.f_local <= 0.0) return kInfLatency;
      local_max = std::max(local_max, params.cycles_per_bit_local * local_bits / params.f_local);
    }
    if (offload[k] > 0.0) {
      if (rates[k] <= 0.0) return kInfLatency;
      any_offload = true;
      rate_floor = std::max(rate_floor, offload[k] / rates[k]);
      cycle_sum += params.cycles_per_bit_edge * offload[k];
    }
  }
  if (edge_freq_out) edge_freq_out->assign(K, 0.0);
  if (!any_offload) return local_max;

  const auto required_edge_total = [&](double deadline) {
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      if (offload[k] > 0.0) {
        total += params.cycles_per_bit_edge * offload[k] / (deadline - offload[k] / rates[k]);
      }
    }
    return total;
  };

  // required_edge_total is strictly decreasing on (rate_floor, inf) and is
  // already within budget at hi by construction.
  double deadline = 0.0;
  if (local_max > rate_floor && required_edge_total(local_max) <= params.f_edge_max) {
    deadline = local_max;
  } else {
    double lo = rate_floor;
    double hi = rate_floor + cycle_sum / params.f_edge_max;
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (required_edge_total(mid) <= params.f_edge_max) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    deadline = hi;
  }
  if (edge_freq_out) {
    for (std::size_t k = 0; k < K; ++k) {
      if (offload[k] > 0.0) {
        (*edge_freq_out)[k] =
            params.cycles_per_bit_edge * offload[k] / (deadline - offload[k] / rates[k]);
      }
    }
  }
  return deadline;
}

}  // namespace detail

// Brute-force reference: exhaustive search over per-device offload grids,
// with the edge budget allocated optimally for every candidate. Each
// refinement round zooms the grid onto the incumbent. Small-instance
// oracle only (K <= 3, grid_points <= 200).
inline AllocationPlan grid_alloc_oracle(const std::vector<double>& rates,
                                        const std::vector<double>& tasks,
                                        const SystemParams& params, int grid_points,
                                        int refine_rounds = 4) {
  const std::size_t K = tasks.size();
  if (K > 3) throw std::invalid_argument("grid_alloc_oracle: K must be <= 3");
  if (grid_points < 2 || grid_points > 200) {
    throw std::invalid_argument("grid_alloc_oracle: grid_points must be in [2, 200]");
  }
  if (rates.size() != K) throw std::invalid_argument("grid_alloc_oracle: dimension mismatch");

  std::vector<double> lo(K, 0.0), hi(tasks), best(K, 0.0);
  double best_latency = kInfLatency;

  for (int round = 0; round <= refine_rounds; ++round) {
    std::vector<int> digits(K, 0);
    std::vector<double> candidate(K, 0.0);
    bool carry_done = false;
    while (!carry_done) {
      for (std::size_t k = 0; k < K; ++k) {
        const double step = (hi[k] - lo[k]) / (grid_points - 1);
        candidate[k] = (hi[k] == lo[k]) ? lo[k] : lo[k] + step * digits[k];
      }
      const double latency = detail::fixed_offload_latency(candidate, rates, tasks, params);
      if (latency < best_latency) {
        best_latency = latency;
        best = candidate;
      }
      carry_done = true;
      for (std::size_t k = 0; k < K; ++k) {
        if (++digits[k] < grid_points) {
          carry_done = false;
          break;
        }
        digits[k] = 0;
      }
    }
    // zoom onto the incumbent for the next round
    for (std::size_t k = 0; k < K; ++k) {
      const double step = (hi[k] - lo[k]) / (grid_points - 1);
      lo[k] = std::max(0.0, best[k] - 2.0 * step);
      hi[k] = std::min(tasks[k], best[k] + 2.0 * step);
    }
  }

  AllocationPlan plan;
  plan.offload_bits = best;
  plan.edge_freq.assign(K, 0.0);
  detail::fixed_offload_latency(best, rates, tasks, params, &plan.edge_freq);
  plan.latency = latency_of(plan, rates, tasks, params);
  return plan;
}

}  // namespace rismec
