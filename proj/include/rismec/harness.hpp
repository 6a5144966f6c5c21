#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rismec/allocator.hpp"
#include "rismec/channel.hpp"
#include "rismec/geometry.hpp"
#include "rismec/mud.hpp"
#include "rismec/params.hpp"
#include "rismec/phase_opt.hpp"
#include "rismec/rng.hpp"

namespace rismec {

enum class Scheme { without_ris, random_phase, optimized };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::without_ris: return "without_ris";
    case Scheme::random_phase: return "random_phase";
    case Scheme::optimized: return "optimized";
  }
  return "?";
}

inline Scheme parse_scheme(const std::string& name) {
  if (name == "without_ris") return Scheme::without_ris;
  if (name == "random_phase") return Scheme::random_phase;
  if (name == "optimized") return Scheme::optimized;
  throw std::invalid_argument("unknown scheme: " + name);
}

struct ExperimentConfig {
  SystemParams params;
  std::vector<Scheme> schemes = {Scheme::without_ris, Scheme::random_phase, Scheme::optimized};
  std::string sweep_axis = "n";       // "n" (RIS elements) or "d" (cluster-AP distance, m)
  std::vector<double> sweep_values;   // empty: the single value taken from params
  int trials = 100;
  std::uint64_t seed = 1;
  double outer_tol = 1e-3;            // alternating loop, relative latency improvement
  int outer_max_iter = 20;
  double mu = 1.0;                    // interference penalty weight of the phase objective
  double mm_tol = 1e-4;
  int mm_max_iter = 200;
  double alloc_tol = 1e-6;
  std::string out_path = "results.csv";
  int threads = 1;

  void validate() const {
    params.validate();
    if (sweep_axis != "n" && sweep_axis != "d") {
      throw std::invalid_argument("ExperimentConfig: sweep axis must be 'n' or 'd'");
    }
    if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
    if (!(outer_tol > 0.0)) throw std::invalid_argument("ExperimentConfig: outer_tol must be > 0");
    if (outer_max_iter < 1) throw std::invalid_argument("ExperimentConfig: outer_max_iter must be >= 1");
    if (mu < 0.0) throw std::invalid_argument("ExperimentConfig: mu must be >= 0");
    if (schemes.empty()) throw std::invalid_argument("ExperimentConfig: no schemes selected");
    if (threads < 1) throw std::invalid_argument("ExperimentConfig: threads must be >= 1");
    for (double v : sweep_values) {
      SystemParams p = params;
      apply_sweep(p, sweep_axis, v);
      p.validate();
    }
  }

  static void apply_sweep(SystemParams& p, const std::string& axis, double value) {
    if (axis == "n") {
      p.N = static_cast<int>(std::lround(value));
    } else {
      p.d = value;
    }
  }

  std::vector<double> resolved_sweep_values() const {
    if (!sweep_values.empty()) return sweep_values;
    return {sweep_axis == "n" ? static_cast<double>(params.N) : params.d};
  }
};

struct TrialResult {
  Scheme scheme = Scheme::without_ris;
  double sweep_value = 0.0;
  int trial = 0;
  double latency_s = 0.0;
  int outer_iters = 0;
  double objective = 0.0;     // phase surrogate g at the final detector/phases
  double mean_rate_bps = 0.0;
  bool failed = false;
  std::string error;
  std::vector<double> latency_trace; // best latency seen after each outer step
};

namespace detail {

struct PipelineEval {
  double latency = 0.0;
  Eigen::MatrixXcd W;
  RateVector rates;
};

inline PipelineEval evaluate_phases(const ChannelRealization& chan, const PhaseVector& theta,
                                    const std::vector<double>& tasks, const SystemParams& p,
                                    double alloc_tol) {
  PipelineEval ev;
  const Eigen::MatrixXcd H = effective_channel(chan, theta);
  ev.W = mmse_weights(H, p.tx_power, p.noise_power);
  ev.rates = detector_rates(H, ev.W, p.tx_power, p.noise_power, p.bandwidth);
  const std::vector<double> rates(ev.rates.rate_bps.data(),
                                  ev.rates.rate_bps.data() + ev.rates.rate_bps.size());
  ev.latency = min_latency_allocation(rates, tasks, p, alloc_tol).latency;
  return ev;
}

}  // namespace detail

// One (scheme, sweep value, trial) cell. Geometry, channels, and tasks come
// from substreams keyed without the scheme, so all schemes compare on
// identical draws.
inline TrialResult run_trial(const ExperimentConfig& cfg, Scheme scheme, double sweep_value,
                             int trial) {
  SystemParams p = cfg.params;
  ExperimentConfig::apply_sweep(p, cfg.sweep_axis, sweep_value);
  p.validate();

  TrialResult row;
  row.scheme = scheme;
  row.sweep_value = sweep_value;
  row.trial = trial;

  const auto t64 = static_cast<std::uint64_t>(trial);
  auto geom_rng = substream(cfg.seed, "geometry", sweep_value, t64);
  const Geometry geom = place_nodes(p, geom_rng);
  auto chan_rng = substream(cfg.seed, "channels", sweep_value, t64);
  const ChannelRealization chan = draw_channels(geom, p, chan_rng);
  auto task_rng = substream(cfg.seed, "tasks", sweep_value, t64);
  const std::vector<double> tasks = draw_tasks(p, task_rng);

  auto evaluate = [&](const PhaseVector& theta) {
    return detail::evaluate_phases(chan, theta, tasks, p, cfg.alloc_tol);
  };

  PhaseVector theta;
  detail::PipelineEval best;

  switch (scheme) {
    case Scheme::without_ris: {
      theta = PhaseVector::Zero(p.N); // reflection path disabled
      best = evaluate(theta);
      row.latency_trace.push_back(best.latency);
      break;
    }
    case Scheme::random_phase: {
      auto phase_rng = substream(cfg.seed, "phases", sweep_value, t64);
      theta = random_phases(p.N, phase_rng);
      best = evaluate(theta);
      row.latency_trace.push_back(best.latency);
      break;
    }
    case Scheme::optimized: {
      // Evaluated candidates include the same random draw the random_phase
      // scheme uses, so the optimized latency never exceeds it on a shared
      // channel realization.
      auto phase_rng = substream(cfg.seed, "phases", sweep_value, t64);
      const PhaseVector theta_rand = random_phases(p.N, phase_rng);
      detail::PipelineEval ev = evaluate(theta_rand);
      best = ev;
      theta = theta_rand;

      PhaseVector cur = all_ones_phases(p.N);
      ev = evaluate(cur);
      if (ev.latency < best.latency) {
        best = ev;
        theta = cur;
      }
      row.latency_trace.push_back(best.latency);

      double prev_best = best.latency;
      for (int it = 1; it <= cfg.outer_max_iter; ++it) {
        const QuadraticModel model = build_quadratic(chan, ev.W, p.tx_power, cfg.mu);
        const MmResult mm = mm_ascend(model, cur, cfg.mm_tol, cfg.mm_max_iter);
        cur = mm.theta;
        ev = evaluate(cur);
        row.outer_iters = it;
        if (ev.latency < best.latency) {
          best = ev;
          theta = cur;
        }
        row.latency_trace.push_back(best.latency);
        const double improvement = prev_best - best.latency;
        if (improvement <= cfg.outer_tol * prev_best) break;
        prev_best = best.latency;
      }
      break;
    }
  }

  row.latency_s = best.latency;
  row.mean_rate_bps = best.rates.rate_bps.mean();
  row.objective = build_quadratic(chan, best.W, p.tx_power, cfg.mu).evaluate(theta);
  return row;
}

// Cartesian product of schemes x sweep values x trials, rows in
// deterministic (scheme, sweep value, trial) order regardless of the
// worker count. Failed trials are flagged and the run continues.
inline std::vector<TrialResult> sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<double> values = cfg.resolved_sweep_values();

  struct Cell {
    Scheme scheme;
    double value;
    int trial;
  };
  std::vector<Cell> cells;
  cells.reserve(cfg.schemes.size() * values.size() * static_cast<std::size_t>(cfg.trials));
  for (Scheme s : cfg.schemes) {
    for (double v : values) {
      for (int t = 0; t < cfg.trials; ++t) cells.push_back({s, v, t});
    }
  }

  std::vector<TrialResult> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& c = cells[i];
      try {
        rows[i] = run_trial(cfg, c.scheme, c.value, c.trial);
      } catch (const std::exception& e) {
        TrialResult& row = rows[i];
        row.scheme = c.scheme;
        row.sweep_value = c.value;
        row.trial = c.trial;
        row.failed = true;
        row.latency_s = kInfLatency;
        row.error = e.what();
      }
    }
  };

  const int n_threads = std::min<int>(cfg.threads, static_cast<int>(cells.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

struct SummaryRow {
  Scheme scheme = Scheme::without_ris;
  double sweep_value = 0.0;
  int trials = 0;
  double mean_latency_ms = 0.0;
  double ci95_half_width_ms = 0.0;
};

// Per-(scheme, sweep value) mean latency with a 95% normal-approximation
// half-width from the unbiased sample variance.
inline std::vector<SummaryRow> summarize(const std::vector<TrialResult>& rows) {
  std::vector<SummaryRow> out;
  auto find = [&out](Scheme s, double v) -> SummaryRow* {
    for (auto& r : out) {
      if (r.scheme == s && r.sweep_value == v) return &r;
    }
    return nullptr;
  };
  // first pass: means
  for (const auto& row : rows) {
    SummaryRow* s = find(row.scheme, row.sweep_value);
    if (s == nullptr) {
      out.push_back({row.scheme, row.sweep_value, 0, 0.0, 0.0});
      s = &out.back();
    }
    s->trials += 1;
    s->mean_latency_ms += row.latency_s * 1e3;
  }
  for (auto& s : out) s.mean_latency_ms /= s.trials;
  // second pass: unbiased variances
  for (const auto& row : rows) {
    SummaryRow* s = find(row.scheme, row.sweep_value);
    const double dev = row.latency_s * 1e3 - s->mean_latency_ms;
    s->ci95_half_width_ms += dev * dev;
  }
  for (auto& s : out) {
    if (s.trials > 1) {
      const double var = s.ci95_half_width_ms / (s.trials - 1);
      s.ci95_half_width_ms = 1.96 * std::sqrt(var / s.trials);
    } else {
      s.ci95_half_width_ms = 0.0;
    }
  }
  return out;
}

namespace detail {

inline std::string fmt9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

}  // namespace detail

inline std::string summary_path_for(const std::string& path) {
  const auto dot = path.rfind('.');
  const auto slash = path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + "_summary";
  }
  return path.substr(0, dot) + "_summary" + path.substr(dot);
}

// Writes the per-trial table and the per-(scheme, sweep value) summary next
// to it. Identical configs and seeds produce byte-identical files.
inline void emit_results(const std::vector<TrialResult>& rows, const std::string& sweep_axis,
                         const std::string& path) {
  if (rows.empty()) throw std::runtime_error("emit_results: empty result table");

  std::string raw = "scheme,sweep_axis,sweep_value,trial,latency_ms,outer_iters,objective,mean_rate_bps\n";
  for (const auto& r : rows) {
    raw += scheme_name(r.scheme);
    raw += ',';
    raw += sweep_axis;
    raw += ',';
    raw += detail::fmt9(r.sweep_value);
    raw += ',';
    raw += std::to_string(r.trial);
    raw += ',';
    raw += detail::fmt9(r.latency_s * 1e3);
    raw += ',';
    raw += std::to_string(r.outer_iters);
    raw += ',';
    raw += detail::fmt9(r.objective);
    raw += ',';
    raw += detail::fmt9(r.mean_rate_bps);
    raw += '\n';
  }

  std::string summary = "scheme,sweep_axis,sweep_value,trials,mean_latency_ms,ci95_half_width_ms\n";
  for (const auto& s : summarize(rows)) {
    summary += scheme_name(s.scheme);
    summary += ',';
    summary += sweep_axis;
    summary += ',';
    summary += detail::fmt9(s.sweep_value);
    summary += ',';
    summary += std::to_string(s.trials);
    summary += ',';
    summary += detail::fmt9(s.mean_latency_ms);
    summary += ',';
    summary += detail::fmt9(s.ci95_half_width_ms);
    summary += '\n';
  }

  std::ofstream raw_file(path, std::ios::binary | std::ios::trunc);
  if (!raw_file) throw std::runtime_error("emit_results: cannot write " + path);
  raw_file << raw;
  raw_file.close();
  if (!raw_file) throw std::runtime_error("emit_results: cannot write " + path);

  const std::string spath = summary_path_for(path);
  std::ofstream summary_file(spath, std::ios::binary | std::ios::trunc);
  if (!summary_file) throw std::runtime_error("emit_results: cannot write " + spath);
  summary_file << summary;
  summary_file.close();
  if (!summary_file) throw std::runtime_error("emit_results: cannot write " + spath);
}

}  // namespace rismec
