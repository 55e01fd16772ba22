#pragma once

// Random-function ensembles: the average-case sensitivity of sign(T_rho f)
// for uniformly random f, and scans over random k-juntas that record
// (sens[f], sens[f_N*], err_f(f), err_f(f_N*)) per sample.
//
// Sample i always draws from master.substream(i); aggregation runs over the
// per-sample results in index order, so every number here is a function of
// the master seed alone.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "nrbl/core.hpp"
#include "nrbl/noise.hpp"
#include "nrbl/parallel.hpp"
#include "nrbl/rng.hpp"

namespace nrbl {

/// Every table bit an independent fair coin; 64 bits per draw.
inline BooleanFunction sample_random_function(int n, Stream& stream) {
  BooleanFunction f(n);
  const std::uint64_t mask = f.word_mask();
  for (auto& w : f.words()) w = stream.next() & mask;
  return f;
}

inline JuntaSpec sample_random_junta(int n_total, int k, Stream& stream) {
  if (n_total < 0 || n_total > kMaxAmbientWidth) throw Error("ambient width outside [0, 64]");
  if (k < 0 || k > n_total) throw Error("junta size must satisfy 0 <= k <= n_total");
  require_arity(k);
  JuntaSpec spec;
  spec.n_total = n_total;
  spec.subset = random_subset(n_total, k, stream);
  spec.inner = sample_random_function(k, stream);
  return spec;
}

/// Pr(a1 <= 0, a2 <= 0) for standard bivariate normals with correlation r.
inline double sheppard_quadrant(double r) {
  if (!(r >= -1.0 && r <= 1.0)) throw Error("correlation must lie in [-1, 1]");
  return 0.5 * (1.0 - std::acos(r) / std::numbers::pi);
}

/// (1 - rho^2) / (1 + rho^2); equals 2p(1-p) / (p^2 + (1-p)^2) for rho = 1 - 2p.
inline double neighbour_correlation(double rho) { return (1.0 - rho * rho) / (1.0 + rho * rho); }

/// Large-n average sensitivity of sign(T_rho f) over random f: (n / pi) arccos r(rho).
inline double prop2_theory(int n, double p) {
  const double rho = 1.0 - 2.0 * p;
  return n * std::acos(neighbour_correlation(rho)) / std::numbers::pi;
}

struct Prop2Estimate {
  int n = 0;
  double p = 0.0;
  std::size_t samples = 0;
  double mean_sens_fnstar = 0.0;
  double std_err = 0.0;
  double theory = 0.0;
  double mean_sens_f = 0.0;
  double std_err_f = 0.0;
  /// Samples where sens[f_N*] > sens[f].
  std::size_t violations = 0;
};

inline constexpr int kMaxProp2Arity = 14;

namespace detail {

struct MeanAndError {
  double mean = 0.0;
  double std_err = 0.0;
};

inline MeanAndError mean_and_error(std::span<const double> xs) {
  MeanAndError out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  out.std_err = std::sqrt(var / static_cast<double>(xs.size()));
  return out;
}

}  // namespace detail

inline Prop2Estimate prop2_monte_carlo(int n, double p, std::size_t samples,
                                       const Stream& master,
                                       unsigned workers = default_workers()) {
  require_arity(n, 1, kMaxProp2Arity);
  const NoiseModel noise = NoiseModel::iid(p);
  if (samples == 0) throw Error("prop2 needs at least one sample");

  std::vector<double> sens_f(samples);
  std::vector<double> sens_fnstar(samples);
  parallel_for(0, samples, workers, [&](std::size_t i) {
    Stream stream = master.substream(i);
    const BooleanFunction f = sample_random_function(n, stream);
    sens_f[i] = total_sensitivity(f);
    sens_fnstar[i] = total_sensitivity(optimal_predictor(f, noise));
  });

  Prop2Estimate est;
  est.n = n;
  est.p = p;
  est.samples = samples;
  const auto fnstar_stats = detail::mean_and_error(sens_fnstar);
  const auto f_stats = detail::mean_and_error(sens_f);
  est.mean_sens_fnstar = fnstar_stats.mean;
  est.std_err = fnstar_stats.std_err;
  est.mean_sens_f = f_stats.mean;
  est.std_err_f = f_stats.std_err;
  est.theory = prop2_theory(n, p);
  for (std::size_t i = 0; i < samples; ++i) est.violations += sens_fnstar[i] > sens_f[i];
  return est;
}

/// Bitflip grid from which each scan record draws its rate.
inline const std::vector<double>& junta_scan_default_rates() {
  static const std::vector<double> grid = {0.0,  0.05, 0.08, 0.10, 0.13, 0.16, 0.18,
                                           0.2,  0.22, 0.24, 0.26, 0.28, 0.3};
  return grid;
}

struct ScatterRecord {
  std::uint64_t function_id = 0;
  int k = 0;
  double p = 0.0;
  double sens_f = 0.0;
  double sens_fnstar = 0.0;
  double err_f_f = 0.0;
  double err_f_fnstar = 0.0;
  JuntaSpec junta;
};

/// Exact analytics for one junta. Coordinates outside the subset carry no
/// influence and their noise is irrelevant, so everything is computed on the
/// inner function; f_N* of the junta is the same junta over sign(T inner).
inline ScatterRecord analyze_junta(const JuntaSpec& junta, double p) {
  const NoiseModel noise = NoiseModel::iid(p);
  const BooleanFunction& f = junta.inner;
  const BooleanFunction fnstar = optimal_predictor(f, noise);
  ScatterRecord r;
  r.k = f.arity();
  r.p = p;
  r.sens_f = total_sensitivity(f);
  r.sens_fnstar = total_sensitivity(fnstar);
  r.err_f_f = noisy_error(f, f, noise);
  r.err_f_fnstar = noisy_error(f, fnstar, noise);
  r.junta = junta;
  return r;
}

struct JuntaScanConfig {
  std::size_t count = 0;
  int n_total = 10;
  std::vector<int> k_choices = {5, 6, 7};
  std::vector<double> p_grid = junta_scan_default_rates();
};

/// Streams one record per sampled junta, in function_id order, to `sink`.
/// Records are produced in fixed-size batches so memory stays bounded.
inline void junta_scan(const JuntaScanConfig& config, const Stream& master,
                       const std::function<void(const ScatterRecord&)>& sink,
                       unsigned workers = default_workers()) {
  if (config.k_choices.empty() || config.p_grid.empty()) throw Error("empty k or p grid");
  for (int k : config.k_choices) {
    if (k < 1 || k > config.n_total || k > kMaxExactArity) throw Error("invalid junta size");
  }
  for (double p : config.p_grid) NoiseModel::iid(p);
  if (config.n_total > kMaxAmbientWidth) throw Error("ambient width outside [0, 64]");

  constexpr std::size_t kBatch = 256;
  std::vector<ScatterRecord> batch;
  for (std::size_t start = 0; start < config.count; start += kBatch) {
    const std::size_t stop = std::min(config.count, start + kBatch);
    batch.assign(stop - start, ScatterRecord{});
    parallel_for(start, stop, workers, [&](std::size_t i) {
      Stream stream = master.substream(i);
      const int k = config.k_choices[stream.uniform_below(config.k_choices.size())];
      const double p = config.p_grid[stream.uniform_below(config.p_grid.size())];
      ScatterRecord r = analyze_junta(sample_random_junta(config.n_total, k, stream), p);
      r.function_id = i;
      batch[i - start] = std::move(r);
    });
    for (const auto& r : batch) sink(r);
  }
}

}  // namespace nrbl
