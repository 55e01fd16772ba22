#pragma once

// Search over weight-based (symmetric) functions for traps: f whose optimal
// noisy predictor nearly ties it in noisy error but has much smaller
// sensitivity.
//
// For symmetric f and iid noise, T f is symmetric too, so all analytics run
// on the (n + 1)-entry weight profile with the weight-transition kernel
// K[w][w'] = Pr(wt(Z) = w' | wt(X) = w).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "nrbl/core.hpp"
#include "nrbl/datagen.hpp"
#include "nrbl/noise.hpp"
#include "nrbl/parallel.hpp"

namespace nrbl {

inline constexpr double kDefaultMaxErrGap = 0.01;
// 0.5 would exclude the reference instance (n = 8, p = 0.2, s = 000110000),
// whose exact ratio is 2.625 / 3.5 = 0.75.
inline constexpr double kDefaultMaxSensRatio = 0.8;
inline constexpr int kMaxTrapArity = 16;

namespace detail {

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

}  // namespace detail

class WeightKernel {
 public:
  WeightKernel(int n, double p) : n_(n), p_(p), k_((n + 1) * (n + 1), 0.0), pi_(n + 1) {
    require_arity(n, 0, kMaxTrapArity);
    NoiseModel::iid(p);
    std::vector<double> pow_p(n + 1, 1.0);
    std::vector<double> pow_q(n + 1, 1.0);
    for (int i = 1; i <= n; ++i) {
      pow_p[i] = pow_p[i - 1] * p;
      pow_q[i] = pow_q[i - 1] * (1.0 - p);
    }
    for (int w = 0; w <= n; ++w) {
      pi_[w] = std::ldexp(detail::binomial(n, w), -n);
      for (int a = 0; a <= w; ++a) {
        const double down = detail::binomial(w, a) * pow_p[a] * pow_q[w - a];
        for (int b = 0; b <= n - w; ++b) {
          const double up = detail::binomial(n - w, b) * pow_p[b] * pow_q[n - w - b];
          k_[w * (n + 1) + (w - a + b)] += down * up;
        }
      }
    }
  }

  [[nodiscard]] int arity() const noexcept { return n_; }
  [[nodiscard]] double rate() const noexcept { return p_; }
  [[nodiscard]] double operator()(int w, int w2) const { return k_[w * (n_ + 1) + w2]; }
  /// Pr(wt(X) = w) for uniform X.
  [[nodiscard]] double weight_mass(int w) const { return pi_[w]; }

  /// (T f) on each weight class, for f given by its 0/1 profile.
  [[nodiscard]] std::vector<double> apply(const std::vector<std::uint8_t>& profile) const {
    std::vector<double> t(n_ + 1, 0.0);
    for (int w = 0; w <= n_; ++w) {
      double s = 0.0;
      for (int w2 = 0; w2 <= n_; ++w2) s += (*this)(w, w2) * to_sign(profile[w2]);
      t[w] = s;
    }
    return t;
  }

 private:
  int n_;
  double p_;
  std::vector<double> k_;
  std::vector<double> pi_;
};

/// err_f(g) for symmetric f, g.
inline double weight_noisy_error(const WeightKernel& kernel, const std::vector<std::uint8_t>& f,
                                 const std::vector<std::uint8_t>& g) {
  const std::vector<double> tg = kernel.apply(g);
  double corr = 0.0;
  for (int w = 0; w <= kernel.arity(); ++w) corr += kernel.weight_mass(w) * to_sign(f[w]) * tg[w];
  return std::clamp((1.0 - corr) / 2.0, 0.0, 1.0);
}

/// sens[f] for symmetric f: inputs of weight w have w down-neighbours of
/// weight w - 1 and n - w up-neighbours of weight w + 1.
inline double weight_sensitivity(const std::vector<std::uint8_t>& profile) {
  const int n = static_cast<int>(profile.size()) - 1;
  double total = 0.0;
  for (int w = 0; w <= n; ++w) {
    int s = 0;
    if (w > 0 && profile[w] != profile[w - 1]) s += w;
    if (w < n && profile[w] != profile[w + 1]) s += n - w;
    total += std::ldexp(detail::binomial(n, w), -n) * s;
  }
  return total;
}

inline std::vector<std::uint8_t> weight_optimal_predictor(const WeightKernel& kernel,
                                                          const std::vector<std::uint8_t>& f) {
  const std::vector<double> t = kernel.apply(f);
  std::vector<std::uint8_t> g(t.size());
  for (std::size_t w = 0; w < t.size(); ++w) g[w] = t[w] < -kTieTolerance;
  return g;
}

struct TrapCandidate {
  int n = 0;
  double p = 0.0;
  std::string s;
  std::string fnstar;  // profile of f_N*
  double err_f = 0.0;
  double err_fnstar = 0.0;
  double sens_f = 0.0;
  double sens_fnstar = 0.0;
  double err_gap = 0.0;     // err_f - err_fnstar
  double sens_ratio = 0.0;  // sens_fnstar / sens_f; 1 when both vanish
};

inline TrapCandidate evaluate_weight_function(const WeightKernel& kernel, const WeightFunction& wf) {
  if (wf.n != kernel.arity() || wf.profile.size() != static_cast<std::size_t>(wf.n) + 1) {
    throw Error("weight profile does not match kernel arity");
  }
  const auto fnstar = weight_optimal_predictor(kernel, wf.profile);
  TrapCandidate c;
  c.n = wf.n;
  c.p = kernel.rate();
  c.s = wf.to_string();
  c.fnstar = WeightFunction{wf.n, fnstar}.to_string();
  c.err_f = weight_noisy_error(kernel, wf.profile, wf.profile);
  c.err_fnstar = weight_noisy_error(kernel, wf.profile, fnstar);
  c.sens_f = weight_sensitivity(wf.profile);
  c.sens_fnstar = weight_sensitivity(fnstar);
  // f_N* is optimal, so a negative gap can only be rounding.
  c.err_gap = std::max(0.0, c.err_f - c.err_fnstar);
  c.sens_ratio = c.sens_f > 0.0 ? c.sens_fnstar / c.sens_f : 1.0;
  return c;
}

inline TrapCandidate evaluate_weight_function(const WeightFunction& wf, double p) {
  return evaluate_weight_function(WeightKernel(wf.n, p), wf);
}

struct TrapSearchConfig {
  std::vector<int> n_grid = {4, 5, 6, 7, 8};
  std::vector<double> p_grid = {0.2, 0.22, 0.24, 0.26, 0.28, 0.30};
  double max_err_gap = kDefaultMaxErrGap;
  double max_sens_ratio = kDefaultMaxSensRatio;
};

/// Every weight function on the grid passing both thresholds, ordered by
/// (err_gap, sens_ratio, n, p, s).
inline std::vector<TrapCandidate> trap_search(const TrapSearchConfig& config,
                                              unsigned workers = default_workers()) {
  if (config.n_grid.empty() || config.p_grid.empty()) throw Error("trap search grids are empty");
  for (int n : config.n_grid) require_arity(n, 1, kMaxTrapArity);

  std::vector<TrapCandidate> found;
  for (int n : config.n_grid) {
    for (double p : config.p_grid) {
      const WeightKernel kernel(n, p);
      const std::size_t count = std::size_t{1} << (n + 1);
      std::vector<TrapCandidate> all(count);
      std::vector<std::uint8_t> keep(count, 0);
      parallel_for(0, count, workers, [&](std::size_t code) {
        WeightFunction wf{n, std::vector<std::uint8_t>(n + 1)};
        // Lexicographic order of s: s[0] is the most significant digit.
        for (int w = 0; w <= n; ++w) wf.profile[w] = (code >> (n - w)) & 1;
        all[code] = evaluate_weight_function(kernel, wf);
        keep[code] = all[code].err_gap <= config.max_err_gap &&
                     all[code].sens_ratio <= config.max_sens_ratio;
      });
      for (std::size_t code = 0; code < count; ++code) {
        if (keep[code]) found.push_back(std::move(all[code]));
      }
    }
  }
  std::ranges::stable_sort(found, [](const TrapCandidate& a, const TrapCandidate& b) {
    return std::tie(a.err_gap, a.sens_ratio, a.n, a.p, a.s) <
           std::tie(b.err_gap, b.sens_ratio, b.n, b.p, b.s);
  });
  return found;
}

struct VettingResult {
  double lookup_train_acc = 0.0;
  double lookup_val_acc = 0.0;
  double optimal_acc = 0.0;  // 1 - err_f(f_N*)
  double target_acc = 0.0;   // 1 - err_f(f)
};

/// Fits the majority-vote lookup table on a noisy training sample of the
/// candidate and scores it on that sample and on a noisy validation sample.
inline VettingResult finite_sample_vetting(const TrapCandidate& candidate, std::size_t n_train,
                                           std::size_t n_val, std::uint64_t seed,
                                           unsigned workers = default_workers()) {
  if (n_train == 0 || n_val == 0) throw Error("vetting needs non-empty train and val sets");
  const WeightFunction wf = WeightFunction::from_string(candidate.s);
  const JuntaSpec f = JuntaSpec::identity(expand_weight_function(wf));
  const GeneratedData data = generate(f, n_train, n_val, candidate.p, seed, workers);
  const LookupTable table = lookup_table_baseline(data.train_noisy);
  VettingResult r;
  r.lookup_train_acc = 1.0 - empirical_error(data.train_noisy, table);
  r.lookup_val_acc = 1.0 - empirical_error(data.val_noisy, table);
  r.optimal_acc = 1.0 - candidate.err_fnstar;
  r.target_acc = 1.0 - candidate.err_f;
  return r;
}

}  // namespace nrbl
