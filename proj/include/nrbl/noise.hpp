#pragma once

// Feature-noise channels Z = X xor E on uniform X, and the exact quantities
// they induce: the noise operator (T f)(x) = E[f(Z) | X = x], the Bayes-optimal
// noisy predictor sign(T f), noisy generalization error, sensitivity,
// next-bit conditional entropy and the Feder/Fano error bounds.
//
// Everything here is a closed-form sum over the truth table or spectrum; no
// sampling happens in this header.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nrbl/core.hpp"
#include "nrbl/fourier.hpp"

namespace nrbl {

/// |T f(x)| at or below this rounds to bit 0 in sign(T f). Must stay below
/// 1e-12: parity_12 at p = 0.45 has |T f| = 0.1^12.
inline constexpr double kTieTolerance = 1e-13;

inline constexpr int kMaxGeneralNoiseArity = 14;

struct IidNoise {
  double p = 0.0;
};

struct IndependentNoise {
  std::vector<double> rates;
};

/// Explicit distribution p_E over flip patterns, indexed by bitmask.
struct GeneralNoise {
  std::vector<double> distribution;
};

class NoiseModel {
 public:
  using Variant = std::variant<IidNoise, IndependentNoise, GeneralNoise>;

  static NoiseModel iid(double p) {
    check_rate(p);
    return NoiseModel(IidNoise{p});
  }
  static NoiseModel from_correlation(double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw Error("correlation rho must lie in [0, 1]");
    return iid((1.0 - rho) / 2.0);
  }
  static NoiseModel independent(std::vector<double> rates) {
    for (double p : rates) check_rate(p);
    return NoiseModel(IndependentNoise{std::move(rates)});
  }
  static NoiseModel general(std::vector<double> distribution) {
    const std::size_t size = distribution.size();
    if (size == 0 || !std::has_single_bit(size)) {
      throw Error("noise distribution length must be a power of two");
    }
    if (std::countr_zero(size) > kMaxGeneralNoiseArity) {
      throw Error("general noise supports at most " + std::to_string(kMaxGeneralNoiseArity) +
                  " bits");
    }
    double total = 0.0;
    for (double q : distribution) {
      if (!(q >= 0.0)) throw Error("noise distribution has a negative or NaN entry");
      total += q;
    }
    if (std::abs(total - 1.0) > 1e-12) throw Error("noise distribution must sum to 1");
    return NoiseModel(GeneralNoise{std::move(distribution)});
  }

  [[nodiscard]] const Variant& variant() const noexcept { return model_; }
  [[nodiscard]] bool is_iid() const noexcept { return std::holds_alternative<IidNoise>(model_); }

  /// Bitflip rate of an iid model.
  [[nodiscard]] double rate() const {
    if (const auto* m = std::get_if<IidNoise>(&model_)) return m->p;
    throw Error("rate() requires an iid noise model");
  }

  /// Throws unless this model can act on n-bit inputs.
  void check_arity(int n) const {
    require_arity(n);
    std::visit(
        [n](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, IndependentNoise>) {
            if (static_cast<int>(m.rates.size()) != n) {
              throw Error("independent noise has " + std::to_string(m.rates.size()) +
                          " rates for a " + std::to_string(n) + "-bit function");
            }
          } else if constexpr (std::is_same_v<T, GeneralNoise>) {
            if (m.distribution.size() != (std::size_t{1} << n)) {
              throw Error("general noise distribution does not match arity");
            }
          }
        },
        model_);
  }

  /// Multiplier applied to f^(S): E_E[chi_S(E)] in the +-1 view.
  [[nodiscard]] std::vector<double> filter(int n) const {
    check_arity(n);
    return std::visit(
        [n](const auto& m) -> std::vector<double> {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, IidNoise>) {
            return iid_filter(n, 1.0 - 2.0 * m.p);
          } else if constexpr (std::is_same_v<T, IndependentNoise>) {
            std::vector<double> rhos;
            for (double p : m.rates) rhos.push_back(1.0 - 2.0 * p);
            return product_filter(rhos);
          } else {
            std::vector<double> f = m.distribution;
            walsh_hadamard_inplace(f);
            return f;
          }
        },
        model_);
  }

  /// p_E(e) for every flip pattern e on n bits.
  [[nodiscard]] std::vector<double> distribution(int n) const {
    check_arity(n);
    if (const auto* g = std::get_if<GeneralNoise>(&model_)) return g->distribution;
    std::vector<double> rates(static_cast<std::size_t>(n));
    if (const auto* m = std::get_if<IidNoise>(&model_)) {
      std::fill(rates.begin(), rates.end(), m->p);
    } else {
      rates = std::get<IndependentNoise>(model_).rates;
    }
    std::vector<double> dist(std::size_t{1} << n);
    for (std::size_t e = 0; e < dist.size(); ++e) {
      double q = 1.0;
      for (int i = 0; i < n; ++i) q *= ((e >> i) & 1) ? rates[i] : 1.0 - rates[i];
      dist[e] = q;
    }
    return dist;
  }

 private:
  explicit NoiseModel(Variant v) : model_(std::move(v)) {}

  static void check_rate(double p) {
    if (!(p >= 0.0 && p <= 0.5)) throw Error("bitflip rate must lie in [0, 0.5]");
  }

  Variant model_;
};

/// (T f)(x) for every x, computed as a Fourier filter.
inline std::vector<double> noise_operator(const BooleanFunction& f, const NoiseModel& noise) {
  const std::vector<double> filter = noise.filter(f.arity());
  return inverse_fwht_values(apply_noise_filter(fwht(f), filter));
}

/// Bit 1 exactly where the value is below -kTieTolerance.
inline BooleanFunction sign_table(int n, std::span<const double> values) {
  BooleanFunction g(n);
  for (std::uint64_t x = 0; x < values.size(); ++x) g.set(x, values[x] < -kTieTolerance);
  return g;
}

inline BooleanFunction optimal_predictor(const BooleanFunction& f, const NoiseModel& noise) {
  return sign_table(f.arity(), noise_operator(f, noise));
}

/// err_f(g) = Pr(g(Z) != f(X)) = (1 - sum_S filter[S] f^(S) g^(S)) / 2.
inline double noisy_error(const BooleanFunction& f, const BooleanFunction& g,
                          const NoiseModel& noise) {
  if (f.arity() != g.arity()) throw Error("arity mismatch between f and g");
  const std::vector<double> filter = noise.filter(f.arity());
  const FourierSpectrum fs = fwht(f);
  const FourierSpectrum gs = fwht(g);
  double correlation = 0.0;
  for (std::size_t s = 0; s < filter.size(); ++s) {
    correlation += filter[s] * fs.coeffs[s] * gs.coeffs[s];
  }
  return std::clamp((1.0 - correlation) / 2.0, 0.0, 1.0);
}

struct SensitivityProfile {
  double total = 0.0;
  std::vector<double> per_bit;       // Inf_i[f]
  std::vector<std::uint8_t> pointwise;  // s(f, x); empty unless requested
};

namespace detail {

inline constexpr std::uint64_t kLowHalfMasks[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0f0f0f0f0f0f0f0fULL,
    0x00ff00ff00ff00ffULL, 0x0000ffff0000ffffULL, 0x00000000ffffffffULL};

// Calls visit(word_index, diff_word, partner_word_index, partner_shift) for
// every word of "x where flipping coordinate i changes f", restricted to the
// half with x_i = 0.
template <class Visit>
void for_each_flip_difference(const BooleanFunction& f, int i, Visit&& visit) {
  const auto w = f.words();
  if (i < 6) {
    const int shift = 1 << i;
    for (std::size_t j = 0; j < w.size(); ++j) {
      visit(j, (w[j] ^ (w[j] >> shift)) & kLowHalfMasks[i], j, shift);
    }
  } else {
    const std::size_t stride = std::size_t{1} << (i - 6);
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (j & stride) continue;
      visit(j, w[j] ^ w[j + stride], j + stride, 0);
    }
  }
}

}  // namespace detail

/// Influences via XOR of shifted truth-table words. Pointwise sensitivities
/// s(f, x) are filled only when `with_pointwise` is set.
inline SensitivityProfile sensitivity(const BooleanFunction& f, bool with_pointwise = true) {
  const int n = f.arity();
  SensitivityProfile out;
  out.per_bit.assign(static_cast<std::size_t>(n), 0.0);
  if (with_pointwise) out.pointwise.assign(f.size(), 0);
  const double scale = std::ldexp(2.0, -n);
  for (int i = 0; i < n; ++i) {
    std::uint64_t pairs = 0;
    detail::for_each_flip_difference(
        f, i, [&](std::size_t j, std::uint64_t d, std::size_t partner, int shift) {
          pairs += std::popcount(d);
          if (!with_pointwise) return;
          for (std::uint64_t bits = d; bits != 0; bits &= bits - 1) {
            const std::uint64_t pos = static_cast<std::uint64_t>(std::countr_zero(bits));
            ++out.pointwise[(j << 6) | pos];
            ++out.pointwise[(partner << 6) | (pos + shift)];
          }
        });
    out.per_bit[i] = static_cast<double>(pairs) * scale;
  }
  out.total = std::accumulate(out.per_bit.begin(), out.per_bit.end(), 0.0);
  return out;
}

/// sens[f] = sum_i Inf_i[f], without the per-point table.
inline double total_sensitivity(const BooleanFunction& f) {
  std::uint64_t pairs = 0;
  for (int i = 0; i < f.arity(); ++i) {
    detail::for_each_flip_difference(
        f, i, [&](std::size_t, std::uint64_t d, std::size_t, int) { pairs += std::popcount(d); });
  }
  return static_cast<double>(pairs) * std::ldexp(2.0, -f.arity());
}

/// h2(q) in bits.
inline double binary_entropy(double q) {
  if (q <= 0.0 || q >= 1.0) return 0.0;
  return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

/// H(Y | Z) in bits for Y = f(X). The posterior of X given Z = z is
/// p_E(x xor z), so Pr(Y = 1 | Z = z) = (1 - (T f)(z)) / 2 for every model.
inline double conditional_entropy(const BooleanFunction& f, const NoiseModel& noise) {
  const std::vector<double> t = noise_operator(f, noise);
  double sum = 0.0;
  for (double v : t) sum += binary_entropy(std::clamp((1.0 - v) / 2.0, 0.0, 1.0));
  return sum / static_cast<double>(t.size());
}

/// Fano side: h2(l) + l log2(N - 1).
inline double feder_upper_entropy(double lambda, int alphabet) {
  return binary_entropy(lambda) + lambda * std::log2(static_cast<double>(alphabet - 1));
}

/// Piecewise-linear side: on [(k-1)/k, k/(k+1)] it is
/// a_k (l - (k-1)/k) + log2 k with a_k = k (k+1) log2((k+1)/k).
inline double feder_lower_entropy(double lambda, int alphabet) {
  for (int k = 1; k < alphabet; ++k) {
    const double lo = static_cast<double>(k - 1) / k;
    const double hi = static_cast<double>(k) / (k + 1);
    if (lambda <= hi || k == alphabet - 1) {
      const double slope = k * (k + 1.0) * std::log2((k + 1.0) / k);
      return slope * (lambda - lo) + std::log2(static_cast<double>(k));
    }
  }
  return 0.0;
}

struct FederBounds {
  double lower = 0.0;  // inverse of the Fano side
  double upper = 0.0;  // inverse of the piecewise-linear side
};

/// Error-probability interval implied by an entropy (bits) for an
/// alphabet of size N.
inline FederBounds feder_bounds(double entropy_bits, int alphabet = 2) {
  if (alphabet < 2) throw Error("alphabet size must be at least 2");
  const double max_entropy = std::log2(static_cast<double>(alphabet));
  if (!(entropy_bits >= -1e-12 && entropy_bits <= max_entropy + 1e-12)) {
    throw Error("entropy outside [0, log2 N]");
  }
  const double h = std::clamp(entropy_bits, 0.0, max_entropy);
  const double top = static_cast<double>(alphabet - 1) / alphabet;

  FederBounds b;
  double lo = 0.0;
  double hi = top;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (feder_upper_entropy(mid, alphabet) < h) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  b.lower = h <= 0.0 ? 0.0 : (h >= max_entropy ? top : 0.5 * (lo + hi));

  for (int k = 1; k < alphabet; ++k) {
    const double log_k = std::log2(static_cast<double>(k));
    const double log_k1 = std::log2(k + 1.0);
    if (h <= log_k1 || k == alphabet - 1) {
      const double slope = k * (k + 1.0) * std::log2((k + 1.0) / k);
      b.upper = static_cast<double>(k - 1) / k + (h - log_k) / slope;
      break;
    }
  }
  return b;
}

/// Pointwise sufficient condition f(z) (T f)(z) >= 0 for all z.
inline bool is_self_predicting(const BooleanFunction& f, const NoiseModel& noise) {
  const std::vector<double> t = noise_operator(f, noise);
  for (std::uint64_t z = 0; z < t.size(); ++z) {
    if (f.sign(z) * t[z] < -kTieTolerance) return false;
  }
  return true;
}

struct LtfCheck {
  double sens_f = 0.0;
  double sens_fnstar = 0.0;
  bool violates = false;
};

/// Does sign(T_rho f) have larger sensitivity than the LTF f?
inline LtfCheck ltf_counterexample_check(const LTFSpec& spec, double rho) {
  const BooleanFunction f = expand_ltf(spec);
  const BooleanFunction fnstar = optimal_predictor(f, NoiseModel::from_correlation(rho));
  LtfCheck out;
  out.sens_f = total_sensitivity(f);
  out.sens_fnstar = total_sensitivity(fnstar);
  out.violates = out.sens_fnstar > out.sens_f;
  return out;
}

inline constexpr int kMaxBruteForceArity = 3;

/// Exhaustive check that err_f(sign(T f)) <= err_f(g) for all 2^(2^n) g.
inline bool brute_force_optimality_check(const BooleanFunction& f, const NoiseModel& noise) {
  const int n = f.arity();
  if (n > kMaxBruteForceArity) {
    throw Error("exhaustive optimality check supports n <= " +
                std::to_string(kMaxBruteForceArity));
  }
  const double best = noisy_error(f, optimal_predictor(f, noise), noise);
  const std::uint64_t candidates = std::uint64_t{1} << f.size();
  for (std::uint64_t table = 0; table < candidates; ++table) {
    BooleanFunction g(n);
    g.words()[0] = table;
    if (best > noisy_error(f, g, noise) + 1e-12) return false;
  }
  return true;
}

struct AnalysisReport {
  double err_f_f = 0.0;
  double err_f_fnstar = 0.0;
  double sens_f = 0.0;
  double sens_fnstar = 0.0;
  std::vector<double> influences_f;
  double cond_entropy_bits = 0.0;
  double feder_lower = 0.0;
  double feder_upper = 0.0;
  bool self_predicting = false;
  BooleanFunction fnstar;
};

inline AnalysisReport analyze(const BooleanFunction& f, const NoiseModel& noise) {
  AnalysisReport r;
  const std::vector<double> t = noise_operator(f, noise);
  r.fnstar = sign_table(f.arity(), t);
  r.err_f_f = noisy_error(f, f, noise);
  r.err_f_fnstar = noisy_error(f, r.fnstar, noise);
  const SensitivityProfile sf = sensitivity(f, false);
  r.sens_f = sf.total;
  r.influences_f = sf.per_bit;
  r.sens_fnstar = total_sensitivity(r.fnstar);
  r.cond_entropy_bits = conditional_entropy(f, noise);
  const FederBounds b = feder_bounds(r.cond_entropy_bits, 2);
  r.feder_lower = b.lower;
  r.feder_upper = b.upper;
  r.self_predicting = is_self_predicting(f, noise);
  return r;
}

}  // namespace nrbl
