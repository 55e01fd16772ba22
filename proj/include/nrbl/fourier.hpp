#pragma once

// Walsh-Hadamard (Fourier) analysis over {0,1}^n.
//
// Coefficients are normalized, coeffs[S] = E_x[f(x) chi_S(x)] with
// chi_S(x) = prod_{i in S} x_i in the +-1 view, so Parseval reads
// sum_S coeffs[S]^2 = 1 for boolean f. Subsets are bitmasks in the same
// little-endian convention as inputs.

#include <bit>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "nrbl/core.hpp"
#include "nrbl/format.hpp"

namespace nrbl {

struct FourierSpectrum {
  int n = 0;
  std::vector<double> coeffs;
};

/// In-place unnormalized butterfly: v[S] <- sum_x v[x] (-1)^{|S & x|}.
/// Applying it twice multiplies by 2^n.
inline void walsh_hadamard_inplace(std::span<double> v) {
  const std::size_t size = v.size();
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t block = 0; block < size; block += 2 * half) {
      for (std::size_t j = block; j < block + half; ++j) {
        const double a = v[j];
        const double b = v[j + half];
        v[j] = a + b;
        v[j + half] = a - b;
      }
    }
  }
}

inline FourierSpectrum fwht(const BooleanFunction& f) {
  require_arity(f.arity());
  FourierSpectrum spec{f.arity(), f.signs()};
  walsh_hadamard_inplace(spec.coeffs);
  const double scale = std::ldexp(1.0, -f.arity());
  for (double& c : spec.coeffs) c *= scale;
  return spec;
}

/// Pointwise values sum_S coeffs[S] chi_S(x) of an arbitrary spectrum.
inline std::vector<double> inverse_fwht_values(const FourierSpectrum& spec) {
  std::vector<double> values = spec.coeffs;
  walsh_hadamard_inplace(values);
  return values;
}

/// Reconstructs a boolean function; throws if any point is not within
/// `tolerance` of +-1.
inline BooleanFunction inverse_fwht(const FourierSpectrum& spec, double tolerance = 1e-6) {
  require_arity(spec.n);
  if (spec.coeffs.size() != (std::size_t{1} << spec.n)) {
    throw Error("spectrum length must be 2^n");
  }
  const std::vector<double> values = inverse_fwht_values(spec);
  BooleanFunction f(spec.n);
  for (std::uint64_t x = 0; x < values.size(); ++x) {
    const double v = values[x];
    if (std::abs(std::abs(v) - 1.0) > tolerance) {
      throw Error("spectrum does not describe a boolean function (value " + std::to_string(v) +
                  " at x = " + std::to_string(x) + ")");
    }
    f.set(x, v < 0.0);
  }
  return f;
}

inline FourierSpectrum apply_noise_filter(const FourierSpectrum& spec,
                                          std::span<const double> filter) {
  if (filter.size() != spec.coeffs.size()) throw Error("filter length must match spectrum");
  FourierSpectrum out = spec;
  for (std::size_t s = 0; s < filter.size(); ++s) out.coeffs[s] *= filter[s];
  return out;
}

/// rho^{|S|}.
inline std::vector<double> iid_filter(int n, double rho) {
  require_arity(n);
  std::vector<double> powers(static_cast<std::size_t>(n) + 1);
  powers[0] = 1.0;
  for (int i = 1; i <= n; ++i) powers[i] = powers[i - 1] * rho;
  std::vector<double> filter(std::size_t{1} << n);
  for (std::size_t s = 0; s < filter.size(); ++s) filter[s] = powers[std::popcount(s)];
  return filter;
}

/// prod_{i in S} rho_i.
inline std::vector<double> product_filter(std::span<const double> rhos) {
  const int n = static_cast<int>(rhos.size());
  require_arity(n);
  std::vector<double> filter(std::size_t{1} << n);
  filter[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t s = 0; s < bit; ++s) filter[s | bit] = filter[s] * rhos[i];
  }
  return filter;
}

inline double total_influence_fourier(const FourierSpectrum& spec) {
  double total = 0.0;
  for (std::size_t s = 0; s < spec.coeffs.size(); ++s) {
    total += std::popcount(s) * spec.coeffs[s] * spec.coeffs[s];
  }
  return total;
}

inline double spectral_weight(const FourierSpectrum& spec) {
  double total = 0.0;
  for (double c : spec.coeffs) total += c * c;
  return total;
}

/// CSV with header mask,subset_size,coefficient.
inline void write_spectrum_csv(std::ostream& os, const FourierSpectrum& spec) {
  os << "mask,subset_size,coefficient\n";
  for (std::size_t s = 0; s < spec.coeffs.size(); ++s) {
    os << s << ',' << std::popcount(s) << ',' << format_double(spec.coeffs[s]) << '\n';
  }
}

}  // namespace nrbl
