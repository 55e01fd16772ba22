#include <gtest/gtest.h>

#include <sstream>

#include "nrbl/fourier.hpp"
#include "nrbl/noise.hpp"
#include "nrbl/rng.hpp"
#include "oracles.hpp"

using namespace nrbl;

namespace {

BooleanFunction random_function(int n, Stream& rng) {
  BooleanFunction f(n);
  for (std::uint64_t x = 0; x < f.size(); ++x) f.set(x, rng.next() & 1);
  return f;
}

}  // namespace

TEST(Fwht, MatchesNaiveSum) {
  Stream rng(21);
  for (int n = 0; n <= 8; ++n) {
    for (int t = 0; t < 5; ++t) {
      const auto f = random_function(n, rng);
      const auto fast = fwht(f).coeffs;
      const auto slow = oracle::fourier(f);
      for (std::size_t s = 0; s < fast.size(); ++s) ASSERT_NEAR(fast[s], slow[s], 1e-12);
    }
  }
}

TEST(Fwht, KnownSpectra) {
  const auto c0 = fwht(BooleanFunction(3)).coeffs;
  EXPECT_EQ(c0[0], 1.0);
  for (std::size_t s = 1; s < c0.size(); ++s) EXPECT_EQ(c0[s], 0.0);

  const auto p2 = fwht(make_named(Family::parity, 2)).coeffs;
  EXPECT_EQ(p2, (std::vector<double>{0.0, 0.0, 0.0, 1.0}));

  const auto m3 = fwht(make_named(Family::majority, 3)).coeffs;
  for (std::size_t s = 0; s < 8; ++s) {
    const int k = std::popcount(s);
    EXPECT_DOUBLE_EQ(std::abs(m3[s]), (k == 1 || k == 3) ? 0.5 : 0.0) << s;
  }
}

TEST(Fwht, ParsevalAndRoundTrip) {
  Stream rng(8);
  for (int t = 0; t < 1000; ++t) {
    const auto f = random_function(8, rng);
    const auto spec = fwht(f);
    ASSERT_NEAR(spectral_weight(spec), 1.0, 1e-10);
    ASSERT_EQ(inverse_fwht(spec), f);
  }
  const auto m3 = make_named(Family::majority, 3);
  EXPECT_EQ(inverse_fwht(fwht(m3)), m3);
}

TEST(Fwht, Linearity) {
  Stream rng(4);
  const auto f = random_function(6, rng);
  const auto g = random_function(6, rng);
  std::vector<double> mix(64);
  for (std::size_t x = 0; x < 64; ++x) mix[x] = 2.0 * f.sign(x) - 3.0 * g.sign(x);
  walsh_hadamard_inplace(mix);
  const auto a = fwht(f).coeffs;
  const auto b = fwht(g).coeffs;
  for (std::size_t s = 0; s < 64; ++s) EXPECT_NEAR(mix[s] / 64.0, 2.0 * a[s] - 3.0 * b[s], 1e-12);
}

TEST(Fwht, SelfInverseUpToScale) {
  std::vector<double> v = {0.5, -1.0, 3.0, 2.0, 0.0, 1.5, -2.5, 4.0};
  auto w = v;
  walsh_hadamard_inplace(w);
  walsh_hadamard_inplace(w);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_DOUBLE_EQ(w[i], 8.0 * v[i]);
}

TEST(InverseFwht, DictatorFromSingleCoefficient) {
  FourierSpectrum spec{3, std::vector<double>(8, 0.0)};
  spec.coeffs[1] = 1.0;
  EXPECT_EQ(inverse_fwht(spec), make_named(Family::dictator, 3));
}

TEST(InverseFwht, RejectsNonBooleanSpectrum) {
  FourierSpectrum spec{2, {0.5, 0.5, 0.0, 0.0}};
  EXPECT_THROW(inverse_fwht(spec), Error);
  EXPECT_THROW(inverse_fwht(FourierSpectrum{2, {1.0}}), Error);
}

TEST(NoiseFilter, IdentityAndZero) {
  const auto f = make_named(Family::majority, 5);
  const auto spec = fwht(f);
  EXPECT_EQ(apply_noise_filter(spec, std::vector<double>(32, 1.0)).coeffs, spec.coeffs);
  const auto zeroed = apply_noise_filter(spec, iid_filter(5, 0.0));
  EXPECT_EQ(zeroed.coeffs[0], spec.coeffs[0]);
  for (std::size_t s = 1; s < 32; ++s) EXPECT_EQ(zeroed.coeffs[s], 0.0);
  EXPECT_THROW(apply_noise_filter(spec, std::vector<double>(16, 1.0)), Error);
}

TEST(NoiseFilter, ProductFilterEqualsConvolution) {
  Stream rng(17);
  const std::vector<double> rates = {0.05, 0.2, 0.31, 0.45};
  std::vector<double> rhos;
  for (double p : rates) rhos.push_back(1.0 - 2.0 * p);
  const auto pe = oracle::product_distribution(rates);
  for (int t = 0; t < 20; ++t) {
    const auto f = random_function(4, rng);
    const auto fast = inverse_fwht_values(apply_noise_filter(fwht(f), product_filter(rhos)));
    const auto slow = oracle::noise_operator(f, pe);
    for (std::size_t x = 0; x < 16; ++x) ASSERT_NEAR(fast[x], slow[x], 1e-12);
  }
}

TEST(TotalInfluence, KnownValues) {
  for (int n = 1; n <= 10; ++n) {
    EXPECT_NEAR(total_influence_fourier(fwht(make_named(Family::parity, n))), n, 1e-12);
  }
  EXPECT_EQ(total_influence_fourier(fwht(BooleanFunction(4))), 0.0);
  EXPECT_NEAR(total_influence_fourier(fwht(make_named(Family::majority, 3))), 1.5, 1e-12);
}

TEST(TotalInfluence, MatchesDirectSensitivityAtTwelve) {
  Stream rng(12);
  for (int t = 0; t < 100; ++t) {
    const auto f = random_function(12, rng);
    ASSERT_NEAR(total_influence_fourier(fwht(f)), total_sensitivity(f), 1e-9);
  }
}

TEST(SpectrumCsv, Format) {
  std::ostringstream os;
  write_spectrum_csv(os, fwht(make_named(Family::parity, 2)));
  EXPECT_EQ(os.str(), "mask,subset_size,coefficient\n0,0,0\n1,1,0\n2,1,0\n3,2,1\n");
}
