#include <gtest/gtest.h>

#include <algorithm>

#include "nrbl/ensembles.hpp"
#include "nrbl/trapsearch.hpp"
#include "oracles.hpp"

using namespace nrbl;

namespace {

std::string profile_string(int n, std::uint64_t code) {
  std::string s;
  for (int w = 0; w <= n; ++w) s += ((code >> (n - w)) & 1) ? '1' : '0';
  return s;
}

}  // namespace

TEST(WeightKernel, RowsAreDistributions) {
  const WeightKernel k(7, 0.23);
  double mass = 0.0;
  for (int w = 0; w <= 7; ++w) {
    double row = 0.0;
    for (int w2 = 0; w2 <= 7; ++w2) row += k(w, w2);
    EXPECT_NEAR(row, 1.0, 1e-14);
    mass += k.weight_mass(w);
  }
  EXPECT_NEAR(mass, 1.0, 1e-15);
}

TEST(WeightKernel, MatchesEnumeratedFlipPatterns) {
  const int n = 6;
  const double p = 0.3;
  const WeightKernel k(n, p);
  const auto pe = oracle::iid_distribution(n, p);
  for (int w = 0; w <= n; ++w) {
    const std::uint64_t x = (std::uint64_t{1} << w) - 1;
    std::vector<double> row(n + 1, 0.0);
    for (std::uint64_t e = 0; e < pe.size(); ++e) row[std::popcount(x ^ e)] += pe[e];
    for (int w2 = 0; w2 <= n; ++w2) EXPECT_NEAR(k(w, w2), row[w2], 1e-15);
  }
}

TEST(WeightPath, AgreesWithFullTablesExhaustively) {
  for (int n = 1; n <= 10; ++n) {
    const double p = 0.2 + 0.01 * n;
    const WeightKernel kernel(n, p);
    const auto noise = NoiseModel::iid(p);
    const std::uint64_t codes = std::uint64_t{1} << (n + 1);
    const std::uint64_t step = n <= 7 ? 1 : 7;
    for (std::uint64_t code = 0; code < codes; code += step) {
      const auto wf = WeightFunction::from_string(profile_string(n, code));
      const auto c = evaluate_weight_function(kernel, wf);
      const auto f = expand_weight_function(wf);
      const auto fnstar = optimal_predictor(f, noise);
      ASSERT_EQ(expand_weight_function(WeightFunction::from_string(c.fnstar)), fnstar) << c.s;
      ASSERT_NEAR(c.err_f, noisy_error(f, f, noise), 1e-12);
      ASSERT_NEAR(c.err_fnstar, noisy_error(f, fnstar, noise), 1e-12);
      ASSERT_NEAR(c.sens_f, total_sensitivity(f), 1e-12);
      ASSERT_NEAR(c.sens_fnstar, total_sensitivity(fnstar), 1e-12);
    }
  }
}

TEST(TrapCandidate, GoldenQuadruple) {
  const auto c = evaluate_weight_function(WeightFunction::from_string("000110000"), 0.2);
  EXPECT_NEAR(c.err_f, 0.37995888, 1e-12);
  EXPECT_NEAR(c.err_fnstar, 0.37608844, 1e-12);
  EXPECT_DOUBLE_EQ(c.sens_f, 3.5);
  EXPECT_DOUBLE_EQ(c.sens_fnstar, 2.625);
  EXPECT_EQ(c.fnstar, "001110000");
  EXPECT_NEAR(c.err_gap, 0.00387044, 1e-12);
  EXPECT_DOUBLE_EQ(c.sens_ratio, 0.75);
}

TEST(TrapSearch, FindsReferenceInstance) {
  const auto found = trap_search(TrapSearchConfig{});
  const auto it = std::ranges::find_if(found, [](const TrapCandidate& c) {
    return c.n == 8 && c.p == 0.2 && c.s == "000110000";
  });
  ASSERT_NE(it, found.end());
  EXPECT_TRUE(std::ranges::is_sorted(found, [](const TrapCandidate& a, const TrapCandidate& b) {
    return std::tie(a.err_gap, a.sens_ratio) < std::tie(b.err_gap, b.sens_ratio);
  }));
  for (const auto& c : found) {
    EXPECT_LE(c.err_gap, kDefaultMaxErrGap);
    EXPECT_LE(c.sens_ratio, kDefaultMaxSensRatio);
  }
}

TEST(TrapSearch, ZeroGapIncludesSelfPredictingPatterns) {
  TrapSearchConfig config;
  config.n_grid = {5};
  config.p_grid = {0.2};
  config.max_err_gap = 0.0;
  config.max_sens_ratio = 1e9;
  const auto found = trap_search(config);
  auto has = [&](const std::string& s) {
    return std::ranges::any_of(found, [&](const TrapCandidate& c) { return c.s == s; });
  };
  EXPECT_TRUE(has("010101"));
  EXPECT_TRUE(has("101010"));
  EXPECT_TRUE(has("000111"));
  EXPECT_TRUE(has("111000"));
  for (const auto& c : found) EXPECT_EQ(c.err_gap, 0.0);
}

TEST(TrapSearch, DeterministicAcrossWorkers) {
  TrapSearchConfig config;
  config.n_grid = {6, 7};
  const auto a = trap_search(config, 1);
  const auto b = trap_search(config, 6);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].s, b[i].s);
    EXPECT_EQ(a[i].p, b[i].p);
    EXPECT_EQ(a[i].err_gap, b[i].err_gap);
  }
  EXPECT_THROW(trap_search(TrapSearchConfig{{}, {0.2}}), Error);
  EXPECT_THROW(trap_search(TrapSearchConfig{{17}, {0.2}}), Error);
}

TEST(Vetting, NoiselessLookupMemorizes) {
  const auto c = evaluate_weight_function(WeightFunction::from_string("0110"), 0.0);
  const auto v = finite_sample_vetting(c, 500, 500, 3);
  EXPECT_EQ(v.lookup_train_acc, 1.0);
  EXPECT_EQ(v.lookup_val_acc, 1.0);
}

TEST(Vetting, PaperSizesWithinTwoPoints) {
  const auto c = evaluate_weight_function(WeightFunction::from_string("000110000"), 0.2);
  const auto v = finite_sample_vetting(c, 10000, 20000, 7);
  EXPECT_NEAR(v.lookup_val_acc, v.optimal_acc, 0.02);
  EXPECT_NEAR(v.lookup_train_acc, v.optimal_acc, 0.02);
  EXPECT_EQ(finite_sample_vetting(c, 10000, 20000, 7, 1).lookup_val_acc, v.lookup_val_acc);
}

TEST(Vetting, LargeSampleApproachesOptimum) {
  const auto c = evaluate_weight_function(WeightFunction::from_string("000110000"), 0.2);
  const auto v = finite_sample_vetting(c, 400000, 100000, 5);
  EXPECT_NEAR(v.lookup_val_acc, 1.0 - c.err_fnstar, 0.01);
}
