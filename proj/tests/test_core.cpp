#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "nrbl/core.hpp"
#include "nrbl/literal.hpp"
#include "nrbl/rng.hpp"
#include "goldens.hpp"

using namespace nrbl;

TEST(HammingWeight, Basics) {
  EXPECT_EQ(hamming_weight(0), 0);
  EXPECT_EQ(hamming_weight(0b1011), 3);
  EXPECT_EQ(hamming_weight((std::uint64_t{1} << 17) - 1), 17);
}

TEST(BooleanFunction, SignViewRoundTrip) {
  const auto f = make_named(Family::majority, 5);
  const auto s = f.signs();
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    EXPECT_EQ(s[x], f(x) ? -1.0 : 1.0);
    EXPECT_EQ((1 - f.sign(x)) / 2, static_cast<int>(f(x)));
  }
}

TEST(BooleanFunction, ParityTwoTable) {
  const auto f = make_named(Family::parity, 2);
  EXPECT_EQ(f.to_bitstring(), "0110");
  EXPECT_EQ(f.to_hex(), "6");
  EXPECT_EQ(make_named(Family::parity, 4).to_hex(), "6996");
}

TEST(BooleanFunction, MajorityRule) {
  const auto m3 = make_named(Family::majority, 3);
  for (std::uint64_t x = 0; x < 8; ++x) EXPECT_EQ(m3(x), hamming_weight(x) >= 2);
  const auto m2 = make_named(Family::majority, 2);
  EXPECT_EQ(m2.to_bitstring(), "0111");
  EXPECT_DOUBLE_EQ(m2.count_ones() / 4.0, 0.75);
  for (int n = 1; n <= 12; ++n) {
    const auto m = make_named(Family::majority, n);
    if (n % 2) {
      EXPECT_EQ(m.count_ones(), m.size() / 2) << n;
    } else {
      EXPECT_GT(m.count_ones(), m.size() / 2) << n;
    }
  }
}

TEST(BooleanFunction, HexRoundTripRandom) {
  Stream rng(11);
  for (int n = 0; n <= 9; ++n) {
    BooleanFunction f(n);
    for (std::uint64_t x = 0; x < f.size(); ++x) f.set(x, rng.next() & 1);
    EXPECT_EQ(BooleanFunction::from_hex(n, f.to_hex()), f);
    EXPECT_EQ(BooleanFunction::from_hex(n, "0x000" + f.to_hex()), f);
  }
  EXPECT_THROW(BooleanFunction::from_hex(2, "1f"), Error);
  EXPECT_THROW(BooleanFunction::from_hex(3, "zz"), Error);
}

TEST(BooleanFunction, ArityCap) {
  EXPECT_THROW(BooleanFunction(25), Error);
  EXPECT_THROW(make_named(Family::parity, 0), Error);
  EXPECT_NO_THROW(BooleanFunction(24));
}

TEST(Junta, IdentityEmbeddingAndIrrelevantBits) {
  const auto inner = make_named(Family::majority, 5);
  EXPECT_EQ(expand_junta(JuntaSpec::identity(inner)), inner);

  JuntaSpec spec{8, {1, 3, 4, 6, 7}, inner};
  const auto f = expand_junta(spec);
  const std::uint64_t outside = 0b00100101;
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    for (int i = 0; i < 8; ++i) {
      if ((outside >> i) & 1) {
        EXPECT_EQ(f(x), f(x ^ (std::uint64_t{1} << i)));
      }
    }
  }
}

TEST(Junta, DictatorInnerReadsMappedCoordinate) {
  for (int j = 0; j < 3; ++j) {
    const auto inner = BooleanFunction::from_predicate(3, [j](std::uint64_t x) { return (x >> j) & 1; });
    JuntaSpec spec{7, {2, 4, 5}, inner};
    const auto f = expand_junta(spec);
    for (std::uint64_t x = 0; x < f.size(); ++x) EXPECT_EQ(f(x), ((x >> spec.subset[j]) & 1) != 0);
  }
}

TEST(Junta, RandomSpecsIgnoreOutsideBits) {
  Stream rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform_below(9));
    const int k = 1 + static_cast<int>(rng.uniform_below(n));
    JuntaSpec spec{n, random_subset(n, k, rng), BooleanFunction(k)};
    for (std::uint64_t x = 0; x < spec.inner.size(); ++x) spec.inner.set(x, rng.next() & 1);
    const auto f = expand_junta(spec);
    for (std::uint64_t x = 0; x < f.size(); ++x) {
      for (int i = 0; i < n; ++i) {
        if (std::ranges::find(spec.subset, i) == spec.subset.end()) {
          ASSERT_EQ(f(x), f(x ^ (std::uint64_t{1} << i)));
        }
      }
    }
  }
}

TEST(Junta, ValidationErrors) {
  EXPECT_THROW((JuntaSpec{4, {0, 0}, BooleanFunction(2)}.validate()), Error);
  EXPECT_THROW((JuntaSpec{4, {0, 4}, BooleanFunction(2)}.validate()), Error);
  EXPECT_THROW((JuntaSpec{4, {0}, BooleanFunction(2)}.validate()), Error);
  EXPECT_THROW((JuntaSpec{65, {0}, BooleanFunction(1)}.validate()), Error);
}

TEST(Junta, WideAmbientPointwise) {
  JuntaSpec spec{64, {0, 40, 63}, make_named(Family::parity, 3)};
  spec.validate();
  EXPECT_TRUE(spec((std::uint64_t{1} << 63)));
  EXPECT_FALSE(spec((std::uint64_t{1} << 63) | (std::uint64_t{1} << 40)));
  EXPECT_FALSE(spec(0b10));
}

TEST(WeightFunction, Expansion) {
  for (int n = 1; n <= 10; ++n) {
    std::string s;
    for (int w = 0; w <= n; ++w) s += (w % 2) ? '1' : '0';
    EXPECT_EQ(expand_weight_function(WeightFunction::from_string(s)), make_named(Family::parity, n));
  }
  const auto trap = expand_weight_function(WeightFunction::from_string("000110000"));
  EXPECT_EQ(trap.arity(), 8);
  for (std::uint64_t x = 0; x < trap.size(); ++x) {
    const int w = hamming_weight(x);
    EXPECT_EQ(trap(x), w == 3 || w == 4);
  }
  EXPECT_EQ(expand_weight_function(WeightFunction::from_string("0000")).count_ones(), 0u);
  EXPECT_THROW((expand_weight_function(WeightFunction{3, {0, 1, 0}})), Error);
  EXPECT_THROW(WeightFunction::from_string("0120"), Error);
}

TEST(LTF, Basics) {
  EXPECT_EQ(expand_ltf(LTFSpec{0.0, {1.0, 0.0, 0.0}}), make_named(Family::dictator, 3));
  EXPECT_EQ(expand_ltf(LTFSpec{0.0, {1.0, 1.0, 1.0}}), make_named(Family::majority, 3));
  // Zero argument resolves to bit 0.
  const auto tie = expand_ltf(LTFSpec{0.0, {1.0, 1.0}});
  EXPECT_FALSE(tie(0b01));
  EXPECT_FALSE(tie(0b10));
  EXPECT_TRUE(tie(0b11));
}

TEST(LTF, SixBitCounterexampleTable) {
  const LTFSpec spec{0.3, {0.1, 0.1, 0.2, 0.3, 0.4, 0.9}};
  const auto f = expand_ltf(spec);
  EXPECT_EQ(f.arity(), 6);
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    double arg = 0.3;
    for (int i = 0; i < 6; ++i) arg += spec.a[i] * (((x >> i) & 1) ? -1.0 : 1.0);
    EXPECT_EQ(f(x), arg < 0.0);
  }
}

TEST(Literal, NamedFamilies) {
  EXPECT_EQ(parse_exact_function("parity:4"), make_named(Family::parity, 4));
  EXPECT_EQ(parse_exact_function("maj:5"), make_named(Family::majority, 5));
  EXPECT_EQ(parse_exact_function("dict:3"), make_named(Family::dictator, 3));
  EXPECT_EQ(parse_exact_function("const:3:1").count_ones(), 8u);
  EXPECT_EQ(parse_exact_function("tt:4:0x6996"), make_named(Family::parity, 4));
  EXPECT_EQ(parse_exact_function("w:0101"), make_named(Family::parity, 3));
  EXPECT_EQ(parse_exact_function("ltf:0,1,1,1"), make_named(Family::majority, 3));
}

TEST(Literal, SparseSelectors) {
  const auto a = parse_function("maj:20:5");
  EXPECT_EQ(a.n_total, 20);
  EXPECT_EQ(a.subset, (std::vector<int>{0, 1, 2, 3, 4}));
  const auto b = parse_function("parity:10:3@1,5,9");
  EXPECT_EQ(b.subset, (std::vector<int>{1, 5, 9}));
  const auto c = parse_function("maj:20:5#42");
  EXPECT_EQ(c.subset, parse_function("maj:20:5#42").subset);
  EXPECT_TRUE(std::ranges::is_sorted(c.subset));
  const auto e = parse_function("embed:14#3:w:000110000");
  EXPECT_EQ(e.n_total, 14);
  EXPECT_EQ(e.subset.size(), 8u);
  EXPECT_EQ(e.inner, parse_exact_function("w:000110000"));
}

TEST(Literal, Errors) {
  for (const char* bad : {"parity", "foo:3", "parity:x", "maj:4:5", "parity:4:2@1", "tt:2",
                          "const:3:2", "w:", "parity:4#1", "embed:3:parity:4", "parity:25"}) {
    EXPECT_THROW(parse_exact_function(bad), Error) << bad;
  }
  EXPECT_THROW(parse_exact_function("maj:30:5"), Error);
  EXPECT_NO_THROW(parse_function("maj:30:5"));
}

TEST(Rng, SubstreamsIgnoreParentPosition) {
  Stream a(99);
  const Stream b(99);
  for (int i = 0; i < 10; ++i) a.next();
  EXPECT_EQ(a.substream(3).key(), b.substream(3).key());
  EXPECT_NE(b.substream(3).key(), b.substream(4).key());
  EXPECT_NE(Stream(1).key(), Stream(2).key());
}

TEST(Rng, GoldenSequence) {
  Stream s(7);
  EXPECT_EQ(s.next(), golden::kStreamFirst);
  EXPECT_EQ(s.next(), golden::kStreamSecond);
}

TEST(Rng, UniformBelowIsUnbiased) {
  Stream s(3);
  std::vector<int> counts(6, 0);
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) ++counts[s.uniform_below(6)];
  for (int c : counts) EXPECT_NEAR(c, draws / 6.0, 4 * std::sqrt(draws * (1 / 6.0) * (5 / 6.0)));
}

TEST(Rng, RandomSubset) {
  Stream s(1);
  const auto all = random_subset(10, 10, s);
  EXPECT_EQ(all, (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
  std::vector<int> hits(10, 0);
  for (int i = 0; i < 20000; ++i) {
    for (int j : random_subset(10, 3, s)) ++hits[j];
  }
  for (int h : hits) EXPECT_NEAR(h, 6000, 4 * std::sqrt(20000 * 0.3 * 0.7));
}
