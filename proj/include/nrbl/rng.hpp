#pragma once

// Counter-based, splittable random streams.
//
// Every draw in the library comes from a Stream. A Stream is a SplitMix64
// sequence keyed by a 64-bit value: draw j returns mix(key + (j + 1) * kGamma).
// Child streams are derived by hashing (parent key, index), so sample i of a
// Monte-Carlo run always reads from master.substream(i) no matter how work is
// scheduled. Only integer arithmetic is used to produce bits, and the
// floating-point helpers are exact conversions, so sequences are identical on
// every IEEE-754 platform.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace nrbl {

namespace detail {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

class Stream {
 public:
  using result_type = std::uint64_t;

  constexpr explicit Stream(std::uint64_t seed) noexcept
      : key_(detail::mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept { return next(); }

  constexpr std::uint64_t next() noexcept {
    counter_ += detail::kGamma;
    return detail::mix64(key_ + counter_);
  }

  /// Independent child stream; depends only on this stream's key and index,
  /// never on how many values have already been drawn.
  [[nodiscard]] constexpr Stream substream(std::uint64_t index) const noexcept {
    Stream child{0};
    child.key_ = detail::mix64(key_ ^ detail::mix64(index * detail::kGamma +
                                                    0x3c6ef372fe94f82bULL));
    return child;
  }

  [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  /// Uniform integer in [0, bound). Lemire's multiply-and-reject method.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    __extension__ using u128 = unsigned __int128;
    u128 m = static_cast<u128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<u128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Low `width` bits of one draw (width in [0, 64]).
  std::uint64_t bits(int width) noexcept {
    const std::uint64_t v = next();
    return width >= 64 ? v : (v & ((std::uint64_t{1} << width) - 1));
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Uniform k-subset of {0, ..., n-1}, sorted ascending (partial Fisher-Yates).
inline std::vector<int> random_subset(int n, int k, Stream& stream) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(stream.uniform_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::ranges::sort(pool);
  return pool;
}

}  // namespace nrbl
