#pragma once

// Exact truth-table representations of boolean functions.
//
// Conventions used everywhere in nrbl:
//  * an input x is a little-endian bitmask, coordinate 0 is the least
//    significant bit (and the first character of any serialized bitstring);
//  * the real (+-1) view of a bit b is 1 - 2b, i.e. 0 -> +1 and 1 -> -1.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nrbl {

/// Raised for invalid arguments and out-of-domain requests.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxExactArity = 24;
inline constexpr int kMaxAmbientWidth = 64;

constexpr int hamming_weight(std::uint64_t x) noexcept { return std::popcount(x); }

constexpr int to_sign(bool bit) noexcept { return bit ? -1 : 1; }

inline void require_arity(int n, int lo = 0, int hi = kMaxExactArity) {
  if (n < lo || n > hi) {
    throw Error("arity " + std::to_string(n) + " outside [" + std::to_string(lo) +
                ", " + std::to_string(hi) + "]");
  }
}

/// Bit-packed truth table of f: {0,1}^n -> {0,1}.
class BooleanFunction {
 public:
  BooleanFunction() : BooleanFunction(0) {}

  /// The constant-0 function on n bits.
  explicit BooleanFunction(int n) : n_(n) {
    require_arity(n);
    words_.assign(word_count(n), 0);
  }

  template <class Predicate>
  static BooleanFunction from_predicate(int n, Predicate&& pred) {
    BooleanFunction f(n);
    const std::uint64_t size = f.size();
    for (std::uint64_t x = 0; x < size; ++x) {
      if (pred(x)) f.words_[x >> 6] |= std::uint64_t{1} << (x & 63);
    }
    return f;
  }

  static BooleanFunction from_bits(int n, std::span<const std::uint8_t> bits) {
    BooleanFunction f(n);
    if (bits.size() != f.size()) throw Error("truth table length must be 2^n");
    for (std::uint64_t x = 0; x < f.size(); ++x) f.set(x, bits[x] != 0);
    return f;
  }

  /// Parses a big-endian hex literal of the whole table (bit x of the integer
  /// is f(x)), e.g. parity on 4 bits is "6996".
  static BooleanFunction from_hex(int n, std::string_view hex) {
    BooleanFunction f(n);
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.empty()) throw Error("empty hex truth table");
    const std::size_t digits = hex_digits(n);
    if (hex.size() > digits) {
      // Tolerate leading zeros only.
      for (std::size_t i = 0; i + digits < hex.size(); ++i) {
        if (hex[i] != '0') throw Error("hex truth table wider than 2^n bits");
      }
      hex.remove_prefix(hex.size() - digits);
    }
    for (std::size_t i = 0; i < hex.size(); ++i) {
      const int v = hex_value(hex[hex.size() - 1 - i]);
      for (int b = 0; b < 4; ++b) {
        const std::uint64_t x = 4 * i + b;
        if ((v >> b) & 1) {
          if (x >= f.size()) throw Error("hex truth table wider than 2^n bits");
          f.set(x, true);
        }
      }
    }
    return f;
  }

  [[nodiscard]] int arity() const noexcept { return n_; }
  [[nodiscard]] std::uint64_t size() const noexcept { return std::uint64_t{1} << n_; }

  [[nodiscard]] bool operator()(std::uint64_t x) const noexcept {
    return (words_[x >> 6] >> (x & 63)) & 1;
  }
  [[nodiscard]] int sign(std::uint64_t x) const noexcept { return to_sign((*this)(x)); }

  void set(std::uint64_t x, bool value) noexcept {
    const std::uint64_t m = std::uint64_t{1} << (x & 63);
    if (value) {
      words_[x >> 6] |= m;
    } else {
      words_[x >> 6] &= ~m;
    }
  }

  [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }
  /// Mutable word access. Bits at positions >= 2^n must stay zero.
  [[nodiscard]] std::span<std::uint64_t> words() noexcept { return words_; }

  /// Mask of valid bits inside each word (only differs from all-ones for n < 6).
  [[nodiscard]] std::uint64_t word_mask() const noexcept {
    return n_ >= 6 ? ~std::uint64_t{0} : ((std::uint64_t{1} << size()) - 1);
  }

  [[nodiscard]] std::uint64_t count_ones() const noexcept {
    std::uint64_t c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  /// E_x[f(x)] in the +-1 view.
  [[nodiscard]] double mean_sign() const noexcept {
    const auto ones = static_cast<double>(count_ones());
    return 1.0 - 2.0 * ones / static_cast<double>(size());
  }

  [[nodiscard]] std::vector<double> signs() const {
    std::vector<double> v(size());
    for (std::uint64_t x = 0; x < size(); ++x) v[x] = sign(x);
    return v;
  }

  [[nodiscard]] BooleanFunction complement() const {
    BooleanFunction g = *this;
    const std::uint64_t mask = word_mask();
    for (auto& w : g.words_) w = ~w & mask;
    return g;
  }

  /// Number of inputs where the two tables differ.
  [[nodiscard]] std::uint64_t hamming_distance(const BooleanFunction& other) const {
    if (other.n_ != n_) throw Error("arity mismatch");
    std::uint64_t d = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      d += std::popcount(words_[i] ^ other.words_[i]);
    }
    return d;
  }

  [[nodiscard]] std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    const std::size_t digits = hex_digits(n_);
    std::string out(digits, '0');
    for (std::size_t i = 0; i < digits; ++i) {
      int v = 0;
      for (int b = 0; b < 4; ++b) {
        const std::uint64_t x = 4 * i + b;
        if (x < size() && (*this)(x)) v |= 1 << b;
      }
      out[digits - 1 - i] = kDigits[v];
    }
    return out;
  }

  /// Table as a 0/1 character string, entry for x = 0 first.
  [[nodiscard]] std::string to_bitstring() const {
    std::string s(size(), '0');
    for (std::uint64_t x = 0; x < size(); ++x) s[x] = (*this)(x) ? '1' : '0';
    return s;
  }

  friend bool operator==(const BooleanFunction&, const BooleanFunction&) = default;

 private:
  static std::size_t word_count(int n) {
    return n >= 6 ? (std::size_t{1} << (n - 6)) : 1;
  }
  static std::size_t hex_digits(int n) {
    return n >= 2 ? (std::size_t{1} << (n - 2)) : 1;
  }
  static int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error(std::string("invalid hex digit '") + c + "'");
  }

  int n_;
  std::vector<std::uint64_t> words_;
};

enum class Family { parity, majority, dictator, constant };

/// parity: wt(x) mod 2. majority: 1 iff wt(x) >= n/2 (so even n is
/// imbalanced). dictator: x_0. constant: 0.
inline BooleanFunction make_named(Family family, int n) {
  require_arity(n, 1);
  switch (family) {
    case Family::parity:
      return BooleanFunction::from_predicate(
          n, [](std::uint64_t x) { return (hamming_weight(x) & 1) != 0; });
    case Family::majority:
      return BooleanFunction::from_predicate(
          n, [n](std::uint64_t x) { return 2 * hamming_weight(x) >= n; });
    case Family::dictator:
      return BooleanFunction::from_predicate(n, [](std::uint64_t x) { return (x & 1) != 0; });
    case Family::constant:
      return BooleanFunction(n);
  }
  throw Error("unknown family");
}

/// f on n_total bits that reads only the coordinates listed in `subset`;
/// subset[j] feeds coordinate j of `inner`.
struct JuntaSpec {
  int n_total = 0;
  std::vector<int> subset;
  BooleanFunction inner;

  void validate() const {
    if (n_total < 0 || n_total > kMaxAmbientWidth) {
      throw Error("ambient width " + std::to_string(n_total) + " outside [0, 64]");
    }
    if (static_cast<int>(subset.size()) != inner.arity()) {
      throw Error("junta subset size must equal inner arity");
    }
    std::vector<int> sorted = subset;
    std::ranges::sort(sorted);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] < 0 || sorted[i] >= n_total) {
        throw Error("junta index " + std::to_string(sorted[i]) + " out of range");
      }
      if (i > 0 && sorted[i] == sorted[i - 1]) {
        throw Error("duplicate junta index " + std::to_string(sorted[i]));
      }
    }
  }

  [[nodiscard]] std::uint64_t project(std::uint64_t x) const noexcept {
    std::uint64_t y = 0;
    for (std::size_t j = 0; j < subset.size(); ++j) {
      y |= ((x >> subset[j]) & 1) << j;
    }
    return y;
  }

  /// Pointwise evaluation; works for any ambient width up to 64.
  [[nodiscard]] bool operator()(std::uint64_t x) const noexcept { return inner(project(x)); }

  static JuntaSpec identity(BooleanFunction f) {
    JuntaSpec j;
    j.n_total = f.arity();
    j.subset.resize(f.arity());
    for (int i = 0; i < f.arity(); ++i) j.subset[i] = i;
    j.inner = std::move(f);
    return j;
  }
};

inline BooleanFunction expand_junta(const JuntaSpec& spec) {
  spec.validate();
  require_arity(spec.n_total);
  return BooleanFunction::from_predicate(spec.n_total,
                                         [&](std::uint64_t x) { return spec(x); });
}

/// Symmetric function f(x) = profile[wt(x)]; profile has n + 1 entries.
struct WeightFunction {
  int n = 0;
  std::vector<std::uint8_t> profile;

  static WeightFunction from_string(std::string_view s) {
    if (s.empty()) throw Error("weight string must have n + 1 >= 1 characters");
    WeightFunction wf;
    wf.n = static_cast<int>(s.size()) - 1;
    for (char c : s) {
      if (c != '0' && c != '1') throw Error("weight string must be 0/1 characters");
      wf.profile.push_back(c == '1');
    }
    return wf;
  }

  [[nodiscard]] std::string to_string() const {
    std::string s;
    for (auto b : profile) s.push_back(b ? '1' : '0');
    return s;
  }

  [[nodiscard]] bool operator()(std::uint64_t x) const noexcept {
    return profile[hamming_weight(x)] != 0;
  }
};

inline BooleanFunction expand_weight_function(const WeightFunction& wf) {
  require_arity(wf.n);
  if (wf.profile.size() != static_cast<std::size_t>(wf.n) + 1) {
    throw Error("weight profile length must be n + 1");
  }
  return BooleanFunction::from_predicate(wf.n, [&](std::uint64_t x) { return wf(x); });
}

/// f(x) = sign(a0 + sum_i a_i x_i) over the +-1 view; a zero argument gives +1.
struct LTFSpec {
  double a0 = 0.0;
  std::vector<double> a;

  [[nodiscard]] int arity() const noexcept { return static_cast<int>(a.size()); }

  [[nodiscard]] double argument(std::uint64_t x) const noexcept {
    double s = a0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * to_sign((x >> i) & 1);
    return s;
  }

  [[nodiscard]] bool operator()(std::uint64_t x) const noexcept { return argument(x) < 0.0; }
};

inline BooleanFunction expand_ltf(const LTFSpec& spec) {
  require_arity(spec.arity());
  return BooleanFunction::from_predicate(spec.arity(),
                                         [&](std::uint64_t x) { return spec(x); });
}

}  // namespace nrbl
