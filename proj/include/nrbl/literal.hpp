#pragma once

// Function literals used by files and the command line.
//
//   parity:N            parity on all N bits
//   parity:N:K[SEL]     parity of K of the N bits
//   maj:N / maj:N:K[SEL]
//   dict:N              x_0
//   const:N[:V]         constant V (default 0)
//   w:S                 weight-based function, S has n + 1 characters
//   ltf:A0,A1,...,An    linear threshold function
//   tt:N:0xHEX          raw truth table, bit x of HEX is f(x)
//   embed:N[SEL]:INNER  any literal above placed on K of N ambient bits
//
// SEL picks the K coordinates: "@3,7,9" lists them, "#SEED" draws a uniform
// subset from Stream(SEED), and no selector means coordinates 0..K-1.

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "nrbl/core.hpp"
#include "nrbl/rng.hpp"

namespace nrbl {

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view s, std::string_view what) {
  T value{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw Error("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
  }
  return value;
}

// Splits "20:5@1,2,3" style tails into the numeric part and the selector.
inline std::pair<std::string_view, std::string_view> split_selector(std::string_view s) {
  const std::size_t pos = s.find_first_of("@#");
  if (pos == std::string_view::npos) return {s, {}};
  return {s.substr(0, pos), s.substr(pos)};
}

inline std::vector<int> resolve_selector(std::string_view sel, int n_total, int k) {
  if (k > n_total) throw Error("junta size exceeds ambient width");
  if (sel.empty()) {
    std::vector<int> subset(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) subset[i] = i;
    return subset;
  }
  if (sel.front() == '#') {
    Stream stream(parse_number<std::uint64_t>(sel.substr(1), "subset seed"));
    return random_subset(n_total, k, stream);
  }
  std::vector<int> subset;
  for (auto part : split(sel.substr(1), ',')) subset.push_back(parse_number<int>(part, "index"));
  if (static_cast<int>(subset.size()) != k) {
    throw Error("explicit subset has " + std::to_string(subset.size()) + " indices, expected " +
                std::to_string(k));
  }
  return subset;
}

inline JuntaSpec parse_family(Family family, std::string_view args, bool allow_sparse) {
  auto [numbers, sel] = split_selector(args);
  const auto fields = split(numbers, ':');
  if (fields.empty() || fields.size() > 2 || (!allow_sparse && fields.size() != 1)) {
    throw Error("malformed family literal arguments '" + std::string(args) + "'");
  }
  const int n = parse_number<int>(fields[0], "arity");
  const int k = fields.size() == 2 ? parse_number<int>(fields[1], "junta size") : n;
  if (!sel.empty() && fields.size() != 2) throw Error("subset selector needs N:K");
  require_arity(k, 1);
  JuntaSpec spec;
  spec.n_total = n;
  spec.inner = make_named(family, k);
  spec.subset = resolve_selector(sel, n, k);
  spec.validate();
  return spec;
}

}  // namespace detail

/// Parses any literal into a junta (plain functions become identity embeddings).
inline JuntaSpec parse_function(std::string_view literal) {
  using detail::parse_number;
  using detail::split;
  const std::size_t colon = literal.find(':');
  if (colon == std::string_view::npos) {
    throw Error("function literal '" + std::string(literal) + "' has no ':'");
  }
  const std::string_view kind = literal.substr(0, colon);
  const std::string_view rest = literal.substr(colon + 1);

  if (kind == "parity") return detail::parse_family(Family::parity, rest, true);
  if (kind == "maj") return detail::parse_family(Family::majority, rest, true);
  if (kind == "dict") return detail::parse_family(Family::dictator, rest, false);
  if (kind == "const") {
    const auto fields = split(rest, ':');
    if (fields.size() > 2) throw Error("malformed const literal");
    const int n = parse_number<int>(fields[0], "arity");
    BooleanFunction f = make_named(Family::constant, n);
    if (fields.size() == 2) {
      const int v = parse_number<int>(fields[1], "constant value");
      if (v != 0 && v != 1) throw Error("constant value must be 0 or 1");
      if (v == 1) f = f.complement();
    }
    return JuntaSpec::identity(std::move(f));
  }
  if (kind == "w") {
    return JuntaSpec::identity(expand_weight_function(WeightFunction::from_string(rest)));
  }
  if (kind == "ltf") {
    const auto parts = split(rest, ',');
    LTFSpec spec;
    spec.a0 = parse_number<double>(parts[0], "ltf offset");
    for (std::size_t i = 1; i < parts.size(); ++i) {
      spec.a.push_back(parse_number<double>(parts[i], "ltf weight"));
    }
    require_arity(spec.arity(), 1);
    return JuntaSpec::identity(expand_ltf(spec));
  }
  if (kind == "tt") {
    const std::size_t sep = rest.find(':');
    if (sep == std::string_view::npos) throw Error("tt literal must be tt:N:HEX");
    const int n = parse_number<int>(rest.substr(0, sep), "arity");
    return JuntaSpec::identity(BooleanFunction::from_hex(n, rest.substr(sep + 1)));
  }
  if (kind == "embed") {
    const std::size_t sep = rest.find(':');
    if (sep == std::string_view::npos) throw Error("embed literal must be embed:N[SEL]:INNER");
    auto [number, sel] = detail::split_selector(rest.substr(0, sep));
    JuntaSpec inner = parse_function(rest.substr(sep + 1));
    require_arity(inner.n_total);
    JuntaSpec spec;
    spec.n_total = parse_number<int>(number, "ambient width");
    spec.inner = expand_junta(inner);
    spec.subset = detail::resolve_selector(sel, spec.n_total, spec.inner.arity());
    spec.validate();
    return spec;
  }
  throw Error("unknown function kind '" + std::string(kind) + "'");
}

/// Parses a literal that must fit the exact-arity cap and expands it.
inline BooleanFunction parse_exact_function(std::string_view literal) {
  const JuntaSpec spec = parse_function(literal);
  if (spec.n_total > kMaxExactArity) {
    throw Error("function '" + std::string(literal) + "' is wider than " +
                std::to_string(kMaxExactArity) + " bits; exact analysis unavailable");
  }
  return expand_junta(spec);
}

}  // namespace nrbl
