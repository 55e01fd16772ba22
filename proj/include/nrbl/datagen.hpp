#pragma once

// Noisy / noiseless dataset generation.
//
// Row i of a dataset (train rows first, then validation rows) is built from
// two independent substreams of the master seed:
//   X_i    = Stream(seed).substream(0).substream(i).bits(width)
//   flip j = Stream(seed).substream(1).substream(i).bernoulli(p), j = 0..width-1
// so changing p never changes the underlying noiseless inputs. Labels are
// f(X_i) and are never noised.
//
// On disk, each (split, variant) is a CSV with header "features,label" and
// features written as 0/1 characters, coordinate 0 first. A metadata.json
// sidecar records the configuration, SHA-256 of every file and provenance.

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "nrbl/core.hpp"
#include "nrbl/literal.hpp"
#include "nrbl/parallel.hpp"
#include "nrbl/rng.hpp"

namespace nrbl {

inline constexpr int kDatasetFormatVersion = 1;

struct DatasetConfig {
  std::string function_literal;
  int n_bit = 0;  // feature width + 1 label bit
  double p = 0.0;
  std::size_t n_train = 0;
  std::size_t n_val = 0;
  std::uint64_t master_seed = 0;

  /// Parses the literal and checks every invariant.
  [[nodiscard]] JuntaSpec resolve() const {
    JuntaSpec f = parse_function(function_literal);
    if (n_bit - 1 != f.n_total) {
      throw Error("n_bit - 1 = " + std::to_string(n_bit - 1) +
                  " does not match the function's ambient width " + std::to_string(f.n_total));
    }
    if (!(p >= 0.0 && p <= 0.5)) throw Error("bitflip rate must lie in [0, 0.5]");
    return f;
  }
};

enum class Split { train, val };
enum class Variant { noiseless, noisy };

inline std::string_view to_string(Split s) { return s == Split::train ? "train" : "val"; }
inline std::string_view to_string(Variant v) {
  return v == Variant::noiseless ? "noiseless" : "noisy";
}

struct Row {
  std::uint64_t features = 0;
  std::uint8_t label = 0;

  friend bool operator==(const Row&, const Row&) = default;
};

struct Dataset {
  int width = 0;
  Split split = Split::train;
  Variant variant = Variant::noiseless;
  std::vector<Row> rows;
};

struct GeneratedData {
  Dataset train_noiseless;
  Dataset train_noisy;
  Dataset val_noiseless;
  Dataset val_noisy;
};

/// Core generator over an already-resolved function.
inline GeneratedData generate(const JuntaSpec& f, std::size_t n_train, std::size_t n_val,
                              double p, std::uint64_t master_seed,
                              unsigned workers = default_workers()) {
  f.validate();
  if (!(p >= 0.0 && p <= 0.5)) throw Error("bitflip rate must lie in [0, 0.5]");
  const int width = f.n_total;
  const std::size_t total = n_train + n_val;
  const Stream master(master_seed);
  const Stream x_streams = master.substream(0);
  const Stream flip_streams = master.substream(1);

  std::vector<Row> clean(total);
  std::vector<Row> noisy(total);
  parallel_for(0, total, workers, [&](std::size_t i) {
    Stream xs = x_streams.substream(i);
    const std::uint64_t x = xs.bits(width);
    Stream es = flip_streams.substream(i);
    std::uint64_t e = 0;
    for (int j = 0; j < width; ++j) {
      if (es.bernoulli(p)) e |= std::uint64_t{1} << j;
    }
    const auto label = static_cast<std::uint8_t>(f(x));
    clean[i] = {x, label};
    noisy[i] = {x ^ e, label};
  });

  auto slice = [&](const std::vector<Row>& rows, Split split, Variant variant) {
    Dataset d;
    d.width = width;
    d.split = split;
    d.variant = variant;
    const auto first = rows.begin() + static_cast<std::ptrdiff_t>(split == Split::train ? 0 : n_train);
    const auto last = split == Split::train ? first + static_cast<std::ptrdiff_t>(n_train) : rows.end();
    d.rows.assign(first, last);
    return d;
  };
  return {slice(clean, Split::train, Variant::noiseless), slice(noisy, Split::train, Variant::noisy),
          slice(clean, Split::val, Variant::noiseless), slice(noisy, Split::val, Variant::noisy)};
}

inline GeneratedData generate(const DatasetConfig& config, unsigned workers = default_workers()) {
  return generate(config.resolve(), config.n_train, config.n_val, config.p, config.master_seed,
                  workers);
}

inline std::string features_to_string(std::uint64_t features, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int j = 0; j < width; ++j) {
    if ((features >> j) & 1) s[j] = '1';
  }
  return s;
}

inline std::string to_csv(const Dataset& d) {
  std::string out = "features,label\n";
  out.reserve(out.size() + d.rows.size() * (static_cast<std::size_t>(d.width) + 3));
  for (const Row& r : d.rows) {
    out += features_to_string(r.features, d.width);
    out += ',';
    out += r.label ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline Dataset parse_csv(std::string_view text) {
  Dataset d;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    return true;
  };
  std::string_view line;
  if (!next_line(line) || line != "features,label") {
    throw Error("dataset CSV must start with the header 'features,label'");
  }
  d.width = -1;
  std::size_t line_no = 1;
  while (next_line(line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    const std::string where = " on line " + std::to_string(line_no);
    if (comma == std::string_view::npos || comma + 2 != line.size()) {
      throw Error("malformed dataset row" + where);
    }
    const std::string_view feats = line.substr(0, comma);
    if (d.width < 0) {
      d.width = static_cast<int>(feats.size());
      if (d.width > kMaxAmbientWidth) throw Error("feature width exceeds 64 bits");
    } else if (static_cast<int>(feats.size()) != d.width) {
      throw Error("inconsistent feature width" + where);
    }
    Row r;
    for (std::size_t j = 0; j < feats.size(); ++j) {
      if (feats[j] == '1') {
        r.features |= std::uint64_t{1} << j;
      } else if (feats[j] != '0') {
        throw Error("feature characters must be 0/1" + where);
      }
    }
    const char label = line.back();
    if (label != '0' && label != '1') throw Error("label must be 0/1" + where);
    r.label = label == '1';
    d.rows.push_back(r);
  }
  if (d.width < 0) d.width = 0;
  return d;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for " + path.string());
}

inline Dataset read_dataset_csv(const std::filesystem::path& path) {
  return parse_csv(read_file(path));
}

inline std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

/// Fraction of rows where the predictor disagrees with the label.
template <class Predictor>
double empirical_error(const Dataset& d, const Predictor& g) {
  if (d.rows.empty()) return 0.0;
  std::size_t wrong = 0;
  for (const Row& r : d.rows) wrong += static_cast<std::uint8_t>(g(r.features)) != r.label;
  return static_cast<double>(wrong) / static_cast<double>(d.rows.size());
}

inline double empirical_error(const Dataset& d, const BooleanFunction& g) {
  if (g.arity() != d.width) throw Error("predictor arity does not match feature width");
  return empirical_error<BooleanFunction>(d, g);
}

inline double empirical_error(const Dataset& d, const JuntaSpec& g) {
  if (g.n_total != d.width) throw Error("predictor arity does not match feature width");
  return empirical_error<JuntaSpec>(d, g);
}

/// Majority-vote memorization of a training set. Ties go to label 0; unseen
/// inputs get the global majority label.
class LookupTable {
 public:
  explicit LookupTable(const Dataset& train) : width_(train.width) {
    std::size_t ones = 0;
    for (const Row& r : train.rows) {
      auto& c = counts_[r.features];
      ++c[r.label];
      ones += r.label;
    }
    default_label_ = 2 * ones > train.rows.size();
  }

  [[nodiscard]] bool operator()(std::uint64_t features) const {
    const auto it = counts_.find(features);
    if (it == counts_.end()) return default_label_;
    return it->second[1] > it->second[0];
  }

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] std::size_t distinct_inputs() const noexcept { return counts_.size(); }
  [[nodiscard]] bool default_label() const noexcept { return default_label_; }

 private:
  int width_;
  bool default_label_ = false;
  std::unordered_map<std::uint64_t, std::array<std::size_t, 2>> counts_;
};

inline LookupTable lookup_table_baseline(const Dataset& train) { return LookupTable(train); }

/// Writes the four CSVs plus metadata.json into `out_dir` and returns the
/// metadata. `provenance` is embedded verbatim.
inline nlohmann::ordered_json write_dataset(const std::filesystem::path& out_dir,
                                            const DatasetConfig& config,
                                            const nlohmann::ordered_json& provenance = {},
                                            unsigned workers = default_workers()) {
  const GeneratedData data = generate(config, workers);
  std::filesystem::create_directories(out_dir);

  nlohmann::ordered_json meta;
  meta["format_version"] = kDatasetFormatVersion;
  meta["function"] = config.function_literal;
  meta["config"] = {{"function", config.function_literal}, {"n_bit", config.n_bit},
                    {"p", config.p},           {"n_train", config.n_train},
                    {"n_val", config.n_val},   {"seed", config.master_seed}};
  nlohmann::ordered_json files = nlohmann::ordered_json::object();
  std::string all_hashes;
  for (const Dataset* d : {&data.train_noiseless, &data.train_noisy, &data.val_noiseless,
                           &data.val_noisy}) {
    const std::string name =
        std::string(to_string(d->split)) + "_" + std::string(to_string(d->variant)) + ".csv";
    const std::string csv = to_csv(*d);
    write_file(out_dir / name, csv);
    const std::string hash = sha256_hex(csv);
    all_hashes += hash;
    files[name] = {{"rows", d->rows.size()}, {"sha256", hash}};
  }
  meta["files"] = files;
  meta["content_hash"] = sha256_hex(all_hashes);
  if (!provenance.is_null()) meta["provenance"] = provenance;
  write_file(out_dir / "metadata.json", meta.dump(2) + "\n");
  return meta;
}

}  // namespace nrbl
