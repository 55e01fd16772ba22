#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nrbl/format.hpp"
#include "nrbl/nrbl.hpp"

namespace nrbl::cli {
namespace {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Flags describing one noise channel; exactly one kind may be given.
struct NoiseFlags {
  std::vector<double> p;
  std::vector<double> rates;
  std::string distribution_file;

  void attach(CLI::App* app, bool allow_many_p) {
    auto* opt = app->add_option("--p", p, "iid bitflip rate")->delimiter(',');
    if (!allow_many_p) opt->expected(1);
    app->add_option("--p-vec", rates, "independent per-bit flip rates, comma separated")
        ->delimiter(',');
    app->add_option("--pe-file", distribution_file,
                    "file with 2^n whitespace-separated probabilities p_E(e), e = 0..2^n-1");
  }

  [[nodiscard]] std::vector<NoiseModel> models() const {
    const int kinds = !p.empty() + !rates.empty() + !distribution_file.empty();
    if (kinds != 1) throw Error("give exactly one of --p, --p-vec, --pe-file");
    std::vector<NoiseModel> out;
    if (!p.empty()) {
      for (double v : p) out.push_back(NoiseModel::iid(v));
    } else if (!rates.empty()) {
      out.push_back(NoiseModel::independent(rates));
    } else {
      std::istringstream in(read_file(distribution_file));
      std::vector<double> dist;
      double v = 0.0;
      while (in >> v) dist.push_back(v);
      if (!in.eof()) throw Error("cannot parse " + distribution_file);
      out.push_back(NoiseModel::general(std::move(dist)));
    }
    return out;
  }
};

Json noise_json(const NoiseModel& noise) {
  return std::visit(
      [](const auto& m) -> Json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IidNoise>) {
          return {{"kind", "iid"}, {"p", m.p}};
        } else if constexpr (std::is_same_v<T, IndependentNoise>) {
          return {{"kind", "independent"}, {"rates", m.rates}};
        } else {
          return {{"kind", "general"}, {"support", m.distribution.size()}};
        }
      },
      noise.variant());
}

std::string noise_label(const NoiseModel& noise) {
  if (noise.is_iid()) return format_double(noise.rate());
  return noise_json(noise).dump();
}

class Session {
 public:
  Session(const std::vector<std::string>& args, std::ostream& out) : out_(out) {
    command_line_ = "nrbl";
    for (const auto& a : args) command_line_ += " " + a;
  }

  void set_seed(std::uint64_t seed) { seed_ = seed; }

  [[nodiscard]] Json provenance() const {
    Json p;
    p["tool"] = "nrbl";
    p["version"] = kVersion;
    p["command_line"] = command_line_;
    p["seed"] = seed_ ? Json(*seed_) : Json(nullptr);
    return p;
  }

  void emit_json(Json body, const std::string& path) const {
    body["schema_version"] = kSchemaVersion;
    body["provenance"] = provenance();
    const std::string text = body.dump(2) + "\n";
    if (path.empty()) {
      out_ << text;
    } else {
      write_file(path, text);
    }
  }

  /// CSV goes to stdout, or to `path` plus a `<path>.meta.json` sidecar.
  void emit_csv(const std::string& csv, const std::string& path) const {
    if (path.empty()) {
      out_ << csv;
      return;
    }
    write_file(path, csv);
    write_sidecar(path);
  }

  void write_sidecar(const std::string& path) const {
    Json meta;
    meta["schema_version"] = kSchemaVersion;
    meta["file"] = std::filesystem::path(path).filename().string();
    meta["sha256"] = sha256_hex(read_file(path));
    meta["provenance"] = provenance();
    write_file(path + ".meta.json", meta.dump(2) + "\n");
  }

  [[nodiscard]] std::ostream& out() const { return out_; }

 private:
  std::ostream& out_;
  std::string command_line_;
  std::optional<std::uint64_t> seed_;
};

Json report_json(const std::string& literal, const BooleanFunction& f, const NoiseModel& noise,
                 const AnalysisReport& r) {
  Json j;
  j["function"] = literal;
  j["n"] = f.arity();
  j["noise"] = noise_json(noise);
  j["err_f_f"] = r.err_f_f;
  j["err_f_fnstar"] = r.err_f_fnstar;
  j["sens_f"] = r.sens_f;
  j["sens_fnstar"] = r.sens_fnstar;
  j["influences_f"] = r.influences_f;
  j["cond_entropy_bits"] = r.cond_entropy_bits;
  j["feder_lower"] = r.feder_lower;
  j["feder_upper"] = r.feder_upper;
  j["self_predicting"] = r.self_predicting;
  j["fnstar_tt"] = r.fnstar.to_hex();
  return j;
}

std::string csv_row(std::initializer_list<std::string> fields) {
  std::string row;
  for (const auto& f : fields) {
    if (!row.empty()) row += ',';
    row += f;
  }
  return row + '\n';
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(bool v) { return v ? "1" : "0"; }
template <class T>
  requires std::is_integral_v<T>
std::string fmt(T v) {
  return std::to_string(v);
}

std::string join_ints(const std::vector<int>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

struct Options {
  std::string function;
  std::string predictor;
  std::string format = "auto";
  std::string out;
  NoiseFlags noise;
  bool pointwise = false;
  std::string spectrum_out;

  double entropy = -1.0;
  int alphabet = 2;

  int n = 12;
  std::vector<double> p_list;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  unsigned workers = default_workers();

  std::size_t count = 3200;
  int n_total = 10;
  std::vector<int> k_choices = {5, 6, 7};
  std::vector<double> p_grid;

  std::vector<int> n_grid = {4, 5, 6, 7, 8};
  double max_err_gap = kDefaultMaxErrGap;
  double max_sens_ratio = kDefaultMaxSensRatio;

  std::string weight_string;
  double p_single = 0.0;
  std::size_t n_train = 10000;
  std::size_t n_val = 20000;
  int n_bit = 0;
  std::string out_dir;

  std::string data;
  std::string lookup_train;

  std::vector<double> ltf_weights;
  double rho = 0.0;
};

void cmd_analyze(const Options& o, const Session& s) {
  const BooleanFunction f = parse_exact_function(o.function);
  const auto models = o.noise.models();
  const bool csv = o.format == "csv" || (o.format == "auto" && models.size() > 1);
  if (!o.spectrum_out.empty()) {
    std::ostringstream spec;
    write_spectrum_csv(spec, fwht(f));
    s.emit_csv(spec.str(), o.spectrum_out);
  }
  if (!csv) {
    if (models.size() != 1) throw Error("JSON output takes a single noise model; use --format csv");
    s.emit_json(report_json(o.function, f, models[0], analyze(f, models[0])), o.out);
    return;
  }
  std::string text = csv_row({"function", "n", "p", "err_f_f", "err_f_fnstar", "sens_f",
                              "sens_fnstar", "cond_entropy_bits", "feder_lower", "feder_upper",
                              "self_predicting", "fnstar_tt"});
  for (const auto& noise : models) {
    const AnalysisReport r = analyze(f, noise);
    text += csv_row({o.function, fmt(f.arity()), noise_label(noise), fmt(r.err_f_f),
                     fmt(r.err_f_fnstar), fmt(r.sens_f), fmt(r.sens_fnstar),
                     fmt(r.cond_entropy_bits), fmt(r.feder_lower), fmt(r.feder_upper),
                     fmt(r.self_predicting), r.fnstar.to_hex()});
  }
  s.emit_csv(text, o.out);
}

void cmd_fnstar(const Options& o, const Session& s) {
  const BooleanFunction f = parse_exact_function(o.function);
  const NoiseModel noise = o.noise.models().at(0);
  const BooleanFunction g = optimal_predictor(f, noise);
  Json j;
  j["function"] = o.function;
  j["n"] = f.arity();
  j["noise"] = noise_json(noise);
  j["fnstar_tt"] = g.to_hex();
  j["function_tt"] = f.to_hex();
  j["equals_f"] = g == f;
  s.emit_json(j, o.out);
}

void cmd_sens(const Options& o, const Session& s) {
  const BooleanFunction f = parse_exact_function(o.function);
  const SensitivityProfile prof = sensitivity(f, o.pointwise);
  const FourierSpectrum spec = fwht(f);
  if (!o.spectrum_out.empty()) {
    std::ostringstream csv;
    write_spectrum_csv(csv, spec);
    s.emit_csv(csv.str(), o.spectrum_out);
  }
  Json j;
  j["function"] = o.function;
  j["n"] = f.arity();
  j["total"] = prof.total;
  j["total_fourier"] = total_influence_fourier(spec);
  j["per_bit"] = prof.per_bit;
  if (o.pointwise) j["pointwise"] = prof.pointwise;
  s.emit_json(j, o.out);
}

void cmd_err(const Options& o, const Session& s) {
  const BooleanFunction f = parse_exact_function(o.function);
  const BooleanFunction g = parse_exact_function(o.predictor);
  const NoiseModel noise = o.noise.models().at(0);
  Json j;
  j["function"] = o.function;
  j["predictor"] = o.predictor;
  j["noise"] = noise_json(noise);
  j["err"] = noisy_error(f, g, noise);
  j["noiseless_disagreement"] =
      static_cast<double>(f.hamming_distance(g)) / static_cast<double>(f.size());
  s.emit_json(j, o.out);
}

void cmd_bounds(const Options& o, const Session& s) {
  Json j;
  double h = o.entropy;
  if (!o.function.empty()) {
    if (h >= 0.0) throw Error("give either --entropy or --function, not both");
    const BooleanFunction f = parse_exact_function(o.function);
    const NoiseModel noise = o.noise.models().at(0);
    h = conditional_entropy(f, noise);
    j["function"] = o.function;
    j["noise"] = noise_json(noise);
    j["err_f_fnstar"] = noisy_error(f, optimal_predictor(f, noise), noise);
  } else if (h < 0.0) {
    throw Error("bounds needs --entropy or --function");
  }
  const FederBounds b = feder_bounds(h, o.alphabet);
  j["entropy_bits"] = h;
  j["alphabet"] = o.alphabet;
  j["lower"] = b.lower;
  j["upper"] = b.upper;
  s.emit_json(j, o.out);
}

void cmd_prop2(const Options& o, const Session& s) {
  const Stream master(o.seed);
  std::string text = csv_row({"n", "p", "samples", "mean_sens_fnstar", "std_err", "theory",
                              "mean_sens_f", "std_err_f", "violations"});
  for (double p : o.p_list) {
    const Prop2Estimate e = prop2_monte_carlo(o.n, p, o.samples, master, o.workers);
    text += csv_row({fmt(e.n), fmt(e.p), fmt(e.samples), fmt(e.mean_sens_fnstar), fmt(e.std_err),
                     fmt(e.theory), fmt(e.mean_sens_f), fmt(e.std_err_f), fmt(e.violations)});
  }
  s.emit_csv(text, o.out);
}

void cmd_junta_scan(const Options& o, const Session& s) {
  JuntaScanConfig config;
  config.count = o.count;
  config.n_total = o.n_total;
  config.k_choices = o.k_choices;
  if (!o.p_grid.empty()) config.p_grid = o.p_grid;

  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out, std::ios::binary);
    if (!file) throw Error("cannot write " + o.out);
  }
  std::ostream& sink = o.out.empty() ? s.out() : file;
  sink << csv_row({"function_id", "k", "p", "subset", "inner_tt", "sens_f", "sens_fnstar",
                   "err_f_f", "err_f_fnstar"});
  junta_scan(
      config, Stream(o.seed),
      [&](const ScatterRecord& r) {
        sink << csv_row({fmt(r.function_id), fmt(r.k), fmt(r.p), join_ints(r.junta.subset, ' '),
                         r.junta.inner.to_hex(), fmt(r.sens_f), fmt(r.sens_fnstar),
                         fmt(r.err_f_f), fmt(r.err_f_fnstar)});
      },
      o.workers);
  if (!o.out.empty()) {
    file.close();
    s.write_sidecar(o.out);
  }
}

void cmd_trap_search(const Options& o, const Session& s) {
  TrapSearchConfig config;
  config.n_grid = o.n_grid;
  if (!o.p_grid.empty()) config.p_grid = o.p_grid;
  config.max_err_gap = o.max_err_gap;
  config.max_sens_ratio = o.max_sens_ratio;
  std::string text = csv_row({"n", "p", "s", "fnstar", "err_f", "err_fnstar", "sens_f",
                              "sens_fnstar", "err_gap", "sens_ratio"});
  for (const auto& c : trap_search(config, o.workers)) {
    text += csv_row({fmt(c.n), fmt(c.p), c.s, c.fnstar, fmt(c.err_f), fmt(c.err_fnstar),
                     fmt(c.sens_f), fmt(c.sens_fnstar), fmt(c.err_gap), fmt(c.sens_ratio)});
  }
  s.emit_csv(text, o.out);
}

void cmd_trap_vet(const Options& o, const Session& s) {
  const TrapCandidate c =
      evaluate_weight_function(WeightFunction::from_string(o.weight_string), o.p_single);
  const VettingResult v = finite_sample_vetting(c, o.n_train, o.n_val, o.seed, o.workers);
  Json j;
  j["n"] = c.n;
  j["p"] = c.p;
  j["s"] = c.s;
  j["fnstar"] = c.fnstar;
  j["err_f"] = c.err_f;
  j["err_fnstar"] = c.err_fnstar;
  j["sens_f"] = c.sens_f;
  j["sens_fnstar"] = c.sens_fnstar;
  j["n_train"] = o.n_train;
  j["n_val"] = o.n_val;
  j["lookup_train_acc"] = v.lookup_train_acc;
  j["lookup_val_acc"] = v.lookup_val_acc;
  j["optimal_acc"] = v.optimal_acc;
  j["target_acc"] = v.target_acc;
  s.emit_json(j, o.out);
}

void cmd_gen_data(const Options& o, const Session& s) {
  DatasetConfig config;
  config.function_literal = o.function;
  config.n_bit = o.n_bit;
  config.p = o.p_single;
  config.n_train = o.n_train;
  config.n_val = o.n_val;
  config.master_seed = o.seed;
  Json meta = write_dataset(o.out_dir, config, s.provenance(), o.workers);
  Json summary;
  summary["out_dir"] = o.out_dir;
  summary["content_hash"] = meta["content_hash"];
  summary["files"] = meta["files"];
  s.emit_json(summary, "");
}

void cmd_eval_data(const Options& o, const Session& s) {
  const Dataset d = read_dataset_csv(o.data);
  Json j;
  j["data"] = std::filesystem::path(o.data).filename().string();
  j["rows"] = d.rows.size();
  double error = 0.0;
  if (!o.lookup_train.empty()) {
    if (!o.function.empty()) throw Error("give either --function or --lookup-train, not both");
    const Dataset train = read_dataset_csv(o.lookup_train);
    if (train.width != d.width) throw Error("lookup training set width differs from data");
    error = empirical_error(d, lookup_table_baseline(train));
    j["predictor"] = "lookup:" + std::filesystem::path(o.lookup_train).filename().string();
  } else {
    if (o.function.empty()) throw Error("eval-data needs --function or --lookup-train");
    error = empirical_error(d, parse_function(o.function));
    j["predictor"] = o.function;
  }
  j["error"] = error;
  j["accuracy"] = 1.0 - error;
  s.emit_json(j, o.out);
}

void cmd_ltf_check(const Options& o, const Session& s) {
  if (o.ltf_weights.size() < 2) throw Error("--weights needs a0 and at least one a_i");
  LTFSpec spec;
  spec.a0 = o.ltf_weights[0];
  spec.a.assign(o.ltf_weights.begin() + 1, o.ltf_weights.end());
  const LtfCheck c = ltf_counterexample_check(spec, o.rho);
  Json j;
  j["weights"] = o.ltf_weights;
  j["rho"] = o.rho;
  j["function_tt"] = expand_ltf(spec).to_hex();
  j["sens_f"] = c.sens_f;
  j["sens_fnstar"] = c.sens_fnstar;
  j["violates"] = c.violates;
  s.emit_json(j, o.out);
}

void emit_error(std::ostream& err, const char* kind, const std::string& message) {
  Json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  err << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and Monte-Carlo analysis of boolean functions under feature noise", "nrbl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Options o;
  Session session(args, out);

  auto add_format = [&](CLI::App* c, bool with_format) {
    c->add_option("--out", o.out, "output file (default: standard output)");
    if (with_format) {
      c->add_option("--format", o.format, "json or csv (default: json, csv for sweeps)")
          ->check(CLI::IsMember({"auto", "json", "csv"}));
    }
  };
  auto add_workers = [&](CLI::App* c) {
    c->add_option("--workers", o.workers, "worker threads (results do not depend on this)")
        ->check(CLI::PositiveNumber);
  };

  auto* analyze = app.add_subcommand("analyze", "full noisy-prediction report for one function");
  analyze->add_option("--function", o.function, "function literal")->required();
  o.noise.attach(analyze, true);
  analyze->add_option("--spectrum-out", o.spectrum_out, "also write the Fourier spectrum CSV");
  add_format(analyze, true);

  auto* fnstar = app.add_subcommand("fnstar", "truth table of the optimal noisy predictor");
  fnstar->add_option("--function", o.function, "function literal")->required();
  o.noise.attach(fnstar, false);
  add_format(fnstar, false);

  auto* sens = app.add_subcommand("sens", "sensitivity and influences");
  sens->add_option("--function", o.function, "function literal")->required();
  sens->add_flag("--pointwise", o.pointwise, "include s(f, x) for every x");
  sens->add_option("--spectrum-out", o.spectrum_out, "also write the Fourier spectrum CSV");
  add_format(sens, false);

  auto* err_cmd = app.add_subcommand("err", "exact noisy error err_f(g)");
  err_cmd->add_option("--function", o.function, "label function f")->required();
  err_cmd->add_option("--predictor", o.predictor, "predictor g")->required();
  o.noise.attach(err_cmd, false);
  add_format(err_cmd, false);

  auto* bounds = app.add_subcommand("bounds", "Feder/Fano error bounds from an entropy");
  bounds->add_option("--entropy", o.entropy, "conditional entropy in bits");
  bounds->add_option("--alphabet", o.alphabet, "alphabet size N")->check(CLI::Range(2, 1 << 20));
  bounds->add_option("--function", o.function, "compute H(Y|Z) for this function instead");
  o.noise.attach(bounds, false);
  add_format(bounds, false);

  auto* prop2 = app.add_subcommand("prop2", "random-function sens[f_N*] vs the arccos law");
  prop2->add_option("--n", o.n, "arity")->required();
  prop2->add_option("--p", o.p_list, "bitflip rates")->required()->delimiter(',');
  prop2->add_option("--samples", o.samples, "random functions per rate")->required();
  prop2->add_option("--seed", o.seed, "master seed")->required();
  add_workers(prop2);
  add_format(prop2, false);

  auto* scan = app.add_subcommand("junta-scan", "analytics for random k-juntas (CSV)");
  scan->add_option("--count", o.count, "number of juntas");
  scan->add_option("--n-total", o.n_total, "ambient width");
  scan->add_option("--k", o.k_choices, "junta sizes to draw from")->delimiter(',');
  scan->add_option("--p-grid", o.p_grid, "bitflip rates to draw from")->delimiter(',');
  scan->add_option("--seed", o.seed, "master seed")->required();
  add_workers(scan);
  add_format(scan, false);

  auto* trap = app.add_subcommand("trap-search", "search weight-based functions for traps (CSV)");
  trap->add_option("--n-grid", o.n_grid, "arities")->delimiter(',');
  trap->add_option("--p-grid", o.p_grid, "bitflip rates")->delimiter(',');
  trap->add_option("--max-err-gap", o.max_err_gap, "keep err_f(f) - err_f(f_N*) <= this");
  trap->add_option("--max-sens-ratio", o.max_sens_ratio, "keep sens[f_N*] / sens[f] <= this");
  add_workers(trap);
  add_format(trap, false);

  auto* vet = app.add_subcommand("trap-vet", "lookup-table accuracies on finite samples");
  vet->add_option("--s", o.weight_string, "weight string, n + 1 characters")->required();
  vet->add_option("--p", o.p_single, "bitflip rate")->required();
  vet->add_option("--n-train", o.n_train, "training rows");
  vet->add_option("--n-val", o.n_val, "validation rows");
  vet->add_option("--seed", o.seed, "master seed")->required();
  add_workers(vet);
  add_format(vet, false);

  auto* gen = app.add_subcommand("gen-data", "write noisy/noiseless train/val CSVs");
  gen->add_option("--function", o.function, "function literal")->required();
  gen->add_option("--n-bit", o.n_bit, "record width including the label bit")->required();
  gen->add_option("--p", o.p_single, "bitflip rate")->required();
  gen->add_option("--n-train", o.n_train, "training rows")->required();
  gen->add_option("--n-val", o.n_val, "validation rows")->required();
  gen->add_option("--seed", o.seed, "master seed")->required();
  gen->add_option("--out-dir", o.out_dir, "output directory")->required();
  add_workers(gen);

  auto* eval = app.add_subcommand("eval-data", "empirical error of a predictor on a dataset CSV");
  eval->add_option("--data", o.data, "dataset CSV")->required();
  eval->add_option("--function", o.function, "predictor literal");
  eval->add_option("--lookup-train", o.lookup_train, "fit a lookup table on this CSV instead");
  add_format(eval, false);

  auto* ltf = app.add_subcommand("ltf-check", "sens[f] vs sens[sign(T_rho f)] for an LTF");
  ltf->add_option("--weights", o.ltf_weights, "a0,a1,...,an")->required()->delimiter(',');
  ltf->add_option("--rho", o.rho, "noise correlation")->required();
  add_format(ltf, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    emit_error(err, "parse", e.what());
    return kParseError;
  }

  for (auto* sub : {prop2, scan, vet, gen}) {
    if (sub->parsed()) session.set_seed(o.seed);
  }

  try {
    if (analyze->parsed()) cmd_analyze(o, session);
    if (fnstar->parsed()) cmd_fnstar(o, session);
    if (sens->parsed()) cmd_sens(o, session);
    if (err_cmd->parsed()) cmd_err(o, session);
    if (bounds->parsed()) cmd_bounds(o, session);
    if (prop2->parsed()) cmd_prop2(o, session);
    if (scan->parsed()) cmd_junta_scan(o, session);
    if (trap->parsed()) cmd_trap_search(o, session);
    if (vet->parsed()) cmd_trap_vet(o, session);
    if (gen->parsed()) cmd_gen_data(o, session);
    if (eval->parsed()) cmd_eval_data(o, session);
    if (ltf->parsed()) cmd_ltf_check(o, session);
  } catch (const Error& e) {
    emit_error(err, "domain", e.what());
    return kDomainError;
  } catch (const std::exception& e) {
    emit_error(err, "io", e.what());
    return kDomainError;
  }
  return kOk;
}

}  // namespace nrbl::cli
