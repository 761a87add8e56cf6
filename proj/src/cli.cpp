#include "letcc/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "letcc/baselines.hpp"
#include "letcc/coding.hpp"
#include "letcc/errors.hpp"
#include "letcc/experiments.hpp"
#include "letcc/matrix_io.hpp"
#include "letcc/report.hpp"
#include "letcc/sim.hpp"

namespace letcc {
namespace {

using nlohmann::json;

/// Reads typed fields out of a JSON object and remembers which keys were
/// used, so leftovers can be reported as unknown.
class ConfigReader {
 public:
  explicit ConfigReader(json j) : j_(std::move(j)) {
    if (!j_.is_object()) throw InvalidArgument("config: top level must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  std::optional<std::string> str(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw type_error(key, "a string");
    return v->get<std::string>();
  }
  std::optional<std::size_t> count(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_number_unsigned()) throw type_error(key, "a nonnegative integer");
    return v->get<std::size_t>();
  }
  std::optional<std::uint64_t> u64(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_number_unsigned()) throw type_error(key, "a nonnegative integer");
    return v->get<std::uint64_t>();
  }
  std::optional<double> number(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) throw type_error(key, "a number");
    return v->get<double>();
  }
  std::optional<std::vector<double>> numbers(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_array()) throw type_error(key, "an array of numbers");
    std::vector<double> out;
    for (const auto& e : *v) {
      if (!e.is_number()) throw type_error(key, "an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  std::optional<std::vector<std::size_t>> counts(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_array()) throw type_error(key, "an array of nonnegative integers");
    std::vector<std::size_t> out;
    for (const auto& e : *v) {
      if (!e.is_number_unsigned()) throw type_error(key, "an array of nonnegative integers");
      out.push_back(e.get<std::size_t>());
    }
    return out;
  }
  std::optional<std::vector<std::string>> strings(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_array()) throw type_error(key, "an array of strings");
    std::vector<std::string> out;
    for (const auto& e : *v) {
      if (!e.is_string()) throw type_error(key, "an array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw InvalidArgument("config: unknown key '" + key + "'");
    }
  }

 private:
  const json* take(const std::string& key) {
    used_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  static InvalidArgument type_error(const std::string& key, const std::string& what) {
    return InvalidArgument("config: '" + key + "' must be " + what);
  }

  json j_;
  std::set<std::string> used_;
};

ConfigReader load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path);
  try {
    return ConfigReader(json::parse(in));
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config " + path + ": " + e.what());
  }
}

StragglerMode parse_straggler_mode(const std::string& s) {
  if (s == "uniform") return StragglerMode::kExactlyUniform;
  if (s == "fixed_set") return StragglerMode::kFixedSet;
  throw InvalidArgument("straggler_mode must be 'uniform' or 'fixed_set'");
}

DataMode parse_data_mode(const std::string& s) {
  if (s == "per_trial") return DataMode::kPerTrial;
  if (s == "fixed") return DataMode::kFixed;
  throw InvalidArgument("data_mode must be 'per_trial' or 'fixed'");
}

template <class T>
void assign(T& dst, std::optional<T> v) {
  if (v) dst = std::move(*v);
}

/// Options shared by every subcommand.
struct GlobalOptions {
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::string out;
  std::size_t threads = 1;
  std::vector<std::string> formats;

  bool has_seed() const { return seed_opt && seed_opt->count() > 0; }
  std::size_t resolved_threads() const {
    if (threads != 0) return threads;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
  bool wants(const std::string& f) const {
    return formats.empty() || std::find(formats.begin(), formats.end(), f) != formats.end();
  }
};

/// Flags that override the shared experiment settings.
struct SettingsFlags {
  std::string f;
  std::size_t d = 0, m = 0, k = 0, trials = 0;
  double sigma0 = 0.0, lambda_e = 0.0;
  CLI::Option *f_opt = nullptr, *d_opt = nullptr, *m_opt = nullptr, *k_opt = nullptr,
              *trials_opt = nullptr, *sigma0_opt = nullptr, *lambda_e_opt = nullptr;

  void add_to(CLI::App* app) {
    f_opt = app->add_option("--f", f, "worker function");
    d_opt = app->add_option("--d", d, "input dimension");
    m_opt = app->add_option("--m", m, "output dimension (mlp)");
    k_opt = app->add_option("--k", k, "batch size K");
    trials_opt = app->add_option("--trials", trials, "Monte-Carlo trials per point");
    sigma0_opt = app->add_option("--sigma0", sigma0, "worker noise standard deviation");
    lambda_e_opt = app->add_option("--lambda-e", lambda_e, "encoder smoothing parameter");
  }
  void apply(ExperimentSettings& s) const {
    if (f_opt->count()) s.function = f;
    if (d_opt->count()) s.d = d;
    if (m_opt->count()) s.m = m;
    if (k_opt->count()) s.k = k;
    if (trials_opt->count()) s.trials = trials;
    if (sigma0_opt->count()) s.sigma0 = sigma0;
    if (lambda_e_opt->count()) s.lambda_e = lambda_e;
  }
};

void read_settings(ConfigReader& c, ExperimentSettings& s) {
  assign(s.function, c.str("f"));
  assign(s.d, c.count("d"));
  assign(s.m, c.count("m"));
  assign(s.k, c.count("k"));
  assign(s.sigma0, c.number("sigma0"));
  assign(s.lambda_e, c.number("lambda_e"));
  if (auto r = c.str("lambda_rule")) s.lambda_rule = parse_lambda_rule(*r);
  assign(s.lambda_d, c.number("lambda_d"));
  assign(s.lambda_d_grid, c.numbers("lambda_d_grid"));
  if (auto v = c.count("f_degree")) s.f_degree = *v;
  if (auto v = c.str("straggler_mode")) s.straggler_mode = parse_straggler_mode(*v);
  if (auto v = c.str("data_mode")) s.data_mode = parse_data_mode(*v);
  assign(s.trials, c.count("trials"));
  assign(s.seed, c.u64("seed"));
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path.string());
  f << content;
  if (!f) throw InvalidArgument("failed writing " + path.string());
}

std::filesystem::path output_dir(const GlobalOptions& g) {
  std::filesystem::path dir = g.out.empty() ? std::filesystem::path(".") : std::filesystem::path(g.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InvalidArgument("cannot create output directory " + dir.string());
  return dir;
}

void require_formats(const GlobalOptions& g, std::initializer_list<const char*> allowed,
                     const std::string& what) {
  for (const auto& f : g.formats) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return f == a; })) {
      throw InvalidArgument("--format " + f + " is not available for " + what);
    }
  }
}

// ---- trial ---------------------------------------------------------------

struct TrialFlags {
  std::string config, scheme, f;
  std::size_t k = 0, n = 0, s = 0, d = 0, m = 0, f_degree = 0;
  double sigma0 = 0.0, lambda_e = 0.0, lambda_d = 0.0;
  std::string straggler_mode, data_mode;
  CLI::Option *config_opt, *scheme_opt, *f_opt, *k_opt, *n_opt, *s_opt, *d_opt, *m_opt,
      *f_degree_opt, *sigma0_opt, *lambda_e_opt, *lambda_d_opt, *straggler_mode_opt,
      *data_mode_opt;
};

int cmd_trial(const TrialFlags& t, const GlobalOptions& g, std::ostream& out,
              std::ostream& err, const std::string& usage) {
  require_formats(g, {"json"}, "trial");
  std::string scheme = "letcc", f = "sin_pi", smode = "uniform", dmode = "per_trial";
  std::size_t k = 16, s = 0, d = 1, m = 0;
  std::optional<std::size_t> n, f_degree;
  double sigma0 = 0.0, lambda_e = 0.0, lambda_d = 0.0;
  std::uint64_t seed = 0;

  if (t.config_opt->count()) {
    auto c = load_config(t.config);
    if (auto kind = c.str("kind"); kind && *kind != "trial") {
      throw InvalidArgument("trial: config kind must be 'trial'");
    }
    assign(scheme, c.str("scheme"));
    assign(f, c.str("f"));
    assign(k, c.count("k"));
    if (auto v = c.count("n")) n = *v;
    assign(s, c.count("s"));
    assign(d, c.count("d"));
    assign(m, c.count("m"));
    if (auto v = c.count("f_degree")) f_degree = *v;
    assign(sigma0, c.number("sigma0"));
    assign(lambda_e, c.number("lambda_e"));
    assign(lambda_d, c.number("lambda_d"));
    assign(smode, c.str("straggler_mode"));
    assign(dmode, c.str("data_mode"));
    assign(seed, c.u64("seed"));
    c.reject_unknown();
  }
  if (t.scheme_opt->count()) scheme = t.scheme;
  if (t.f_opt->count()) f = t.f;
  if (t.k_opt->count()) k = t.k;
  if (t.n_opt->count()) n = t.n;
  if (t.s_opt->count()) s = t.s;
  if (t.d_opt->count()) d = t.d;
  if (t.m_opt->count()) m = t.m;
  if (t.f_degree_opt->count()) f_degree = t.f_degree;
  if (t.sigma0_opt->count()) sigma0 = t.sigma0;
  if (t.lambda_e_opt->count()) lambda_e = t.lambda_e;
  if (t.lambda_d_opt->count()) lambda_d = t.lambda_d;
  if (t.straggler_mode_opt->count()) smode = t.straggler_mode;
  if (t.data_mode_opt->count()) dmode = t.data_mode;
  if (g.has_seed()) seed = g.seed;

  if (!n) {
    err << "trial: --n is required\n" << usage;
    return kExitConfigError;
  }
  if (s >= *n) throw InvalidArgument("trial: --s must be smaller than --n");

  TrialConfig cfg;
  cfg.scheme = parse_scheme(scheme);
  cfg.function = make_worker_function(f, d, m);
  cfg.k = k;
  cfg.n = *n;
  cfg.s = s;
  cfg.sigma0 = sigma0;
  cfg.lambda_e = lambda_e;
  cfg.lambda_d = lambda_d;
  cfg.f_degree = f_degree;
  cfg.straggler_mode = parse_straggler_mode(smode);
  cfg.data_mode = parse_data_mode(dmode);
  cfg.master_seed = seed;
  const TrialMetrics metrics = run_trial(cfg, seed);
  const std::string report = trial_json(cfg, metrics);
  if (!g.out.empty()) {
    write_file(output_dir(g) / "trial.json", report);
  } else {
    out << report;
  }
  return kExitOk;
}

// ---- sweep / crossval ------------------------------------------------------

void run_sweep_n(ConfigReader& c, ExperimentSettings settings, const GlobalOptions& g) {
  require_formats(g, {"csv", "json", "svg"}, "sweep_n");
  SweepConfig cfg;
  cfg.settings = std::move(settings);
  if (auto v = c.strings("schemes")) {
    cfg.schemes.clear();
    for (const auto& s : *v) cfg.schemes.push_back(parse_scheme(s));
    if (cfg.schemes.empty()) throw InvalidArgument("sweep: 'schemes' must not be empty");
  }
  auto n_values = c.counts("n_values");
  if (!n_values || n_values->empty()) throw InvalidArgument("sweep: 'n_values' must be a non-empty list");
  cfg.n_values = *n_values;
  const auto s = c.count("s");
  const auto ratio = c.number("s_ratio");
  if (s && ratio) throw InvalidArgument("sweep: give either 's' or 's_ratio', not both");
  if (ratio) cfg.s_rule = {true, *ratio};
  else if (s) cfg.s_rule = {false, static_cast<double>(*s)};
  c.reject_unknown();

  const SlopeReport report = sweep_n(cfg);
  const auto dir = output_dir(g);
  if (g.wants("csv")) write_file(dir / "sweep.csv", sweep_csv(cfg, report));
  if (g.wants("json")) write_file(dir / "sweep.json", sweep_json(cfg, report));
  if (g.wants("svg")) write_file(dir / "sweep.svg", sweep_svg(cfg, report));
}

void run_straggler_sweep(ConfigReader& c, ExperimentSettings settings, const GlobalOptions& g) {
  require_formats(g, {"csv", "json"}, "straggler_sweep");
  StragglerSweepConfig cfg;
  cfg.settings = std::move(settings);
  assign(cfg.n, c.count("n"));
  auto s_values = c.counts("s_values");
  if (!s_values || s_values->empty()) throw InvalidArgument("sweep: 's_values' must be a non-empty list");
  cfg.s_values = *s_values;
  c.reject_unknown();

  const auto rows = straggler_sweep(cfg);
  const auto dir = output_dir(g);
  if (g.wants("csv")) write_file(dir / "stragglers.csv", straggler_csv(cfg, rows));
  if (g.wants("json")) write_file(dir / "stragglers.json", straggler_json(cfg, rows));
}

CrossvalConfig read_crossval(ConfigReader& c, ExperimentSettings settings) {
  CrossvalConfig cfg;
  cfg.settings = std::move(settings);
  assign(cfg.n, c.count("n"));
  assign(cfg.s, c.count("s"));
  assign(cfg.lambda_e_grid, c.numbers("lambda_e_grid"));
  cfg.lambda_d_grid = cfg.settings.lambda_d_grid;
  return cfg;
}

void emit_crossval(const CrossvalConfig& cfg, const GlobalOptions& g, std::ostream& out,
                   bool to_stdout) {
  require_formats(g, {"csv", "json"}, "crossval");
  const CrossvalResult result = crossval_lambda(cfg);
  if (to_stdout) {
    out << (g.formats.size() == 1 && g.formats[0] == "csv" ? crossval_scores_csv(result)
                                                           : crossval_json(cfg, result));
    return;
  }
  const auto dir = output_dir(g);
  if (g.wants("csv")) write_file(dir / "crossval.csv", crossval_scores_csv(result));
  if (g.wants("json")) write_file(dir / "crossval.json", crossval_json(cfg, result));
}

int cmd_sweep(const std::string& config_path, const SettingsFlags& flags,
              const GlobalOptions& g, std::ostream& out) {
  auto c = load_config(config_path);
  const auto kind = c.str("kind");
  if (!kind) throw InvalidArgument("sweep: config needs 'kind' (sweep_n, straggler_sweep or crossval)");
  ExperimentSettings settings;
  read_settings(c, settings);
  flags.apply(settings);
  if (g.has_seed()) settings.seed = g.seed;
  settings.threads = g.resolved_threads();

  if (*kind == "sweep_n") {
    run_sweep_n(c, std::move(settings), g);
  } else if (*kind == "straggler_sweep") {
    run_straggler_sweep(c, std::move(settings), g);
  } else if (*kind == "crossval") {
    auto cfg = read_crossval(c, std::move(settings));
    c.reject_unknown();
    emit_crossval(cfg, g, out, false);
  } else {
    throw InvalidArgument("sweep: unknown kind '" + *kind + "'");
  }
  return kExitOk;
}

struct CrossvalFlags {
  std::string config;
  CLI::Option* config_opt = nullptr;
  std::size_t n = 0, s = 0;
  CLI::Option *n_opt = nullptr, *s_opt = nullptr;
};

int cmd_crossval(const CrossvalFlags& cf, const SettingsFlags& flags, const GlobalOptions& g,
                 std::ostream& out) {
  ExperimentSettings settings;
  CrossvalConfig cfg;
  if (cf.config_opt->count()) {
    auto c = load_config(cf.config);
    if (auto kind = c.str("kind"); kind && *kind != "crossval") {
      throw InvalidArgument("crossval: config kind must be 'crossval'");
    }
    read_settings(c, settings);
    cfg = read_crossval(c, settings);
    c.reject_unknown();
  }
  flags.apply(cfg.settings);
  if (cf.n_opt->count()) cfg.n = cf.n;
  if (cf.s_opt->count()) cfg.s = cf.s;
  if (g.has_seed()) cfg.settings.seed = g.seed;
  cfg.settings.threads = g.resolved_threads();
  emit_crossval(cfg, g, out, g.out.empty());
  return kExitOk;
}

// ---- codec -----------------------------------------------------------------

struct CodecFlags {
  std::string in, scheme = "letcc";
  std::size_t k = 0, n = 0, f_degree = 0;
  double lambda = 0.0;
  std::vector<std::size_t> stragglers;
  CLI::Option *k_opt = nullptr, *n_opt = nullptr, *f_degree_opt = nullptr;
};

void emit_matrix(const Matrix& m, const GlobalOptions& g, std::ostream& out) {
  if (g.out.empty()) {
    write_matrix(out, m);
  } else {
    write_file(g.out, format_matrix(m));
  }
}

int cmd_encode(const CodecFlags& cf, const GlobalOptions& g, std::ostream& out) {
  const Dataset data(read_matrix_file(cf.in));
  if (cf.k_opt->count() && cf.k != data.k()) {
    throw InvalidArgument("codec encode: --k does not match the number of data rows");
  }
  const auto grid = InterpolationGrid::chebyshev(data.k(), cf.n);
  CodedBatch batch;
  switch (parse_scheme(cf.scheme)) {
    case Scheme::kLeTCC: batch = encode(data, grid, cf.lambda); break;
    case Scheme::kBACC: batch = bacc_encode(data, grid); break;
    case Scheme::kLCC: batch = lcc_encode(data, grid); break;
  }
  emit_matrix(batch.coded, g, out);
  return kExitOk;
}

int cmd_decode(const CodecFlags& cf, const GlobalOptions& g, std::ostream& out) {
  const Matrix all = read_matrix_file(cf.in);
  const auto n = static_cast<std::size_t>(all.rows());
  if (cf.n_opt->count() && cf.n != n) {
    throw InvalidArgument("codec decode: --n does not match the number of worker rows");
  }
  const std::set<std::size_t> dropped(cf.stragglers.begin(), cf.stragglers.end());
  for (auto s : dropped) {
    if (s >= n) throw InvalidArgument("codec decode: straggler index out of range");
  }
  WorkerReturns returns;
  returns.outputs.resize(static_cast<Eigen::Index>(n - dropped.size()), all.cols());
  for (std::size_t i = 0, r = 0; i < n; ++i) {
    if (dropped.count(i)) continue;
    returns.workers.push_back(i);
    returns.outputs.row(static_cast<Eigen::Index>(r++)) = all.row(static_cast<Eigen::Index>(i));
  }
  const auto grid = InterpolationGrid::chebyshev(cf.k, n);
  DecodeResult dec;
  switch (parse_scheme(cf.scheme)) {
    case Scheme::kLeTCC: dec = decode(returns, grid, cf.lambda); break;
    case Scheme::kBACC: dec = bacc_decode(returns, grid); break;
    case Scheme::kLCC:
      if (!cf.f_degree_opt->count()) throw InvalidArgument("codec decode: lcc needs --f-degree");
      dec = lcc_decode(returns, grid, cf.f_degree);
      break;
  }
  emit_matrix(dec.estimates, g, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learning-theoretic coded computing: simulation, experiments and codecs", "letcc"};
  app.require_subcommand(1);

  GlobalOptions g;
  g.seed_opt = app.add_option("--seed", g.seed, "master seed");
  app.add_option("--out", g.out,
                 "output directory (sweep, crossval, trial) or file (codec)");
  app.add_option("--threads", g.threads, "worker threads, 0 = hardware concurrency");
  app.add_option("--format", g.formats, "output formats to write")
      ->check(CLI::IsMember({"csv", "json", "svg"}))
      ->delimiter(',');

  TrialFlags t;
  auto* trial = app.add_subcommand("trial", "run one trial and print its metrics as JSON");
  trial->fallthrough();
  t.config_opt = trial->add_option("--config", t.config, "JSON trial config");
  t.scheme_opt = trial->add_option("--scheme", t.scheme, "letcc, bacc or lcc");
  t.f_opt = trial->add_option("--f", t.f, "worker function");
  t.k_opt = trial->add_option("--k", t.k, "batch size K");
  t.n_opt = trial->add_option("--n", t.n, "number of workers N");
  t.s_opt = trial->add_option("--s", t.s, "number of stragglers S");
  t.d_opt = trial->add_option("--d", t.d, "input dimension");
  t.m_opt = trial->add_option("--m", t.m, "output dimension (mlp)");
  t.f_degree_opt = trial->add_option("--f-degree", t.f_degree, "polynomial degree for lcc");
  t.sigma0_opt = trial->add_option("--sigma0", t.sigma0, "worker noise standard deviation");
  t.lambda_e_opt = trial->add_option("--lambda-e", t.lambda_e, "encoder smoothing parameter");
  t.lambda_d_opt = trial->add_option("--lambda-d", t.lambda_d, "decoder smoothing parameter");
  t.straggler_mode_opt =
      trial->add_option("--straggler-mode", t.straggler_mode, "uniform or fixed_set");
  t.data_mode_opt = trial->add_option("--data-mode", t.data_mode, "per_trial or fixed");

  std::string sweep_config;
  SettingsFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "run an experiment config, write reports to --out");
  sweep->fallthrough();
  sweep->add_option("config", sweep_config, "JSON experiment config")->required();
  sweep_flags.add_to(sweep);

  CrossvalFlags cf;
  SettingsFlags cv_flags;
  auto* crossval = app.add_subcommand("crossval", "grid-search the smoothing parameters");
  crossval->fallthrough();
  cf.config_opt = crossval->add_option("--config", cf.config, "JSON crossval config");
  cf.n_opt = crossval->add_option("--n", cf.n, "number of workers N");
  cf.s_opt = crossval->add_option("--s", cf.s, "number of stragglers S");
  cv_flags.add_to(crossval);

  auto* codec = app.add_subcommand("codec", "encode or decode matrix files");
  codec->fallthrough();
  codec->require_subcommand(1);
  CodecFlags enc_flags, dec_flags;
  auto* enc = codec->add_subcommand("encode", "data file (K rows) to coded file (N rows)");
  enc->fallthrough();
  enc->add_option("input", enc_flags.in, "data matrix file")->required();
  enc_flags.n_opt = enc->add_option("--n", enc_flags.n, "number of workers N")->required();
  enc_flags.k_opt = enc->add_option("--k", enc_flags.k, "expected batch size K");
  enc->add_option("--scheme", enc_flags.scheme, "letcc, bacc or lcc");
  enc->add_option("--lambda-e", enc_flags.lambda, "encoder smoothing parameter");
  auto* dec = codec->add_subcommand("decode", "worker outputs (N rows) to estimates (K rows)");
  dec->fallthrough();
  dec->add_option("input", dec_flags.in, "worker output matrix file")->required();
  dec_flags.k_opt = dec->add_option("--k", dec_flags.k, "batch size K")->required();
  dec_flags.n_opt = dec->add_option("--n", dec_flags.n, "expected number of workers N");
  dec->add_option("--stragglers", dec_flags.stragglers, "worker rows to drop")->delimiter(',');
  dec->add_option("--scheme", dec_flags.scheme, "letcc, bacc or lcc");
  dec->add_option("--lambda-d", dec_flags.lambda, "decoder smoothing parameter");
  dec_flags.f_degree_opt = dec->add_option("--f-degree", dec_flags.f_degree, "polynomial degree for lcc");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitConfigError;
  }

  std::string usage;
  try {
    if (*trial) {
      usage = trial->help();
      return cmd_trial(t, g, out, err, usage);
    }
    if (*sweep) {
      usage = sweep->help();
      return cmd_sweep(sweep_config, sweep_flags, g, out);
    }
    if (*crossval) {
      usage = crossval->help();
      return cmd_crossval(cf, cv_flags, g, out);
    }
    if (*enc) {
      usage = enc->help();
      return cmd_encode(enc_flags, g, out);
    }
    usage = dec->help();
    return cmd_decode(dec_flags, g, out);
  } catch (const DecodeFailure& e) {
    err << "decode failure: " << e.what() << "\n";
    return kExitDecodeFailure;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitDecodeFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n" << usage;
    return kExitConfigError;
  }
}

}  // namespace letcc
