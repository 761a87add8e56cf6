#include "letcc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "letcc/errors.hpp"

namespace letcc {

std::string to_string(LambdaRule rule) {
  switch (rule) {
    case LambdaRule::kFixed: return "fixed";
    case LambdaRule::kInverseN4: return "inv_n4";
    case LambdaRule::kNoisyRate: return "noisy_rate";
    case LambdaRule::kCrossValidated: return "crossval";
  }
  return "unknown";
}

LambdaRule parse_lambda_rule(const std::string& name) {
  if (name == "fixed") return LambdaRule::kFixed;
  if (name == "inv_n4") return LambdaRule::kInverseN4;
  if (name == "noisy_rate") return LambdaRule::kNoisyRate;
  if (name == "crossval") return LambdaRule::kCrossValidated;
  throw InvalidArgument("unknown lambda rule '" + name +
                        "' (expected fixed, inv_n4, noisy_rate or crossval)");
}

std::size_t StragglerRule::at(std::size_t n) const {
  if (!std::isfinite(value) || value < 0.0) {
    throw InvalidArgument("straggler rule value must be nonnegative");
  }
  if (is_ratio) return static_cast<std::size_t>(std::floor(value * static_cast<double>(n)));
  return static_cast<std::size_t>(value);
}

const SlopeFit& SlopeReport::slope_for(Scheme scheme) const {
  for (const auto& s : slopes) {
    if (s.scheme == scheme) return s.fit;
  }
  throw InvalidArgument("no slope for scheme " + to_string(scheme));
}

SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw InvalidArgument("slope fit needs at least two points");
  std::vector<double> x, y;
  for (const auto& [n, mse] : points) {
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("N must be positive");
    if (!(mse > 0.0) || !std::isfinite(mse)) {
      throw InvalidArgument("slope fit needs positive finite MSE values");
    }
    x.push_back(std::log(n));
    y.push_back(std::log(mse));
  }
  const double cnt = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= cnt;
  my /= cnt;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("slope fit needs at least two distinct N");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points_used = x.size();
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return f;
}

double lambda_d_for(const ExperimentSettings& st, std::size_t n, std::size_t s) {
  const double scale = st.lambda_d;
  switch (st.lambda_rule) {
    case LambdaRule::kFixed: return st.lambda_d;
    case LambdaRule::kInverseN4: return (scale > 0.0 ? scale : 1.0) * std::pow(static_cast<double>(n), -4.0);
    case LambdaRule::kNoisyRate:
      return (scale > 0.0 ? scale : 1.0) * std::pow(static_cast<double>(n - s), -0.8);
    case LambdaRule::kCrossValidated: break;
  }
  throw InvalidArgument("cross-validated lambda has no closed-form value");
}

TrialConfig make_trial_config(const ExperimentSettings& st, Scheme scheme,
                              std::size_t n, std::size_t s, double lambda_d) {
  TrialConfig cfg;
  cfg.scheme = scheme;
  cfg.function = make_worker_function(st.function, st.d, st.m);
  cfg.k = st.k;
  cfg.n = n;
  cfg.s = s;
  cfg.sigma0 = st.sigma0;
  cfg.lambda_e = st.lambda_e;
  cfg.lambda_d = lambda_d;
  cfg.f_degree = st.f_degree;
  cfg.straggler_mode = st.straggler_mode;
  cfg.data_mode = st.data_mode;
  cfg.master_seed = st.seed;
  return cfg;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> g;
  for (int e = -13; e <= 0; ++e) g.push_back(std::pow(10.0, e));
  return g;
}

namespace {

void validate_settings(const ExperimentSettings& st) {
  if (st.trials == 0) throw InvalidArgument("trials must be >= 1");
  if (st.k == 0) throw InvalidArgument("K must be >= 1");
  if (!std::isfinite(st.sigma0) || st.sigma0 < 0.0) throw InvalidArgument("sigma0 must be >= 0");
  if (!std::isfinite(st.lambda_e) || st.lambda_e < 0.0) throw InvalidArgument("lambda_e must be >= 0");
  if (!std::isfinite(st.lambda_d) || st.lambda_d < 0.0) throw InvalidArgument("lambda_d must be >= 0");
}

void validate_grid(const std::vector<double>& g, const char* what) {
  for (double v : g) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidArgument(std::string(what) + " values must be finite and >= 0");
    }
  }
}

// Held-out seed space for cross-validation, disjoint from report trials.
std::uint64_t validation_seed(std::uint64_t seed, std::size_t n, std::size_t s) {
  return derive_seed(derive_seed(seed, n, Stream::kValidation), s, Stream::kValidation);
}

}  // namespace

CrossvalResult crossval_lambda(const CrossvalConfig& config) {
  const auto& st = config.settings;
  validate_settings(st);
  const auto e_grid = config.lambda_e_grid.empty() ? default_lambda_grid() : config.lambda_e_grid;
  const auto d_grid = config.lambda_d_grid.empty() ? default_lambda_grid() : config.lambda_d_grid;
  validate_grid(e_grid, "lambda_e_grid");
  validate_grid(d_grid, "lambda_d_grid");
  if (config.s >= config.n) throw InvalidArgument("S must be smaller than N");

  const std::uint64_t seed = validation_seed(st.seed, config.n, config.s);
  CrossvalResult res;
  for (double le : e_grid) {
    for (double ld : d_grid) {
      TrialConfig cfg = make_trial_config(st, Scheme::kLeTCC, config.n, config.s, ld);
      cfg.lambda_e = le;
      const auto agg = monte_carlo(cfg, st.trials, seed, st.threads);
      res.scores.push_back({le, ld, agg.mean_rmse});
    }
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& sc : res.scores) best = std::min(best, sc.mean_rmse);
  const double tol = best * 1e-9 + 1e-12;
  bool first = true;
  for (const auto& sc : res.scores) {
    if (sc.mean_rmse > best + tol) continue;
    const bool better = first || sc.lambda_d > res.best_lambda_d ||
                        (sc.lambda_d == res.best_lambda_d && sc.lambda_e > res.best_lambda_e);
    if (better) {
      res.best_lambda_e = sc.lambda_e;
      res.best_lambda_d = sc.lambda_d;
      res.best_rmse = sc.mean_rmse;
      first = false;
    }
  }
  return res;
}

SlopeReport sweep_n(const SweepConfig& config) {
  const auto& st = config.settings;
  validate_settings(st);
  const auto& ns = config.n_values;
  if (ns.size() < 4) throw InvalidArgument("an N sweep needs at least 4 N values");
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (!(ns[i - 1] < ns[i])) throw InvalidArgument("N values must be strictly ascending");
  }
  if (static_cast<double>(ns.back()) < 10.0 * static_cast<double>(ns.front())) {
    throw InvalidArgument("N values must span at least one decade");
  }
  if (config.schemes.empty()) throw InvalidArgument("sweep needs at least one scheme");
  for (std::size_t n : ns) {
    if (config.s_rule.at(n) >= n) throw InvalidArgument("S(N) must be smaller than N");
  }

  SlopeReport rep;
  for (Scheme scheme : config.schemes) {
    std::vector<std::pair<double, double>> usable;
    for (std::size_t n : ns) {
      SweepPoint pt;
      pt.scheme = scheme;
      pt.n = n;
      pt.s = config.s_rule.at(n);
      pt.lambda_e = st.lambda_e;
      if (st.lambda_rule == LambdaRule::kCrossValidated) {
        CrossvalConfig cv{st, n, pt.s, {st.lambda_e}, st.lambda_d_grid};
        pt.lambda_d = crossval_lambda(cv).best_lambda_d;
      } else {
        pt.lambda_d = lambda_d_for(st, n, pt.s);
      }
      try {
        const auto cfg = make_trial_config(st, scheme, n, pt.s, pt.lambda_d);
        // Seeds depend on N only, so schemes are paired at each point.
        pt.result = monte_carlo(cfg, st.trials, derive_seed(st.seed, n), st.threads);
        pt.at_floor = pt.result->mean_mse < kMseFloor;
        if (!pt.at_floor) usable.emplace_back(static_cast<double>(n), pt.result->mean_mse);
      } catch (const DecodeFailure& e) {
        pt.error = e.what();
      }
      rep.points.push_back(std::move(pt));
    }
    SchemeSlope ss{scheme, {}};
    if (usable.size() >= 2) {
      ss.fit = fit_loglog_slope(usable);
    } else {
      ss.fit.at_floor = true;
      ss.fit.points_used = usable.size();
    }
    rep.slopes.push_back(ss);
  }
  return rep;
}

std::vector<StragglerRow> straggler_sweep(const StragglerSweepConfig& config) {
  const auto& st = config.settings;
  validate_settings(st);
  if (config.s_values.empty()) throw InvalidArgument("straggler sweep needs S values");
  std::vector<StragglerRow> rows;
  for (std::size_t s : config.s_values) {
    if (s >= config.n) throw InvalidArgument("S must be smaller than N");
    StragglerRow row;
    row.s = s;
    if (st.lambda_rule == LambdaRule::kCrossValidated) {
      CrossvalConfig cv{st, config.n, s, {st.lambda_e}, st.lambda_d_grid};
      row.lambda_d = crossval_lambda(cv).best_lambda_d;
    } else {
      row.lambda_d = lambda_d_for(st, config.n, s);
    }
    const std::uint64_t seed = derive_seed(st.seed, s);
    row.letcc = monte_carlo(make_trial_config(st, Scheme::kLeTCC, config.n, s, row.lambda_d),
                            st.trials, seed, st.threads);
    row.bacc = monte_carlo(make_trial_config(st, Scheme::kBACC, config.n, s, row.lambda_d),
                           st.trials, seed, st.threads);
    for (std::size_t i = 0; i < st.trials; ++i) {
      if (row.letcc.per_trial[i].rmse <= row.bacc.per_trial[i].rmse) ++row.letcc_wins;
    }
    row.letcc_win_fraction = static_cast<double>(row.letcc_wins) / static_cast<double>(st.trials);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace letcc
