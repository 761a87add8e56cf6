#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "letcc/sim.hpp"

namespace letcc {

/// MSE values below this are numerical floor, not statistical decay, and are
/// left out of slope fits.
inline constexpr double kMseFloor = 1e-18;

enum class LambdaRule {
  kFixed,           ///< lambda_d = value
  kInverseN4,       ///< lambda_d = value * N^-4 (value defaults to 1)
  kNoisyRate,       ///< lambda_d = value * (N - S)^(-4/5)
  kCrossValidated,  ///< best of lambda_d_grid on held-out trials, per point
};

std::string to_string(LambdaRule rule);
LambdaRule parse_lambda_rule(const std::string& name);

/// Settings shared by every experiment kind.
struct ExperimentSettings {
  std::string function = "sin_pi";
  std::size_t d = 1;
  std::size_t m = 0;  ///< 0: the function's default
  std::size_t k = 16;
  double sigma0 = 0.0;
  double lambda_e = 0.0;
  LambdaRule lambda_rule = LambdaRule::kFixed;
  double lambda_d = 0.0;
  std::vector<double> lambda_d_grid;  ///< for kCrossValidated; empty = default grid
  std::optional<std::size_t> f_degree;
  StragglerMode straggler_mode = StragglerMode::kExactlyUniform;
  DataMode data_mode = DataMode::kPerTrial;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

/// S as a fixed count or as floor(ratio * N).
struct StragglerRule {
  bool is_ratio = false;
  double value = 0.0;
  std::size_t at(std::size_t n) const;
};

struct SweepConfig {
  ExperimentSettings settings;
  std::vector<Scheme> schemes{Scheme::kLeTCC};
  std::vector<std::size_t> n_values;
  StragglerRule s_rule;
};

struct SweepPoint {
  Scheme scheme = Scheme::kLeTCC;
  std::size_t n = 0;
  std::size_t s = 0;
  double lambda_e = 0.0;
  double lambda_d = 0.0;
  std::optional<Aggregate> result;  ///< empty when decoding failed
  bool at_floor = false;
  std::string error;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points_used = 0;
  /// Fewer than two points above the floor; slope fields are meaningless.
  bool at_floor = false;
};

struct SchemeSlope {
  Scheme scheme = Scheme::kLeTCC;
  SlopeFit fit;
};

struct SlopeReport {
  std::vector<SweepPoint> points;
  std::vector<SchemeSlope> slopes;

  const SlopeFit& slope_for(Scheme scheme) const;
};

/// Ordinary least squares of log(mse) on log(N). Throws InvalidArgument for
/// fewer than two points or any mse <= 0. r2 is 1 for two points.
SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> points);

/// lambda_d at one sweep point under the settings' rule (not kCrossValidated).
double lambda_d_for(const ExperimentSettings& settings, std::size_t n, std::size_t s);

/// One Monte-Carlo aggregate per (scheme, N) and a log-log slope per scheme.
/// All schemes at a given N share trial seeds, so they see the same data and
/// straggler sets. Throws InvalidArgument for fewer than 4 N values, N values
/// not ascending or spanning less than a decade, or S(N) >= N.
SlopeReport sweep_n(const SweepConfig& config);

/// 10^-13, 10^-12, ..., 10^0.
std::vector<double> default_lambda_grid();

struct CrossvalConfig {
  ExperimentSettings settings;
  std::size_t n = 64;
  std::size_t s = 0;
  std::vector<double> lambda_e_grid;  ///< empty = default grid
  std::vector<double> lambda_d_grid;  ///< empty = default grid
};

struct CrossvalScore {
  double lambda_e = 0.0;
  double lambda_d = 0.0;
  double mean_rmse = 0.0;
};

struct CrossvalResult {
  double best_lambda_e = 0.0;
  double best_lambda_d = 0.0;
  double best_rmse = 0.0;
  std::vector<CrossvalScore> scores;  ///< lambda_e-major, grid order
};

/// Grid search of the LeTCC smoothing parameters by mean RMSE on held-out
/// trials (seeds disjoint from the report trials). Scores within a relative
/// 1e-9 (or absolute 1e-12) of the minimum tie; ties go to the largest
/// lambda_d, then the largest lambda_e.
CrossvalResult crossval_lambda(const CrossvalConfig& config);

struct StragglerSweepConfig {
  ExperimentSettings settings;
  std::size_t n = 64;
  std::vector<std::size_t> s_values;
};

struct StragglerRow {
  std::size_t s = 0;
  double lambda_d = 0.0;
  Aggregate letcc;
  Aggregate bacc;
  /// Paired trials where LeTCC RMSE <= BACC RMSE.
  std::size_t letcc_wins = 0;
  double letcc_win_fraction = 0.0;
};

/// LeTCC against BACC for each S on identical data and straggler sets.
std::vector<StragglerRow> straggler_sweep(const StragglerSweepConfig& config);

/// TrialConfig for one point of an experiment.
TrialConfig make_trial_config(const ExperimentSettings& settings, Scheme scheme,
                              std::size_t n, std::size_t s, double lambda_d);

}  // namespace letcc
