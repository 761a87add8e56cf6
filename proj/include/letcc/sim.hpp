#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "letcc/coding.hpp"
#include "letcc/functions.hpp"
#include "letcc/points.hpp"
#include "letcc/rng.hpp"

namespace letcc {

enum class Scheme { kLeTCC, kBACC, kLCC };

std::string to_string(Scheme scheme);
/// "letcc", "bacc" or "lcc"; throws InvalidArgument otherwise.
Scheme parse_scheme(const std::string& name);

enum class StragglerMode {
  kExactlyUniform,  ///< a fresh uniform S-subset per trial
  kFixedSet,        ///< one S-subset drawn from the model seed, reused by every trial
};

struct StragglerModel {
  std::size_t n = 0;
  std::size_t s = 0;
  StragglerMode mode = StragglerMode::kExactlyUniform;
  std::uint64_t seed = 0;
};

/// Survivor indices, ascending; exactly N - S of them. Throws
/// InvalidArgument unless S < N.
std::vector<std::size_t> sample_stragglers(const StragglerModel& model, Rng& rng);

/// i.i.d. N(0, sigma0^2) per worker and output coordinate.
struct NoiseModel {
  double sigma0 = 0.0;
};

/// Outputs f(coded_v) + eps_v for every survivor v.
WorkerReturns apply_workers(const WorkerFunction& f, const CodedBatch& batch,
                            const NoiseModel& noise, std::span<const std::size_t> survivors,
                            Rng& rng);

enum class DataMode {
  kPerTrial,  ///< fresh inputs per trial
  kFixed,     ///< one dataset drawn from the master seed
};

/// Inputs x_k drawn i.i.d. uniform on [-1, 1]^d.
Dataset draw_dataset(std::size_t k, std::size_t d, Rng& rng);

struct TrialConfig {
  Scheme scheme = Scheme::kLeTCC;
  WorkerFunction function;
  std::size_t k = 16;
  std::size_t n = 64;
  std::size_t s = 0;
  double sigma0 = 0.0;
  double lambda_e = 0.0;
  double lambda_d = 0.0;
  /// LCC only; defaults to function.degree.
  std::optional<std::size_t> f_degree;
  StragglerMode straggler_mode = StragglerMode::kExactlyUniform;
  DataMode data_mode = DataMode::kPerTrial;
  /// Source of the fixed straggler set and fixed dataset.
  std::uint64_t master_seed = 0;
};

struct TrialMetrics {
  double empirical_risk = 0.0;  ///< (1/K) sum ||fhat(x_k) - f(x_k)||^2
  double rmse = 0.0;            ///< sqrt(empirical_risk)
  std::optional<double> l_dec;  ///< (2/K) sum ||u_dec(a_k) - f(u_enc(a_k))||^2
  std::optional<double> l_enc;  ///< (2/K) sum ||f(u_enc(a_k)) - f(x_k)||^2
  /// (1/K) sum ||u_enc(a_k) - x_k||^2, spline encoder only.
  std::optional<double> encoder_training_error;
  /// 2 q^2 times the encoder training error when f declares q.
  std::optional<double> lipschitz_bound;
  std::optional<double> relacc;
  std::size_t survivor_count = 0;
  std::uint64_t seed = 0;
  bool degraded = false;
};

/// Full pipeline for one trial: draw data, encode, sample stragglers, apply
/// workers with noise, decode, score. `seed` determines every random draw.
TrialMetrics run_trial(const TrialConfig& config, std::uint64_t seed);

/// Fraction of rows whose argmax agrees (ties resolve to the lowest index).
/// Empty for single-output functions.
std::optional<double> relacc(const Matrix& estimates, const Matrix& truth);

/// Classification accuracies against reference labels, with both directional
/// ratios of the base (true f) and estimated accuracy.
struct AccuracyReport {
  double base_accuracy = 0.0;
  double estimated_accuracy = 0.0;
  double agreement = 0.0;
  std::optional<double> base_over_estimated;
  std::optional<double> estimated_over_base;
};
AccuracyReport accuracy_against_labels(const Matrix& estimates, const Matrix& truth,
                                       std::span<const std::size_t> labels);

struct Aggregate {
  std::size_t trials = 0;
  double mean_mse = 0.0;
  double std_mse = 0.0;  ///< sample standard deviation (n - 1)
  double ci95_lo = 0.0;
  double ci95_hi = 0.0;
  double mean_rmse = 0.0;
  std::optional<double> mean_relacc;
  /// trials == 1: the interval collapses to the mean.
  bool degenerate_ci = false;
  std::vector<TrialMetrics> per_trial;
};

/// Summary statistics in trial order; the 95% interval uses the normal
/// approximation mean +- 1.96 std / sqrt(trials).
Aggregate aggregate(std::vector<TrialMetrics> trials);

/// Runs `trials` trials with seeds derive_seed(master_seed, i). Results do
/// not depend on `threads` (0 = hardware concurrency).
Aggregate monte_carlo(const TrialConfig& config, std::size_t trials,
                      std::uint64_t master_seed, std::size_t threads = 1);

/// Trial seeds for a run; exposed so paired comparisons can line up trials.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial);

}  // namespace letcc
