#pragma once

#include <optional>
#include <string>
#include <vector>

#include "letcc/experiments.hpp"
#include "letcc/sim.hpp"

namespace letcc {

/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

/// scheme,f,K,N,S,sigma0,lambda_e,lambda_d,trials,mean_mse,std_mse,ci95_lo,ci95_hi,mean_rmse,mean_relacc,seed
extern const char* const kReportCsvHeader;

std::string sweep_csv(const SweepConfig& config, const SlopeReport& report);
std::string sweep_json(const SweepConfig& config, const SlopeReport& report);
/// Log-log scatter of mean MSE against N with the fitted line per scheme.
std::string sweep_svg(const SweepConfig& config, const SlopeReport& report);

std::string straggler_csv(const StragglerSweepConfig& config,
                          const std::vector<StragglerRow>& rows);
std::string straggler_json(const StragglerSweepConfig& config,
                           const std::vector<StragglerRow>& rows);

/// lambda_e,lambda_d,mean_rmse
std::string crossval_scores_csv(const CrossvalResult& result);
std::string crossval_json(const CrossvalConfig& config, const CrossvalResult& result);

std::string trial_json(const TrialConfig& config, const TrialMetrics& metrics);

}  // namespace letcc
