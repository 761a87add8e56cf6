#include "letcc/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "letcc/baselines.hpp"
#include "letcc/errors.hpp"

namespace letcc {

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kLeTCC: return "letcc";
    case Scheme::kBACC: return "bacc";
    case Scheme::kLCC: return "lcc";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "letcc") return Scheme::kLeTCC;
  if (name == "bacc") return Scheme::kBACC;
  if (name == "lcc") return Scheme::kLCC;
  throw InvalidArgument("unknown scheme '" + name + "' (expected letcc, bacc or lcc)");
}

std::vector<std::size_t> sample_stragglers(const StragglerModel& model, Rng& rng) {
  if (model.s >= model.n) {
    throw InvalidArgument("stragglers S=" + std::to_string(model.s) +
                          " must be smaller than workers N=" + std::to_string(model.n));
  }
  Rng fixed(derive_seed(model.seed, 0, Stream::kStragglers));
  Rng& source = model.mode == StragglerMode::kFixedSet ? fixed : rng;

  std::vector<std::size_t> idx(model.n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Partial Fisher-Yates: the first S slots become the stragglers.
  for (std::size_t i = 0; i < model.s; ++i) {
    std::swap(idx[i], idx[i + source.below(model.n - i)]);
  }
  std::vector<std::size_t> survivors(idx.begin() + static_cast<std::ptrdiff_t>(model.s),
                                     idx.end());
  std::sort(survivors.begin(), survivors.end());
  return survivors;
}

WorkerReturns apply_workers(const WorkerFunction& f, const CodedBatch& batch,
                            const NoiseModel& noise, std::span<const std::size_t> survivors,
                            Rng& rng) {
  if (!std::isfinite(noise.sigma0) || noise.sigma0 < 0.0) {
    throw InvalidArgument("sigma0 must be finite and nonnegative");
  }
  WorkerReturns out;
  out.workers.assign(survivors.begin(), survivors.end());
  out.outputs.resize(static_cast<Eigen::Index>(survivors.size()),
                     static_cast<Eigen::Index>(f.out_dim));
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    if (survivors[i] >= static_cast<std::size_t>(batch.coded.rows())) {
      throw InvalidArgument("survivor index outside the coded batch");
    }
    const auto row = static_cast<Eigen::Index>(i);
    out.outputs.row(row) =
        f.eval(batch.coded.row(static_cast<Eigen::Index>(survivors[i])).transpose())
            .transpose();
    if (noise.sigma0 > 0.0) {
      for (Eigen::Index c = 0; c < out.outputs.cols(); ++c) {
        out.outputs(row, c) += noise.sigma0 * rng.normal();
      }
    }
  }
  return out;
}

Dataset draw_dataset(std::size_t k, std::size_t d, Rng& rng) {
  Matrix x(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = rng.uniform(-1.0, 1.0);
  }
  return Dataset(std::move(x));
}

namespace {

std::size_t argmax_row(const Matrix& m, Eigen::Index r) {
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < m.cols(); ++c) {
    if (m(r, c) > m(r, best)) best = c;
  }
  return static_cast<std::size_t>(best);
}

}  // namespace

std::optional<double> relacc(const Matrix& estimates, const Matrix& truth) {
  if (estimates.rows() != truth.rows() || estimates.cols() != truth.cols()) {
    throw InvalidArgument("relacc: shape mismatch");
  }
  if (truth.cols() < 2 || truth.rows() == 0) return std::nullopt;
  std::size_t agree = 0;
  for (Eigen::Index r = 0; r < truth.rows(); ++r) {
    agree += argmax_row(estimates, r) == argmax_row(truth, r) ? 1 : 0;
  }
  return static_cast<double>(agree) / static_cast<double>(truth.rows());
}

AccuracyReport accuracy_against_labels(const Matrix& estimates, const Matrix& truth,
                                       std::span<const std::size_t> labels) {
  if (static_cast<std::size_t>(truth.rows()) != labels.size() ||
      estimates.rows() != truth.rows() || estimates.cols() != truth.cols() ||
      truth.cols() < 2) {
    throw InvalidArgument("accuracy_against_labels: shape mismatch");
  }
  std::size_t base = 0, est = 0, agree = 0;
  for (Eigen::Index r = 0; r < truth.rows(); ++r) {
    const auto label = labels[static_cast<std::size_t>(r)];
    const auto bt = argmax_row(truth, r), be = argmax_row(estimates, r);
    base += bt == label ? 1 : 0;
    est += be == label ? 1 : 0;
    agree += bt == be ? 1 : 0;
  }
  const double k = static_cast<double>(labels.size());
  AccuracyReport rep;
  rep.base_accuracy = static_cast<double>(base) / k;
  rep.estimated_accuracy = static_cast<double>(est) / k;
  rep.agreement = static_cast<double>(agree) / k;
  if (est > 0) rep.base_over_estimated = rep.base_accuracy / rep.estimated_accuracy;
  if (base > 0) rep.estimated_over_base = rep.estimated_accuracy / rep.base_accuracy;
  return rep;
}

TrialMetrics run_trial(const TrialConfig& cfg, std::uint64_t seed) {
  const WorkerFunction& f = cfg.function;
  if (!f.eval) throw InvalidArgument("trial config has no worker function");
  const StragglerModel stragglers{cfg.n, cfg.s, cfg.straggler_mode, cfg.master_seed};
  if (cfg.s >= cfg.n) {
    throw InvalidArgument("stragglers S must be smaller than workers N");
  }
  const auto grid = InterpolationGrid::chebyshev(cfg.k, cfg.n);

  Rng data_rng(cfg.data_mode == DataMode::kFixed
                   ? derive_seed(cfg.master_seed, 0, Stream::kData)
                   : derive_seed(seed, 0, Stream::kData));
  Rng straggler_rng(derive_seed(seed, 0, Stream::kStragglers));
  Rng noise_rng(derive_seed(seed, 0, Stream::kNoise));

  const Dataset data = draw_dataset(cfg.k, f.in_dim, data_rng);
  CodedBatch batch;
  switch (cfg.scheme) {
    case Scheme::kLeTCC: batch = encode(data, grid, cfg.lambda_e); break;
    case Scheme::kBACC: batch = bacc_encode(data, grid); break;
    case Scheme::kLCC: batch = lcc_encode(data, grid); break;
  }

  const auto survivors = sample_stragglers(stragglers, straggler_rng);
  const auto returns = apply_workers(f, batch, NoiseModel{cfg.sigma0}, survivors, noise_rng);

  DecodeResult dec;
  switch (cfg.scheme) {
    case Scheme::kLeTCC: dec = decode(returns, grid, cfg.lambda_d); break;
    case Scheme::kBACC: dec = bacc_decode(returns, grid); break;
    case Scheme::kLCC: {
      const auto degree = cfg.f_degree ? cfg.f_degree : f.degree;
      if (!degree) throw InvalidArgument("LCC needs a polynomial degree for " + f.name);
      dec = lcc_decode(returns, grid, *degree);
      break;
    }
  }

  const Matrix truth = f.apply(data.inputs());
  const double k = static_cast<double>(cfg.k);
  TrialMetrics m;
  m.seed = seed;
  m.survivor_count = dec.survivor_count;
  m.degraded = dec.degraded;
  m.empirical_risk = (dec.estimates - truth).squaredNorm() / k;
  m.rmse = std::sqrt(m.empirical_risk);
  m.relacc = relacc(dec.estimates, truth);

  if (cfg.scheme == Scheme::kLeTCC) {
    const Matrix f_enc = f.apply(batch.encoder_at_alphas);
    m.l_dec = 2.0 * (dec.estimates - f_enc).squaredNorm() / k;
    m.l_enc = 2.0 * (f_enc - truth).squaredNorm() / k;
    m.encoder_training_error = encoder_training_error(batch, data, grid);
    if (f.lipschitz) {
      const double radius = std::max(data.inputs().cwiseAbs().maxCoeff(),
                                     batch.encoder_at_alphas.cwiseAbs().maxCoeff());
      const double q = f.lipschitz(radius);
      m.lipschitz_bound = 2.0 * q * q * *m.encoder_training_error;
    }
  }
  return m;
}

Aggregate aggregate(std::vector<TrialMetrics> trials) {
  Aggregate a;
  a.trials = trials.size();
  if (trials.empty()) throw InvalidArgument("aggregate needs at least one trial");
  const double n = static_cast<double>(trials.size());
  double sum = 0.0, sum_rmse = 0.0, sum_relacc = 0.0;
  bool have_relacc = true;
  for (const auto& t : trials) {
    sum += t.empirical_risk;
    sum_rmse += t.rmse;
    if (t.relacc) sum_relacc += *t.relacc;
    else have_relacc = false;
  }
  a.mean_mse = sum / n;
  a.mean_rmse = sum_rmse / n;
  if (have_relacc) a.mean_relacc = sum_relacc / n;
  double ss = 0.0;
  for (const auto& t : trials) ss += (t.empirical_risk - a.mean_mse) * (t.empirical_risk - a.mean_mse);
  a.std_mse = trials.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  a.degenerate_ci = trials.size() == 1;
  const double half = 1.96 * a.std_mse / std::sqrt(n);
  a.ci95_lo = a.mean_mse - half;
  a.ci95_hi = a.mean_mse + half;
  a.per_trial = std::move(trials);
  return a;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial) {
  return derive_seed(master_seed, trial, Stream::kTrial);
}

Aggregate monte_carlo(const TrialConfig& config, std::size_t trials,
                      std::uint64_t master_seed, std::size_t threads) {
  if (trials == 0) throw InvalidArgument("monte_carlo needs trials >= 1");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, trials);

  std::vector<TrialMetrics> results(trials);
  std::vector<std::exception_ptr> errors(trials);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < trials; i = next++) {
      try {
        results[i] = run_trial(config, trial_seed(master_seed, i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return aggregate(std::move(results));
}

}  // namespace letcc
