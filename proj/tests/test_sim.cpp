#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "letcc/errors.hpp"
#include "letcc/sim.hpp"

using Catch::Matchers::WithinAbs;
using namespace letcc;

namespace {

TrialConfig base_config(const std::string& f, std::size_t k, std::size_t n, std::size_t s) {
  TrialConfig cfg;
  cfg.function = make_worker_function(f);
  cfg.k = k;
  cfg.n = n;
  cfg.s = s;
  return cfg;
}

bool same_metrics(const TrialMetrics& a, const TrialMetrics& b) {
  return a.empirical_risk == b.empirical_risk && a.rmse == b.rmse && a.l_dec == b.l_dec &&
         a.l_enc == b.l_enc && a.encoder_training_error == b.encoder_training_error &&
         a.lipschitz_bound == b.lipschitz_bound && a.relacc == b.relacc &&
         a.survivor_count == b.survivor_count && a.seed == b.seed && a.degraded == b.degraded;
}

}  // namespace

TEST_CASE("straggler sampling", "[sim]") {
  Rng rng(1);
  const auto all = sample_stragglers({7, 0}, rng);
  CHECK(all == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
  REQUIRE_THROWS_AS(sample_stragglers({4, 4}, rng), InvalidArgument);
  REQUIRE_THROWS_AS(sample_stragglers({4, 5}, rng), InvalidArgument);

  std::vector<std::size_t> missing(5, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto f = sample_stragglers({5, 2}, rng);
    REQUIRE(f.size() == 3);
    REQUIRE(std::is_sorted(f.begin(), f.end()));
    std::vector<bool> seen(5, false);
    for (auto v : f) seen[v] = true;
    for (std::size_t v = 0; v < 5; ++v) missing[v] += seen[v] ? 0 : 1;
  }
  for (auto c : missing) CHECK_THAT(static_cast<double>(c) / draws, WithinAbs(0.4, 0.01));

  StragglerModel fixed{20, 6, StragglerMode::kFixedSet, 99};
  Rng r1(1), r2(2);
  CHECK(sample_stragglers(fixed, r1) == sample_stragglers(fixed, r2));
}

TEST_CASE("worker noise moments", "[sim]") {
  const auto f = make_worker_function("sin_pi");
  CodedBatch batch;
  batch.coded = Matrix::Zero(100000, 1);
  for (Eigen::Index i = 0; i < batch.coded.rows(); ++i) batch.coded(i, 0) = std::sin(0.37 * i);
  std::vector<std::size_t> all(100000);
  std::iota(all.begin(), all.end(), std::size_t{0});

  Rng rng(3);
  const auto noisy = apply_workers(f, batch, {0.1}, all, rng);
  const Matrix clean = f.apply(batch.coded);
  const Vector eps = noisy.outputs.col(0) - clean.col(0);
  const double mean = eps.mean();
  const double var = (eps.array() - mean).square().sum() / (eps.size() - 1);
  CHECK_THAT(mean, WithinAbs(0.0, 0.002));
  CHECK(var >= 0.0095);
  CHECK(var <= 0.0105);

  Rng a(4), b(5);
  const auto q1 = apply_workers(f, batch, {0.0}, all, a);
  const auto q2 = apply_workers(f, batch, {0.0}, all, b);
  CHECK((q1.outputs.array() == q2.outputs.array()).all());
  CHECK((q1.outputs.array() == clean.array()).all());

  const auto c = make_worker_function("constant");
  const auto q3 = apply_workers(c, batch, {0.0}, all, a);
  CHECK((q3.outputs.array() == q3.outputs(0, 0)).all());
  REQUIRE_THROWS_AS(apply_workers(f, batch, {-1.0}, all, a), InvalidArgument);
}

TEST_CASE("noiseless identity pipeline is exact for an affine encoder", "[sim]") {
  auto cfg = base_config("identity", 2, 64, 0);
  const auto m = run_trial(cfg, 11);
  CHECK(m.empirical_risk <= 1e-12);
  CHECK(m.survivor_count == 64);
}

TEST_CASE("LCC with the threshold met recovers x^2", "[sim]") {
  auto cfg = base_config("square", 4, 12, 4);
  cfg.scheme = Scheme::kLCC;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = run_trial(cfg, seed);
    CHECK(m.empirical_risk <= 1e-10);
    CHECK_FALSE(m.degraded);
  }
}

TEST_CASE("trials are deterministic in the seed", "[sim]") {
  for (auto scheme : {Scheme::kLeTCC, Scheme::kBACC, Scheme::kLCC}) {
    auto cfg = base_config(scheme == Scheme::kLCC ? "cubic" : "sin_pi", 8, 40, 6);
    cfg.scheme = scheme;
    cfg.sigma0 = 0.05;
    cfg.lambda_d = 1e-6;
    CHECK(same_metrics(run_trial(cfg, 21), run_trial(cfg, 21)));
    CHECK(run_trial(cfg, 21).empirical_risk != run_trial(cfg, 22).empirical_risk);
  }
}

TEST_CASE("Monte Carlo aggregates", "[sim]") {
  auto cfg = base_config("sin_pi", 8, 40, 6);
  cfg.sigma0 = 0.05;
  cfg.lambda_d = 1e-6;

  const auto one = monte_carlo(cfg, 1, 3);
  CHECK(one.degenerate_ci);
  CHECK(one.ci95_lo == one.mean_mse);
  CHECK(one.ci95_hi == one.mean_mse);

  const auto a = monte_carlo(cfg, 20, 3, 1);
  const auto b = monte_carlo(cfg, 20, 3, 4);
  CHECK(a.mean_mse == b.mean_mse);
  CHECK(a.std_mse == b.std_mse);
  REQUIRE(a.per_trial.size() == 20);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(same_metrics(a.per_trial[i], b.per_trial[i]));
    CHECK(a.per_trial[i].seed == trial_seed(3, i));
  }
  CHECK(monte_carlo(cfg, 20, 3).mean_mse == a.mean_mse);

  double sum = 0.0;
  for (const auto& t : a.per_trial) sum += t.empirical_risk;
  CHECK_THAT(a.mean_mse, WithinAbs(sum / 20.0, 1e-18));
  CHECK_THAT(a.ci95_hi - a.mean_mse, WithinAbs(1.96 * a.std_mse / std::sqrt(20.0), 1e-18));

  auto fixed = base_config("sin_pi", 8, 40, 6);
  fixed.straggler_mode = StragglerMode::kFixedSet;
  fixed.data_mode = DataMode::kFixed;
  fixed.master_seed = 5;
  fixed.lambda_d = 1e-6;
  CHECK(monte_carlo(fixed, 10, 5).std_mse == 0.0);
}

TEST_CASE("relative accuracy", "[sim]") {
  Matrix truth(3, 3);
  truth << 0.1, 0.7, 0.2, 0.5, 0.3, 0.2, 0.2, 0.3, 0.9;
  CHECK(relacc(truth, truth) == 1.0);
  CHECK(*relacc(-truth, truth) < 1.0);
  CHECK_FALSE(relacc(truth.col(0), truth.col(0)).has_value());

  TrialConfig cfg;
  cfg.function = make_worker_function("mlp", 2, 3);
  cfg.k = 6;
  cfg.n = 30;
  cfg.s = 3;
  cfg.lambda_d = 1e-8;
  const auto m = run_trial(cfg, 4);
  REQUIRE(m.relacc.has_value());
  CHECK(*m.relacc >= 0.0);
  CHECK(*m.relacc <= 1.0);

  // exact recovery by LCC implies argmax agreement
  TrialConfig poly = base_config("square", 3, 10, 2);
  poly.function = make_worker_function("square", 3);
  poly.scheme = Scheme::kLCC;
  CHECK(run_trial(poly, 6).relacc == 1.0);

  const std::vector<std::size_t> labels{1, 0, 2};
  const auto rep = accuracy_against_labels(truth, truth, labels);
  CHECK(rep.base_accuracy == 1.0);
  CHECK(rep.agreement == 1.0);
  CHECK(rep.base_over_estimated == 1.0);
}

TEST_CASE("risk decomposition bounds hold on every trial", "[sim][property]") {
  for (const char* f : {"sin_pi", "cubic", "softplus"}) {
    for (double le : {0.0, 1e-5, 1e-2}) {
      auto cfg = base_config(f, 12, 48, 8);
      cfg.sigma0 = 0.02;
      cfg.lambda_e = le;
      cfg.lambda_d = 1e-7;
      for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto m = run_trial(cfg, seed);
        REQUIRE(m.l_dec.has_value());
        REQUIRE(m.l_enc.has_value());
        CHECK(m.empirical_risk <= (*m.l_dec + *m.l_enc) * (1.0 + 1e-12));
        REQUIRE(m.lipschitz_bound.has_value());
        CHECK(*m.l_enc <= *m.lipschitz_bound * (1.0 + 1e-12) + 1e-300);
      }
    }
  }
}

TEST_CASE("mean risk falls as stragglers are removed", "[sim][property]") {
  auto cfg = base_config("sin_pi", 16, 64, 0);
  cfg.lambda_d = std::pow(64.0, -4.0);
  std::vector<double> risk;
  for (std::size_t s = 32; ; s -= 4) {
    cfg.s = s;
    risk.push_back(monte_carlo(cfg, 200, 8).mean_mse);
    if (s == 0) break;
  }
  int inversions = 0;
  for (std::size_t i = 1; i < risk.size(); ++i) inversions += risk[i] > risk[i - 1] ? 1 : 0;
  CHECK(inversions <= 1);
  CHECK(risk.back() < risk.front());
}
