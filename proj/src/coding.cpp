#include "letcc/coding.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "letcc/errors.hpp"

namespace letcc {

Dataset::Dataset(Matrix inputs) : inputs_(std::move(inputs)) {
  if (inputs_.rows() < 1) throw InvalidArgument("dataset needs K >= 1 points");
  if (inputs_.cols() < 1) throw InvalidArgument("dataset needs dimension d >= 1");
  if (!inputs_.allFinite()) throw InvalidArgument("dataset has non-finite entries");
}

CodedBatch encode(const Dataset& data, const InterpolationGrid& grid,
                  double lambda_e) {
  if (data.k() != grid.k()) {
    throw InvalidArgument("dataset has " + std::to_string(data.k()) +
                          " points but the grid has " + std::to_string(grid.k()) +
                          " alphas");
  }
  SplineFit enc = fit_or_degrade(grid.alphas(), data.inputs(), lambda_e);
  CodedBatch batch;
  batch.coded = enc.evaluate(grid.betas());
  batch.encoder_at_alphas = enc.evaluate(grid.alphas());
  batch.encoder_fit = std::move(enc);
  return batch;
}

double encoder_training_error(const CodedBatch& batch, const Dataset& data,
                              const InterpolationGrid& grid) {
  if (batch.encoder_at_alphas.rows() != static_cast<Eigen::Index>(grid.k()) ||
      batch.encoder_at_alphas.rows() != data.inputs().rows() ||
      batch.encoder_at_alphas.cols() != data.inputs().cols()) {
    throw InvalidArgument("batch, data and grid shapes disagree");
  }
  return (batch.encoder_at_alphas - data.inputs()).squaredNorm() /
         static_cast<double>(data.k());
}

namespace detail {

SortedSurvivors sort_survivors(const WorkerReturns& returns,
                               const InterpolationGrid& grid) {
  if (returns.outputs.rows() != static_cast<Eigen::Index>(returns.workers.size())) {
    throw InvalidArgument("worker list and output rows disagree");
  }
  // worker index -> first row reporting it
  std::map<std::size_t, Eigen::Index> first;
  SortedSurvivors out;
  for (std::size_t i = 0; i < returns.workers.size(); ++i) {
    const std::size_t w = returns.workers[i];
    if (w >= grid.n()) {
      throw InvalidArgument("worker index " + std::to_string(w) +
                            " outside the grid of " + std::to_string(grid.n()));
    }
    if (!first.emplace(w, static_cast<Eigen::Index>(i)).second) {
      ++out.duplicates_dropped;
    }
  }
  out.outputs.resize(static_cast<Eigen::Index>(first.size()), returns.outputs.cols());
  Eigen::Index r = 0;
  for (const auto& [w, row] : first) {
    out.betas.push_back(grid.betas()[w]);
    out.outputs.row(r++) = returns.outputs.row(row);
  }
  if (!out.outputs.allFinite()) throw InvalidArgument("non-finite worker output");
  return out;
}

}  // namespace detail

DecodeResult decode(const WorkerReturns& returns, const InterpolationGrid& grid,
                    double lambda_d) {
  auto sorted = detail::sort_survivors(returns, grid);
  if (sorted.betas.empty()) throw DecodeFailure("no surviving workers to decode from");
  if (sorted.outputs.cols() < 1) throw InvalidArgument("outputs need m >= 1");

  SplineFit dec = fit_or_degrade(sorted.betas, sorted.outputs, lambda_d);
  DecodeResult res;
  res.estimates = dec.evaluate(grid.alphas());
  res.survivor_count = sorted.betas.size();
  res.degraded = dec.is_degenerate();
  res.duplicates_dropped = sorted.duplicates_dropped;
  res.decoder_fit = std::move(dec);
  return res;
}

}  // namespace letcc
