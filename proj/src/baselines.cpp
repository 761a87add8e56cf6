#include "letcc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "letcc/errors.hpp"

namespace letcc {
namespace {

constexpr double kNodeTolerance = 1e-14;

}  // namespace

BerrutInterpolant::BerrutInterpolant(std::vector<double> nodes, Matrix values) {
  if (nodes.empty()) throw InvalidArgument("Berrut interpolant needs at least one node");
  if (static_cast<Eigen::Index>(nodes.size()) != values.rows()) {
    throw InvalidArgument("Berrut node and value counts differ");
  }
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });
  nodes_.reserve(nodes.size());
  values_.resize(values.rows(), values.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    nodes_.push_back(nodes[order[i]]);
    values_.row(static_cast<Eigen::Index>(i)) =
        values.row(static_cast<Eigen::Index>(order[i]));
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!std::isfinite(nodes_[i])) throw InvalidArgument("non-finite Berrut node");
    if (i > 0 && !(nodes_[i - 1] < nodes_[i])) {
      throw InvalidArgument("Berrut nodes must be distinct");
    }
  }
}

Matrix BerrutInterpolant::evaluate(std::span<const double> query) const {
  Matrix out(static_cast<Eigen::Index>(query.size()), values_.cols());
  for (std::size_t r = 0; r < query.size(); ++r) {
    const double t = query[r];
    const auto row = static_cast<Eigen::Index>(r);

    const auto nearest = std::lower_bound(nodes_.begin(), nodes_.end(), t);
    std::ptrdiff_t hit = -1;
    for (auto it : {nearest, nearest == nodes_.begin() ? nearest : nearest - 1}) {
      if (it != nodes_.end() && std::abs(*it - t) <= kNodeTolerance) {
        hit = it - nodes_.begin();
        break;
      }
    }
    if (hit >= 0) {
      out.row(row) = values_.row(hit);
      continue;
    }

    Eigen::RowVectorXd num = Eigen::RowVectorXd::Zero(values_.cols());
    double den = 0.0;
    double sign = 1.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j, sign = -sign) {
      const double term = sign / (t - nodes_[j]);
      num += term * values_.row(static_cast<Eigen::Index>(j));
      den += term;
    }
    out.row(row) = num / den;
  }
  return out;
}

Matrix berrut_eval(const BerrutInterpolant& interp, std::span<const double> query) {
  return interp.evaluate(query);
}

CodedBatch bacc_encode(const Dataset& data, const InterpolationGrid& grid) {
  if (data.k() != grid.k()) throw InvalidArgument("dataset size does not match the grid");
  const BerrutInterpolant enc(std::vector<double>(grid.alphas().begin(), grid.alphas().end()),
                              data.inputs());
  CodedBatch batch;
  batch.coded = enc.evaluate(grid.betas());
  batch.encoder_at_alphas = enc.evaluate(grid.alphas());
  return batch;
}

DecodeResult bacc_decode(const WorkerReturns& returns, const InterpolationGrid& grid) {
  auto sorted = detail::sort_survivors(returns, grid);
  if (sorted.betas.empty()) throw DecodeFailure("no surviving workers to decode from");
  const BerrutInterpolant dec(std::move(sorted.betas), std::move(sorted.outputs));
  DecodeResult res;
  res.estimates = dec.evaluate(grid.alphas());
  res.survivor_count = dec.nodes().size();
  res.duplicates_dropped = sorted.duplicates_dropped;
  return res;
}

namespace detail {

std::vector<double> lagrange_weights(std::span<const double> nodes) {
  std::vector<double> w(nodes.size(), 1.0);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (k != j) w[j] /= (nodes[j] - nodes[k]);
    }
  }
  return w;
}

Matrix lagrange_eval(std::span<const double> nodes, const Matrix& values,
                     std::span<const double> query) {
  const auto w = lagrange_weights(nodes);
  Matrix out(static_cast<Eigen::Index>(query.size()), values.cols());
  for (std::size_t r = 0; r < query.size(); ++r) {
    const double t = query[r];
    const auto row = static_cast<Eigen::Index>(r);
    const auto hit = std::find(nodes.begin(), nodes.end(), t);
    if (hit != nodes.end()) {
      out.row(row) = values.row(hit - nodes.begin());
      continue;
    }
    Eigen::RowVectorXd num = Eigen::RowVectorXd::Zero(values.cols());
    double den = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double term = w[j] / (t - nodes[j]);
      num += term * values.row(static_cast<Eigen::Index>(j));
      den += term;
    }
    out.row(row) = num / den;
  }
  return out;
}

}  // namespace detail

CodedBatch lcc_encode(const Dataset& data, const InterpolationGrid& grid) {
  if (data.k() != grid.k()) throw InvalidArgument("dataset size does not match the grid");
  CodedBatch batch;
  batch.coded = detail::lagrange_eval(grid.alphas(), data.inputs(), grid.betas());
  batch.encoder_at_alphas = data.inputs();
  return batch;
}

namespace {

// Chebyshev polynomials T_0..T_degree at t; well conditioned on [-1, 1].
Matrix chebyshev_design(std::span<const double> t, std::size_t degree) {
  Matrix a(static_cast<Eigen::Index>(t.size()), static_cast<Eigen::Index>(degree + 1));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = 1.0;
    if (degree >= 1) a(r, 1) = t[i];
    for (std::size_t j = 2; j <= degree; ++j) {
      const auto c = static_cast<Eigen::Index>(j);
      a(r, c) = 2.0 * t[i] * a(r, c - 1) - a(r, c - 2);
    }
  }
  return a;
}

}  // namespace

DecodeResult lcc_decode(const WorkerReturns& returns, const InterpolationGrid& grid,
                        std::size_t f_degree) {
  auto sorted = detail::sort_survivors(returns, grid);
  if (sorted.betas.empty()) throw DecodeFailure("no surviving workers to decode from");

  const LagrangeCodec codec{grid.k(), f_degree};
  const std::size_t target = codec.composed_degree();
  const std::size_t degree = std::min(target, sorted.betas.size() - 1);

  const Matrix design = chebyshev_design(sorted.betas, degree);
  const Eigen::ColPivHouseholderQR<Matrix> qr(design);
  const Matrix coef = qr.solve(sorted.outputs);

  DecodeResult res;
  res.estimates = chebyshev_design(grid.alphas(), degree) * coef;
  res.survivor_count = sorted.betas.size();
  res.degraded = sorted.betas.size() < codec.survivor_threshold();
  res.duplicates_dropped = sorted.duplicates_dropped;
  return res;
}

double vandermonde_condition(std::span<const double> nodes, std::size_t degree) {
  Matrix v(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(degree + 1));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double p = 1.0;
    for (std::size_t j = 0; j <= degree; ++j, p *= nodes[i]) {
      v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p;
    }
  }
  const Eigen::JacobiSVD<Matrix> svd(v);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

}  // namespace letcc
