#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "letcc/coding.hpp"
#include "letcc/points.hpp"
#include "letcc/types.hpp"

namespace letcc {

/// Berrut's first rational barycentric interpolant,
///   r(t) = sum_j w_j y_j / (t - t_j)  /  sum_j w_j / (t - t_j),
/// with w_j = (-1)^j over the nodes in ascending order. Pole-free on the
/// real line; reproduces constants.
class BerrutInterpolant {
 public:
  /// Nodes are sorted (values follow). Throws InvalidArgument on empty or
  /// duplicate nodes.
  BerrutInterpolant(std::vector<double> nodes, Matrix values);

  std::span<const double> nodes() const { return nodes_; }
  const Matrix& values() const { return values_; }

  /// Queries within 1e-14 of a node return that node's value.
  Matrix evaluate(std::span<const double> query) const;

 private:
  std::vector<double> nodes_;
  Matrix values_;
};

Matrix berrut_eval(const BerrutInterpolant& interp, std::span<const double> query);

CodedBatch bacc_encode(const Dataset& data, const InterpolationGrid& grid);
DecodeResult bacc_decode(const WorkerReturns& returns, const InterpolationGrid& grid);

/// Degree bookkeeping for Lagrange coded computing over the reals.
struct LagrangeCodec {
  std::size_t k = 1;
  std::size_t f_degree = 1;

  /// Degree of f(u_enc(t)): (K-1) * deg(f).
  std::size_t composed_degree() const { return (k - 1) * f_degree; }
  /// Survivors needed for exact recovery: (K-1) deg(f) + 1.
  std::size_t survivor_threshold() const { return composed_degree() + 1; }
  /// Workers needed to tolerate S stragglers: (K-1) deg(f) + S + 1.
  std::size_t recovery_threshold(std::size_t stragglers) const {
    return survivor_threshold() + stragglers;
  }
};

/// Values of the degree-(K-1) interpolating polynomial through
/// (alpha_k, x_k) at the betas, in barycentric (second) form.
CodedBatch lcc_encode(const Dataset& data, const InterpolationGrid& grid);

/// With at least (K-1) deg(f) + 1 survivors, least-squares fits the
/// degree-(K-1) deg(f) polynomial (exact for data on such a polynomial);
/// otherwise fits the highest degree the survivors support and flags the
/// result as degraded.
DecodeResult lcc_decode(const WorkerReturns& returns, const InterpolationGrid& grid,
                        std::size_t f_degree);

/// 2-norm condition number of the monomial Vandermonde matrix of `degree`
/// on the given nodes. Diagnostic for the real-valued instability of LCC.
double vandermonde_condition(std::span<const double> nodes, std::size_t degree);

namespace detail {

/// Barycentric weights 1 / prod_{k != j} (t_j - t_k).
std::vector<double> lagrange_weights(std::span<const double> nodes);

/// Evaluates the interpolating polynomial through (nodes, values).
Matrix lagrange_eval(std::span<const double> nodes, const Matrix& values,
                     std::span<const double> query);

}  // namespace detail
}  // namespace letcc
