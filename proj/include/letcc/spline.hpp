#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "letcc/types.hpp"

namespace letcc {

/// Cardinal basis of the natural cubic splines on a knot set: b_i is the
/// natural cubic spline with b_i(t_j) = delta_ij. Coefficients in this basis
/// are therefore the spline's values at the knots, and the evaluation matrix
/// at the knots is the identity.
class NaturalSplineBasis {
 public:
  /// Throws DegenerateBasis for fewer than 3 knots, InvalidArgument for
  /// non-finite or non-increasing knots.
  explicit NaturalSplineBasis(std::vector<double> knots);

  std::span<const double> knots() const { return knots_; }
  std::size_t dim() const { return knots_.size(); }

  /// q×n matrix with entry (r, i) = b_i(query[r]); linear beyond the
  /// boundary knots.
  Matrix evaluate(std::span<const double> query) const;

  /// n×n matrix whose column i holds b_i'' at the knots. First and last rows
  /// are zero (natural boundary conditions).
  const Matrix& second_derivatives() const { return second_; }

  /// Phi(i, j) = integral of b_i'' b_j'' over the domain, in closed form.
  const Matrix& penalty() const { return penalty_; }

 private:
  std::vector<double> knots_;
  Matrix second_;
  Matrix penalty_;
};

/// Vector-valued natural cubic spline: one coefficient column per output
/// dimension over a shared knot set. Immutable.
class SplineFit {
 public:
  SplineFit(std::shared_ptr<const NaturalSplineBasis> basis, Matrix coefficients,
            double lambda);

  /// Fits through one or two points: a constant or the line through them.
  /// These are the only natural splines on so few knots.
  static SplineFit degenerate(std::vector<double> knots, Matrix values);

  std::span<const double> knots() const { return knots_; }
  /// n×m. Row i is the fitted value at knot i.
  const Matrix& coefficients() const { return coef_; }
  /// n×m second derivatives at the knots.
  const Matrix& second_derivatives() const { return second_; }
  double lambda() const { return lambda_; }
  std::size_t dims() const { return static_cast<std::size_t>(coef_.cols()); }
  bool is_degenerate() const { return basis_ == nullptr; }
  /// Null for degenerate fits.
  const NaturalSplineBasis* basis() const { return basis_.get(); }

  /// q×m values; linear extrapolation outside the knot range.
  Matrix evaluate(std::span<const double> query) const;
  /// q×m first (order 1) or second (order 2) derivative.
  Matrix derivative(std::span<const double> query, int order) const;

 private:
  SplineFit() = default;

  std::shared_ptr<const NaturalSplineBasis> basis_;
  std::vector<double> knots_;
  Matrix coef_;
  Matrix second_;
  double lambda_ = 0.0;
};

NaturalSplineBasis build_basis(std::vector<double> knots);

/// The penalty matrix of a basis (same as basis.penalty()).
const Matrix& penalty_matrix(const NaturalSplineBasis& basis);

/// Smoothing spline minimizing
///   (1/n) sum_i ||u(t_i) - Y_i||^2 + lambda * sum_j integral (u_j'')^2.
/// With the 1/n data term the normal equations are (N'N + n*lambda*Phi) xi = N'Y
/// (N = I for the cardinal basis). All m columns share one Cholesky
/// factorization. lambda = 0 interpolates.
SplineFit fit(std::span<const double> t, const Matrix& y, double lambda);
SplineFit fit(std::shared_ptr<const NaturalSplineBasis> basis, const Matrix& y,
              double lambda);

/// As fit(), but one or two points give SplineFit::degenerate() instead of
/// throwing. Zero points still throw InvalidArgument.
SplineFit fit_or_degrade(std::span<const double> t, const Matrix& y,
                         double lambda);

Matrix evaluate(const SplineFit& fit, std::span<const double> query);

/// sum_j coef_j' Phi coef_j. Zero for degenerate fits.
double roughness(const SplineFit& fit);

namespace detail {

/// Second derivatives at the knots of the natural cubic interpolant of
/// `values` (n×m); solves the tridiagonal system for the interior knots.
Matrix natural_second_derivatives(std::span<const double> knots,
                                  const Matrix& values);

}  // namespace detail
}  // namespace letcc
