#include "letcc/spline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "letcc/errors.hpp"

namespace letcc {
namespace {

void validate_knots(std::span<const double> knots) {
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i])) throw InvalidArgument("non-finite knot");
    if (i > 0 && !(knots[i - 1] < knots[i])) {
      throw InvalidArgument("knots must be strictly increasing");
    }
  }
}

void validate_values(const Matrix& y, std::size_t n) {
  if (static_cast<std::size_t>(y.rows()) != n) {
    throw InvalidArgument("value rows (" + std::to_string(y.rows()) +
                          ") do not match knot count (" + std::to_string(n) +
                          ")");
  }
  if (y.cols() < 1) throw InvalidArgument("values need at least one column");
  if (!y.allFinite()) throw InvalidArgument("non-finite values");
}

void validate_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw InvalidArgument("lambda must be finite and nonnegative");
  }
}

std::size_t interval_of(std::span<const double> knots, double t) {
  const auto it = std::upper_bound(knots.begin(), knots.end(), t);
  const auto k = static_cast<std::ptrdiff_t>(it - knots.begin()) - 1;
  return static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(knots.size()) - 2));
}

// Value or derivative of the natural cubic spline with knot values g and knot
// second derivatives gamma (column `col`), linear outside the knot range.
double eval_piece(std::span<const double> knots, const Matrix& g,
                  const Matrix& gamma, Eigen::Index col, double t, int order) {
  const std::size_t n = knots.size();
  if (n == 1) return order == 0 ? g(0, col) : 0.0;

  const auto slope_at = [&](std::size_t k, bool right_end) {
    const double h = knots[k + 1] - knots[k];
    const double dg = (g(k + 1, col) - g(k, col)) / h;
    // A = 1, B = 0 at the left end of the piece; A = 0, B = 1 at the right.
    if (!right_end) {
      return dg - h * (2.0 * gamma(k, col) + gamma(k + 1, col)) / 6.0;
    }
    return dg + h * (gamma(k, col) + 2.0 * gamma(k + 1, col)) / 6.0;
  };

  if (t < knots.front()) {
    if (order >= 2) return 0.0;
    const double s = slope_at(0, false);
    return order == 1 ? s : g(0, col) + s * (t - knots.front());
  }
  if (t > knots.back()) {
    if (order >= 2) return 0.0;
    const double s = slope_at(n - 2, true);
    return order == 1 ? s : g(n - 1, col) + s * (t - knots.back());
  }

  const std::size_t k = interval_of(knots, t);
  const double h = knots[k + 1] - knots[k];
  const double a = (knots[k + 1] - t) / h;
  const double b = (t - knots[k]) / h;
  const double g0 = g(k, col), g1 = g(k + 1, col);
  const double c0 = gamma(k, col), c1 = gamma(k + 1, col);
  switch (order) {
    case 0:
      return a * g0 + b * g1 +
             ((a * a * a - a) * c0 + (b * b * b - b) * c1) * h * h / 6.0;
    case 1:
      return (g1 - g0) / h - (3.0 * a * a - 1.0) * h * c0 / 6.0 +
             (3.0 * b * b - 1.0) * h * c1 / 6.0;
    default:
      return a * c0 + b * c1;
  }
}

}  // namespace

namespace detail {

Matrix natural_second_derivatives(std::span<const double> knots,
                                  const Matrix& values) {
  const std::size_t n = knots.size();
  Matrix gamma = Matrix::Zero(values.rows(), values.cols());
  if (n < 3) return gamma;

  // Thomas algorithm on the (n-2)×(n-2) SPD tridiagonal system
  //   h_{i-1}/6 g''_{i-1} + (h_{i-1}+h_i)/3 g''_i + h_i/6 g''_{i+1}
  //     = (g_{i+1}-g_i)/h_i - (g_i-g_{i-1})/h_{i-1}.
  const std::size_t m = n - 2;
  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = knots[i + 1] - knots[i];

  std::vector<double> diag(m), upper(m), lower(m);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t i = r + 1;
    diag[r] = (h[i - 1] + h[i]) / 3.0;
    upper[r] = h[i] / 6.0;
    lower[r] = h[i - 1] / 6.0;
  }
  Matrix rhs(m, values.cols());
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t i = r + 1;
    rhs.row(r) = (values.row(i + 1) - values.row(i)) / h[i] -
                 (values.row(i) - values.row(i - 1)) / h[i - 1];
  }
  std::vector<double> cprime(m);
  cprime[0] = upper[0] / diag[0];
  rhs.row(0) /= diag[0];
  for (std::size_t r = 1; r < m; ++r) {
    const double denom = diag[r] - lower[r] * cprime[r - 1];
    cprime[r] = upper[r] / denom;
    rhs.row(r) = (rhs.row(r) - lower[r] * rhs.row(r - 1)) / denom;
  }
  for (std::size_t r = m - 1; r-- > 0;) {
    rhs.row(r) -= cprime[r] * rhs.row(r + 1);
  }
  gamma.middleRows(1, static_cast<Eigen::Index>(m)) = rhs;
  return gamma;
}

}  // namespace detail

NaturalSplineBasis::NaturalSplineBasis(std::vector<double> knots)
    : knots_(std::move(knots)) {
  if (knots_.size() < 3) {
    throw DegenerateBasis("natural cubic spline basis needs at least 3 knots, got " +
                          std::to_string(knots_.size()));
  }
  validate_knots(knots_);
  const auto n = static_cast<Eigen::Index>(knots_.size());
  second_ = detail::natural_second_derivatives(knots_, Matrix::Identity(n, n));

  // Phi = Q R^{-1} Q' where Q' maps knot values to second divided differences
  // and R^{-1} Q' is the interior block of second_. Q has three nonzeros per
  // column, so each row of Phi combines at most three rows of second_.
  penalty_ = Matrix::Zero(n, n);
  for (Eigen::Index k = 1; k + 1 < n; ++k) {
    const double hl = knots_[k] - knots_[k - 1];
    const double hr = knots_[k + 1] - knots_[k];
    penalty_.row(k - 1) += second_.row(k) / hl;
    penalty_.row(k) -= second_.row(k) * (1.0 / hl + 1.0 / hr);
    penalty_.row(k + 1) += second_.row(k) / hr;
  }
  penalty_ = (0.5 * (penalty_ + penalty_.transpose())).eval();
}

Matrix NaturalSplineBasis::evaluate(std::span<const double> query) const {
  const auto n = static_cast<Eigen::Index>(knots_.size());
  const Matrix identity = Matrix::Identity(n, n);
  Matrix out(static_cast<Eigen::Index>(query.size()), n);
  for (std::size_t r = 0; r < query.size(); ++r) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out(static_cast<Eigen::Index>(r), i) =
          eval_piece(knots_, identity, second_, i, query[r], 0);
    }
  }
  return out;
}

SplineFit::SplineFit(std::shared_ptr<const NaturalSplineBasis> basis,
                     Matrix coefficients, double lambda)
    : basis_(std::move(basis)), coef_(std::move(coefficients)), lambda_(lambda) {
  if (!basis_) throw InvalidArgument("SplineFit requires a basis");
  validate_values(coef_, basis_->dim());
  validate_lambda(lambda_);
  knots_.assign(basis_->knots().begin(), basis_->knots().end());
  second_ = basis_->second_derivatives() * coef_;
}

SplineFit SplineFit::degenerate(std::vector<double> knots, Matrix values) {
  if (knots.empty() || knots.size() > 2) {
    throw InvalidArgument("degenerate fits take one or two points");
  }
  validate_knots(knots);
  validate_values(values, knots.size());
  SplineFit f;
  f.knots_ = std::move(knots);
  f.coef_ = std::move(values);
  f.second_ = Matrix::Zero(f.coef_.rows(), f.coef_.cols());
  return f;
}

Matrix SplineFit::evaluate(std::span<const double> query) const {
  return derivative(query, 0);
}

Matrix SplineFit::derivative(std::span<const double> query, int order) const {
  if (order < 0 || order > 2) throw InvalidArgument("derivative order must be 0, 1 or 2");
  Matrix out(static_cast<Eigen::Index>(query.size()), coef_.cols());
  for (std::size_t r = 0; r < query.size(); ++r) {
    for (Eigen::Index c = 0; c < coef_.cols(); ++c) {
      out(static_cast<Eigen::Index>(r), c) =
          eval_piece(knots_, coef_, second_, c, query[r], order);
    }
  }
  return out;
}

NaturalSplineBasis build_basis(std::vector<double> knots) {
  return NaturalSplineBasis(std::move(knots));
}

const Matrix& penalty_matrix(const NaturalSplineBasis& basis) {
  return basis.penalty();
}

SplineFit fit(std::shared_ptr<const NaturalSplineBasis> basis, const Matrix& y,
              double lambda) {
  if (!basis) throw InvalidArgument("fit requires a basis");
  validate_values(y, basis->dim());
  validate_lambda(lambda);
  if (lambda == 0.0) return SplineFit(std::move(basis), y, 0.0);

  // Reinsch form of (I + n lambda Phi) xi = y with Phi = Q R^{-1} Q':
  //   (R + n lambda Q'Q) gamma = Q'y,  xi = y - n lambda Q gamma.
  // Unlike the direct system it stays well conditioned as lambda grows, where
  // xi tends to the least-squares line.
  const auto knots = basis->knots();
  const auto n = static_cast<Eigen::Index>(knots.size());
  const Eigen::Index m = n - 2;
  Matrix q = Matrix::Zero(n, m);
  Matrix r = Matrix::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double hl = knots[j + 1] - knots[j];
    const double hr = knots[j + 2] - knots[j + 1];
    q(j, j) = 1.0 / hl;
    q(j + 1, j) = -(1.0 / hl + 1.0 / hr);
    q(j + 2, j) = 1.0 / hr;
    r(j, j) = (hl + hr) / 3.0;
    if (j + 1 < m) r(j, j + 1) = r(j + 1, j) = hr / 6.0;
  }
  const double nl = static_cast<double>(n) * lambda;
  const Eigen::LLT<Matrix> llt(r + nl * (q.transpose() * q));
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("smoothing spline system is not positive definite");
  }
  const Matrix gamma = llt.solve(q.transpose() * y);
  Matrix coef = y - nl * (q * gamma);
  if (!coef.allFinite()) throw NumericalFailure("smoothing spline solve produced non-finite coefficients");
  return SplineFit(std::move(basis), std::move(coef), lambda);
}

SplineFit fit(std::span<const double> t, const Matrix& y, double lambda) {
  auto basis = std::make_shared<const NaturalSplineBasis>(
      std::vector<double>(t.begin(), t.end()));
  return fit(std::move(basis), y, lambda);
}

SplineFit fit_or_degrade(std::span<const double> t, const Matrix& y,
                         double lambda) {
  if (t.empty()) throw InvalidArgument("cannot fit a spline to zero points");
  validate_lambda(lambda);
  if (t.size() < 3) {
    return SplineFit::degenerate(std::vector<double>(t.begin(), t.end()), y);
  }
  return fit(t, y, lambda);
}

Matrix evaluate(const SplineFit& fit, std::span<const double> query) {
  return fit.evaluate(query);
}

double roughness(const SplineFit& fit) {
  if (fit.is_degenerate()) return 0.0;
  const Matrix& c = fit.coefficients();
  const double r = (c.transpose() * fit.basis()->penalty() * c).trace();
  return std::max(r, 0.0);
}

}  // namespace letcc
