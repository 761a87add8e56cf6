#include "letcc/kernel_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "letcc/errors.hpp"

namespace letcc {

double sobolev_kernel_r0(double t, double s) {
  // Shift to y = x + 1 on [0, w]: integral (a - y)(b - y) dy
  //   = a b w - (a + b) w^2 / 2 + w^3 / 3.
  const double a = t + 1.0;
  const double b = s + 1.0;
  const double w = std::clamp(std::min(a, b), 0.0, 2.0);
  return a * b * w - (a + b) * w * w / 2.0 + w * w * w / 3.0;
}

KernelOracleFit::KernelOracleFit(std::vector<double> nodes, Matrix c, Matrix d,
                                 double lambda)
    : nodes_(std::move(nodes)), c_(std::move(c)), d_(std::move(d)), lambda_(lambda) {
  if (static_cast<std::size_t>(c_.rows()) != nodes_.size() || d_.rows() != 2 ||
      c_.cols() != d_.cols()) {
    throw InvalidArgument("kernel fit coefficient shapes are inconsistent");
  }
}

Matrix KernelOracleFit::evaluate(std::span<const double> query) const {
  Matrix out(static_cast<Eigen::Index>(query.size()), c_.cols());
  for (std::size_t r = 0; r < query.size(); ++r) {
    const double t = query[r];
    Eigen::RowVectorXd row = d_.row(0) + t * d_.row(1);
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
      row += sobolev_kernel_r0(t, nodes_[v]) * c_.row(static_cast<Eigen::Index>(v));
    }
    out.row(static_cast<Eigen::Index>(r)) = row;
  }
  return out;
}

KernelOracleFit kernel_oracle_fit(std::span<const double> t, const Matrix& y,
                                  double lambda) {
  const auto n = static_cast<Eigen::Index>(t.size());
  if (n < 3) throw DegenerateBasis("kernel oracle needs at least 3 nodes");
  if (y.rows() != n || y.cols() < 1) throw InvalidArgument("value shape mismatch");
  if (!y.allFinite()) throw InvalidArgument("non-finite values");
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw InvalidArgument("lambda must be finite and nonnegative");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(t[i]) || (i > 0 && !(t[i - 1] < t[i]))) {
      throw InvalidArgument("nodes must be finite and strictly increasing");
    }
  }

  Matrix system = Matrix::Zero(n + 2, n + 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      system(i, j) = sobolev_kernel_r0(t[i], t[j]);
    }
    system(i, i) += static_cast<double>(n) * lambda;
    system(i, n) = 1.0;
    system(i, n + 1) = t[i];
    system(n, i) = 1.0;
    system(n + 1, i) = t[i];
  }
  Matrix rhs = Matrix::Zero(n + 2, y.cols());
  rhs.topRows(n) = y;

  const Eigen::FullPivLU<Matrix> lu(system);
  if (!lu.isInvertible()) throw NumericalFailure("kernel system is singular");
  const Matrix sol = lu.solve(rhs);
  return KernelOracleFit(std::vector<double>(t.begin(), t.end()), sol.topRows(n),
                         sol.bottomRows(2), lambda);
}

}  // namespace letcc
