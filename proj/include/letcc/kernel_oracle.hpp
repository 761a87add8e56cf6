#pragma once

#include <span>
#include <vector>

#include "letcc/types.hpp"

namespace letcc {

/// Reproducing kernel of the second-order Sobolev functions on (-1, 1) that
/// vanish with their first derivative at -1:
///   R0(t, s) = integral_{-1}^{min(t, s)} (t - x)(s - x) dx,
/// with the range clamped to the domain, so R0 = 0 whenever min(t, s) <= -1.
double sobolev_kernel_r0(double t, double s);

/// Smoothing spline in kernel form, d0 + d1 t + sum_v c_v R0(t, t_v).
/// A second, independent route to the same minimizer that fit() computes in
/// the natural-spline basis; used to cross-check it.
class KernelOracleFit {
 public:
  KernelOracleFit(std::vector<double> nodes, Matrix c, Matrix d, double lambda);

  std::span<const double> nodes() const { return nodes_; }
  /// n×m kernel coefficients.
  const Matrix& c() const { return c_; }
  /// 2×m affine coefficients (row 0 constant, row 1 slope).
  const Matrix& d() const { return d_; }
  double lambda() const { return lambda_; }

  Matrix evaluate(std::span<const double> query) const;

 private:
  std::vector<double> nodes_;
  Matrix c_;
  Matrix d_;
  double lambda_;
};

/// Minimizes the same (1/n)-normalized objective as fit(). Solves the
/// bordered system [Sigma + n*lambda*I, T; T', 0] [c; d] = [Y; 0].
KernelOracleFit kernel_oracle_fit(std::span<const double> t, const Matrix& y,
                                  double lambda);

}  // namespace letcc
