#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "letcc/types.hpp"

namespace letcc {

/// The computation every worker applies, f: R^d -> R^m. Evaluators are pure
/// and safe to call concurrently.
struct WorkerFunction {
  std::string name;
  std::size_t in_dim = 1;
  std::size_t out_dim = 1;
  std::function<Vector(const Vector&)> eval;
  /// Lipschitz constant (2-norm) valid on the box [-radius, radius]^d.
  std::function<double(double radius)> lipschitz;
  std::optional<double> second_derivative_bound;
  /// Polynomial degree, when f is a polynomial.
  std::optional<std::size_t> degree;

  /// Applies f to every row.
  Matrix apply(const Matrix& x) const;
};

/// Built-in functions. Elementwise ones (identity, affine, sin_pi, square,
/// cubic, softplus, constant) map R^d -> R^d; `mlp` is a fixed-seed
/// tanh network with a softmax head, R^d -> R^m.
WorkerFunction make_worker_function(const std::string& id, std::size_t d = 1,
                                    std::size_t m = 0);

std::vector<std::string> worker_function_ids();

}  // namespace letcc
