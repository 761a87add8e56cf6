#pragma once

#include <Eigen/Dense>

namespace letcc {

/// Row-per-sample matrices throughout: K×d inputs, N×d coded points, K×m outputs.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace letcc
