#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "letcc/points.hpp"
#include "letcc/spline.hpp"
#include "letcc/types.hpp"

namespace letcc {

/// K input vectors of dimension d, one per row.
class Dataset {
 public:
  explicit Dataset(Matrix inputs);

  const Matrix& inputs() const { return inputs_; }
  std::size_t k() const { return static_cast<std::size_t>(inputs_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(inputs_.cols()); }

 private:
  Matrix inputs_;
};

/// What the master sends out: one coded point per worker.
struct CodedBatch {
  Matrix coded;               ///< N×d; row n is u_enc(beta_n)
  Matrix encoder_at_alphas;   ///< K×d; u_enc(alpha_k)
  std::optional<SplineFit> encoder_fit;  ///< set by the spline encoder only
};

/// Outputs of the non-straggling workers. Row i of `outputs` belongs to
/// worker `workers[i]` (an index into the grid's betas).
struct WorkerReturns {
  std::vector<std::size_t> workers;
  Matrix outputs;
};

struct DecodeResult {
  Matrix estimates;  ///< K×m; estimate of f(x_k)
  std::optional<SplineFit> decoder_fit;
  std::size_t survivor_count = 0;
  /// Fit fell back below its normal regime (spline: < 3 survivors;
  /// Lagrange: below the recovery threshold).
  bool degraded = false;
  std::size_t duplicates_dropped = 0;
};

/// Smoothing-spline encoder through (alpha_k, x_k), evaluated at the betas.
/// lambda_e = 0 interpolates.
CodedBatch encode(const Dataset& data, const InterpolationGrid& grid,
                  double lambda_e);

/// (1/K) sum_k ||u_enc(alpha_k) - x_k||^2.
double encoder_training_error(const CodedBatch& batch, const Dataset& data,
                              const InterpolationGrid& grid);

/// Smoothing-spline decoder through the surviving (beta_v, output_v),
/// evaluated at the alphas. Survivors may arrive in any order; a worker
/// reported twice keeps its first output. Throws DecodeFailure with no
/// survivors; one or two survivors give a constant or affine estimate.
DecodeResult decode(const WorkerReturns& returns, const InterpolationGrid& grid,
                    double lambda_d);

namespace detail {

/// Survivors sorted by worker index (equivalently by beta), first report
/// kept for duplicates. Validates indices against the grid.
struct SortedSurvivors {
  std::vector<double> betas;
  Matrix outputs;
  std::size_t duplicates_dropped = 0;
};
SortedSurvivors sort_survivors(const WorkerReturns& returns,
                               const InterpolationGrid& grid);

}  // namespace detail
}  // namespace letcc
