#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace letcc {

/// Encoder points (alphas) and worker points (betas), both strictly
/// increasing inside [-1, 1].
class InterpolationGrid {
 public:
  /// Throws InvalidArgument unless K >= 1, N >= 3, both strictly increasing
  /// and inside [-1, 1].
  InterpolationGrid(std::vector<double> alphas, std::vector<double> betas);

  /// First-kind Chebyshev alphas, second-kind Chebyshev betas.
  static InterpolationGrid chebyshev(std::size_t k, std::size_t n);

  std::span<const double> alphas() const { return alphas_; }
  std::span<const double> betas() const { return betas_; }
  std::size_t k() const { return alphas_.size(); }
  std::size_t n() const { return betas_.size(); }

 private:
  std::vector<double> alphas_;
  std::vector<double> betas_;
};

struct MeshStats {
  double delta_max = 0.0;
  double delta_min = 0.0;
  double ratio = 0.0;
};

/// cos((2k-1)pi/(2K)), k = 1..K, ascending. Never contains +-1.
std::vector<double> chebyshev_first(std::size_t k);

/// cos((n-1)pi/(N-1)), n = 1..N, ascending; includes both endpoints.
std::vector<double> chebyshev_second(std::size_t n);

/// Largest consecutive gap including the two boundary gaps to lo and hi,
/// smallest gap over interior pairs only.
MeshStats mesh_stats(std::span<const double> points, double lo = -1.0,
                     double hi = 1.0);

}  // namespace letcc
