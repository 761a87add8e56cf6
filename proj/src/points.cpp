#include "letcc/points.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "letcc/errors.hpp"

namespace letcc {
namespace {

void require_ordered(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < -1.0 || v[i] > 1.0) {
      throw InvalidArgument(std::string(what) + " must lie in [-1, 1]");
    }
    if (i > 0 && !(v[i - 1] < v[i])) {
      throw InvalidArgument(std::string(what) +
                            " must be strictly increasing without duplicates");
    }
  }
}

}  // namespace

InterpolationGrid::InterpolationGrid(std::vector<double> alphas,
                                     std::vector<double> betas)
    : alphas_(std::move(alphas)), betas_(std::move(betas)) {
  if (alphas_.empty()) throw InvalidArgument("grid needs K >= 1 alphas");
  if (betas_.size() < 3) throw InvalidArgument("grid needs N >= 3 betas");
  require_ordered(alphas_, "alphas");
  require_ordered(betas_, "betas");
}

InterpolationGrid InterpolationGrid::chebyshev(std::size_t k, std::size_t n) {
  return InterpolationGrid(chebyshev_first(k), chebyshev_second(n));
}

// cos(theta) is evaluated as sin(pi/2 - theta) with the argument formed from
// integers, so the grids are exactly symmetric and the middle point is 0.
std::vector<double> chebyshev_first(std::size_t k) {
  if (k == 0) throw InvalidArgument("chebyshev_first: K must be >= 1");
  std::vector<double> pts(k);
  const double denom = 2.0 * static_cast<double>(k);
  for (std::size_t i = 1; i <= k; ++i) {
    const auto num = static_cast<double>(static_cast<long long>(k) -
                                         2 * static_cast<long long>(i) + 1);
    pts[k - i] = std::sin(std::numbers::pi * num / denom);
  }
  return pts;
}

std::vector<double> chebyshev_second(std::size_t n) {
  if (n < 3) throw InvalidArgument("chebyshev_second: N must be >= 3");
  std::vector<double> pts(n);
  const auto m = static_cast<long long>(n) - 1;
  const double denom = 2.0 * static_cast<double>(m);
  for (long long i = 0; i <= m; ++i) {
    pts[static_cast<std::size_t>(m - i)] =
        std::sin(std::numbers::pi * static_cast<double>(m - 2 * i) / denom);
  }
  return pts;
}

MeshStats mesh_stats(std::span<const double> points, double lo, double hi) {
  if (points.size() < 2) {
    throw InvalidArgument("mesh_stats needs at least two points");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i]) || points[i] < lo || points[i] > hi) {
      throw InvalidArgument("mesh_stats: point outside the domain");
    }
    if (i > 0 && !(points[i - 1] < points[i])) {
      throw InvalidArgument("mesh_stats: points must be strictly increasing");
    }
  }
  MeshStats st;
  st.delta_max = std::max(points.front() - lo, hi - points.back());
  st.delta_min = points[1] - points[0];
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double gap = points[i + 1] - points[i];
    st.delta_max = std::max(st.delta_max, gap);
    st.delta_min = std::min(st.delta_min, gap);
  }
  st.ratio = st.delta_max / st.delta_min;
  return st;
}

}  // namespace letcc
