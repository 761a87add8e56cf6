#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "letcc/errors.hpp"
#include "letcc/points.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace letcc;

TEST_CASE("chebyshev_first small grids", "[points]") {
  REQUIRE(chebyshev_first(1) == std::vector<double>{0.0});
  const auto two = chebyshev_first(2);
  REQUIRE(two.size() == 2);
  CHECK_THAT(two[0], WithinAbs(-std::sqrt(2.0) / 2.0, 1e-15));
  CHECK_THAT(two[1], WithinAbs(std::sqrt(2.0) / 2.0, 1e-15));
  REQUIRE_THROWS_AS(chebyshev_first(0), InvalidArgument);
}

TEST_CASE("chebyshev_first K=30 is the cosine grid up to ordering", "[points]") {
  const auto got = chebyshev_first(30);
  std::vector<double> want;
  for (int k = 1; k <= 30; ++k) want.push_back(std::cos((2.0 * k - 1.0) * std::numbers::pi / 60.0));
  std::sort(want.begin(), want.end());
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK_THAT(got[i], WithinAbs(want[i], 1e-15));
}

TEST_CASE("chebyshev_first never touches the endpoints", "[points]") {
  for (std::size_t k = 1; k <= 200; ++k) {
    const auto a = chebyshev_first(k);
    REQUIRE(std::is_sorted(a.begin(), a.end()));
    REQUIRE(std::adjacent_find(a.begin(), a.end()) == a.end());
    REQUIRE(a.front() > -1.0);
    REQUIRE(a.back() < 1.0);
  }
}

TEST_CASE("chebyshev_second small grids", "[points]") {
  REQUIRE(chebyshev_second(3) == std::vector<double>{-1.0, 0.0, 1.0});
  const auto four = chebyshev_second(4);
  const std::vector<double> want4{-1.0, -0.5, 0.5, 1.0};
  for (std::size_t i = 0; i < 4; ++i) CHECK_THAT(four[i], WithinAbs(want4[i], 1e-15));
  const auto five = chebyshev_second(5);
  const double r = std::sqrt(2.0) / 2.0;
  const std::vector<double> want5{-1.0, -r, 0.0, r, 1.0};
  for (std::size_t i = 0; i < 5; ++i) CHECK_THAT(five[i], WithinAbs(want5[i], 1e-15));
  REQUIRE_THROWS_AS(chebyshev_second(2), InvalidArgument);
  REQUIRE_THROWS_AS(chebyshev_second(0), InvalidArgument);
}

TEST_CASE("grids are symmetric and bit-reproducible", "[points]") {
  for (std::size_t n : {3u, 4u, 17u, 64u, 513u}) {
    const auto b = chebyshev_second(n);
    REQUIRE(b == chebyshev_second(n));
    REQUIRE(b.front() == -1.0);
    REQUIRE(b.back() == 1.0);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(b[i] == -b[n - 1 - i]);
  }
}

TEST_CASE("mesh_stats hand-evaluated cases", "[points]") {
  const std::vector<double> p1{-1.0, 0.0, 1.0};
  const auto m1 = mesh_stats(p1);
  CHECK(m1.delta_max == 1.0);
  CHECK(m1.delta_min == 1.0);
  CHECK(m1.ratio == 1.0);

  const std::vector<double> p2{-0.5, 0.5};
  const auto m2 = mesh_stats(p2);
  CHECK(m2.delta_max == 1.0);
  CHECK(m2.delta_min == 1.0);

  // boundary gap dominates the maximum but never the minimum
  const std::vector<double> p3{-0.2, 0.0, 0.2};
  const auto m3 = mesh_stats(p3);
  CHECK_THAT(m3.delta_max, WithinAbs(0.8, 1e-15));
  CHECK_THAT(m3.delta_min, WithinAbs(0.2, 1e-15));

  const std::vector<double> one{0.0};
  REQUIRE_THROWS_AS(mesh_stats(one), InvalidArgument);
}

TEST_CASE("mesh ratio of uniform grids is one", "[points]") {
  for (std::size_t n : {3u, 10u, 101u}) {
    std::vector<double> u;
    for (std::size_t i = 0; i < n; ++i) u.push_back(-1.0 + 2.0 * i / static_cast<double>(n - 1));
    CHECK_THAT(mesh_stats(u).ratio, WithinAbs(1.0, 1e-12));
  }
}

// Gaps of cos(k pi / M) are 2 sin((2k-1) pi / 2M) sin(pi / 2M): the smallest sits
// at the ends and the largest at the centre, so the ratio is cot(pi / 2M) for
// even M and 1 / sin(pi / 2M) for odd M. It grows like 2(N-1)/pi.
TEST_CASE("second-kind mesh ratio follows its closed form", "[points][property]") {
  for (std::size_t n = 3; n <= 4096; ++n) {
    const auto s = mesh_stats(chebyshev_second(n));
    REQUIRE(s.delta_max >= s.delta_min);
    REQUIRE(s.delta_min > 0.0);
    const double m = static_cast<double>(n - 1);
    const double x = std::numbers::pi / (2.0 * m);
    const double want = (n - 1) % 2 == 0 ? std::cos(x) / std::sin(x) : 1.0 / std::sin(x);
    REQUIRE_THAT(s.ratio, WithinRel(want, 1e-9));
    if (n <= 5) {
      REQUIRE(s.ratio <= std::numbers::pi);
    } else {
      REQUIRE(s.ratio > std::numbers::pi);
    }
  }
}

TEST_CASE("InterpolationGrid validation", "[points]") {
  REQUIRE_NOTHROW(InterpolationGrid::chebyshev(1, 3));
  const auto g = InterpolationGrid::chebyshev(16, 64);
  CHECK(g.k() == 16);
  CHECK(g.n() == 64);
  REQUIRE_THROWS_AS(InterpolationGrid({}, {-1, 0, 1}), InvalidArgument);
  REQUIRE_THROWS_AS(InterpolationGrid({0.0}, {-1, 1}), InvalidArgument);
  REQUIRE_THROWS_AS(InterpolationGrid({0.1, 0.1}, {-1, 0, 1}), InvalidArgument);
  REQUIRE_THROWS_AS(InterpolationGrid({0.2, 0.1}, {-1, 0, 1}), InvalidArgument);
  REQUIRE_THROWS_AS(InterpolationGrid({0.0}, {-1, 0, 1.5}), InvalidArgument);
  REQUIRE_THROWS_AS(InterpolationGrid({0.0}, {-1, 0.5, 0.5}), InvalidArgument);
}
