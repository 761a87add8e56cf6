#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "letcc/errors.hpp"
#include "letcc/kernel_oracle.hpp"
#include "letcc/points.hpp"
#include "letcc/spline.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace letcc;

namespace {

Matrix column(const std::vector<double>& v) {
  Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = v[i];
  return m;
}

std::vector<double> grid(double lo, double hi, std::size_t n) {
  std::vector<double> g;
  for (std::size_t i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / static_cast<double>(n - 1));
  return g;
}

Matrix random_matrix(std::size_t r, std::size_t c, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = u(gen);
  return m;
}

double spline_objective(const SplineFit& s, std::span<const double> t, const Matrix& y,
                        double lambda) {
  const Matrix at = s.evaluate(t);
  const double data = (at - y).squaredNorm() / static_cast<double>(t.size());
  return data + lambda * roughness(s);
}

}  // namespace

TEST_CASE("basis construction", "[spline]") {
  const auto b = build_basis({-1.0, 0.0, 1.0});
  CHECK(b.dim() == 3);
  REQUIRE_THROWS_AS(build_basis({-1.0, 1.0}), DegenerateBasis);
  REQUIRE_THROWS_AS(build_basis({0.0, 0.0, 1.0}), InvalidArgument);
  REQUIRE_THROWS_AS(build_basis({0.0, NAN, 1.0}), InvalidArgument);
}

TEST_CASE("basis evaluated at its knots is invertible", "[spline]") {
  const auto knots = chebyshev_second(8);
  const auto b = build_basis(knots);
  const Matrix e = b.evaluate(knots);
  Eigen::FullPivLU<Matrix> lu(e);
  CHECK(lu.isInvertible());
  CHECK((e - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("basis elements are natural cubic splines", "[spline]") {
  const auto knots = chebyshev_second(9);
  const auto b = build_basis(knots);
  for (std::size_t i = 0; i < knots.size(); ++i) {
    std::vector<double> e(knots.size(), 0.0);
    e[i] = 1.0;
    const oracle::NaturalCubic ref(knots, e);
    const auto q = grid(-1.0, 1.0, 101);
    const Matrix got = b.evaluate(q);
    for (std::size_t r = 0; r < q.size(); ++r) {
      CHECK_THAT(got(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)),
                 WithinAbs(ref.value(q[r]), 1e-12));
    }
  }
}

TEST_CASE("affine functions are reproduced and penalty-free", "[spline]") {
  const auto knots = chebyshev_second(12);
  const auto b = build_basis(knots);
  Vector one = Vector::Ones(12), lin(12);
  for (std::size_t i = 0; i < 12; ++i) lin(static_cast<Eigen::Index>(i)) = knots[i];
  CHECK((b.penalty() * one).cwiseAbs().maxCoeff() < 1e-9 * b.penalty().cwiseAbs().maxCoeff());
  CHECK((b.penalty() * lin).cwiseAbs().maxCoeff() < 1e-9 * b.penalty().cwiseAbs().maxCoeff());

  const std::vector<double> t{-1.0, 0.0, 1.0};
  const Matrix y = column({-1.0, 1.0, 3.0});
  for (double lambda : {0.0, 1e-6, 1e3}) {
    const auto f = fit(t, y, lambda);
    CHECK((f.evaluate(t) - y).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK_THAT(roughness(f), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("penalty matrix is symmetric PSD with the affine null space", "[spline]") {
  const auto b = build_basis(chebyshev_second(16));
  const Matrix& p = penalty_matrix(b);
  CHECK((p - p.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * p.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  const auto ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  CHECK(ev.minCoeff() >= -1e-10 * top);
  int near_zero = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) near_zero += ev(i) < 1e-10 * top;
  CHECK(near_zero == 2);
}

TEST_CASE("penalty entries match quadrature of basis second derivatives", "[spline]") {
  const auto knots = chebyshev_second(7);
  const auto b = build_basis(knots);
  for (std::size_t i = 0; i < knots.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      std::vector<double> ei(knots.size(), 0.0), ej(knots.size(), 0.0);
      ei[i] = 1.0;
      ej[j] = 1.0;
      const oracle::NaturalCubic ri(knots, ei), rj(knots, ej);
      const double q = oracle::integrate_pieces(
          [&](double t) { return ri.second(t) * rj.second(t); }, knots);
      CHECK_THAT(b.penalty()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                 WithinAbs(q, 1e-8 * std::max(1.0, std::abs(q))));
    }
  }
}

TEST_CASE("roughness of the t^2 interpolant matches quadrature", "[spline]") {
  for (std::size_t n : {8u, 16u}) {
    const auto knots = chebyshev_second(n);
    std::vector<double> y;
    for (double t : knots) y.push_back(t * t);
    const auto f = fit(knots, column(y), 0.0);
    const oracle::NaturalCubic ref(knots, y);
    const double q = oracle::integrate_pieces([&](double t) { return std::pow(ref.second(t), 2); },
                                              knots);
    CHECK_THAT(roughness(f), WithinRel(q, 1e-6));
  }
}

TEST_CASE("lambda = 0 interpolates arbitrary data", "[spline]") {
  for (std::size_t n : {3u, 8u, 33u, 64u}) {
    const auto knots = chebyshev_second(n);
    const Matrix y = random_matrix(n, 3, static_cast<unsigned>(n));
    const auto f = fit(knots, y, 0.0);
    CHECK((f.evaluate(knots) - y).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("interpolant agrees with the piecewise-system oracle", "[spline]") {
  const auto knots = chebyshev_second(20);
  const Matrix y = random_matrix(20, 1, 5);
  std::vector<double> yv(y.data(), y.data() + 20);
  const oracle::NaturalCubic ref(knots, yv);
  const auto f = fit(knots, y, 0.0);
  const auto q = grid(-1.0, 1.0, 777);
  const Matrix got = f.evaluate(q);
  const Matrix d2 = f.derivative(q, 2);
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK_THAT(got(static_cast<Eigen::Index>(i), 0), WithinAbs(ref.value(q[i]), 1e-10));
    CHECK_THAT(d2(static_cast<Eigen::Index>(i), 0), WithinAbs(ref.second(q[i]), 1e-7));
  }
}

TEST_CASE("fit is linear in the data", "[spline]") {
  const auto knots = chebyshev_second(25);
  const Matrix y1 = random_matrix(25, 2, 1), y2 = random_matrix(25, 2, 2);
  const double a = 1.7, c = -0.3;
  const auto q = grid(-1.2, 1.2, 200);
  for (double lambda : {0.0, 1e-5, 1e-2}) {
    const Matrix lhs = fit(knots, a * y1 + c * y2, lambda).evaluate(q);
    const Matrix rhs = a * fit(knots, y1, lambda).evaluate(q) + c * fit(knots, y2, lambda).evaluate(q);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("vector fit equals per-dimension fits", "[spline]") {
  const auto knots = chebyshev_second(15);
  const Matrix y = random_matrix(15, 4, 9);
  const auto q = grid(-1.0, 1.0, 50);
  const Matrix all = fit(knots, y, 1e-4).evaluate(q);
  for (Eigen::Index j = 0; j < 4; ++j) {
    const Matrix one = fit(knots, Matrix(y.col(j)), 1e-4).evaluate(q);
    CHECK((all.col(j) - one.col(0)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("huge lambda approaches the least-squares line", "[spline]") {
  const auto knots = chebyshev_second(11);
  std::vector<double> y;
  for (double t : knots) y.push_back(std::sin(3.0 * t) + t * t);
  const auto [b0, b1] = oracle::ols(knots, y);
  const auto f = fit(knots, column(y), 1e9);
  const auto q = grid(-1.0, 1.0, 41);
  const Matrix got = f.evaluate(q);
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK_THAT(got(static_cast<Eigen::Index>(i), 0), WithinAbs(b0 + b1 * q[i], 1e-6));
  }
}

TEST_CASE("the 1/n convention: fit solves (I + n lambda Phi) xi = y", "[spline]") {
  const auto knots = chebyshev_second(10);
  const Matrix y = random_matrix(10, 1, 3);
  const double lambda = 1e-3;
  const auto f = fit(knots, y, lambda);
  const auto b = build_basis(knots);
  const Matrix sys = Matrix::Identity(10, 10) + 10.0 * lambda * b.penalty();
  CHECK((sys * f.coefficients() - y).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("fit minimizes the penalized objective", "[spline][property]") {
  const auto knots = chebyshev_second(14);
  const Matrix y = random_matrix(14, 1, 11);
  const double lambda = 1e-3;
  const auto f = fit(knots, y, lambda);
  const double best = spline_objective(f, knots, y, lambda);
  const auto basis = std::make_shared<const NaturalSplineBasis>(build_basis(knots));
  std::mt19937 gen(4);
  std::normal_distribution<double> nd(0.0, 1e-3);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix c = f.coefficients();
    for (Eigen::Index i = 0; i < c.rows(); ++i) c(i, 0) += nd(gen);
    const SplineFit other(basis, c, lambda);
    CHECK(spline_objective(other, knots, y, lambda) >= best);
  }
}

TEST_CASE("basis fit agrees with the kernel oracle", "[spline]") {
  const auto q = grid(-1.0, 1.0, 1001);
  for (std::size_t n : {3u, 5u, 8u, 16u, 32u}) {
    for (double lambda : {0.0, 1e-6, 1e-3, 1.0}) {
      const auto knots = chebyshev_second(n);
      const Matrix y = random_matrix(n, 2, static_cast<unsigned>(n * 7));
      const Matrix a = fit(knots, y, lambda).evaluate(q);
      const Matrix b = kernel_oracle_fit(knots, y, lambda).evaluate(q);
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }
}

TEST_CASE("kernel R0 identities", "[spline]") {
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double t = u(gen), s = u(gen);
    CHECK(sobolev_kernel_r0(-1.0, s) == 0.0);
    CHECK(sobolev_kernel_r0(t, s) == sobolev_kernel_r0(s, t));
    const double q = oracle::integrate([&](double x) { return (t - x) * (s - x); }, -1.0,
                                       std::min(t, s));
    CHECK_THAT(sobolev_kernel_r0(t, s), WithinAbs(q, 1e-12));
  }
}

TEST_CASE("evaluation at knots and beyond the boundary", "[spline]") {
  const auto knots = chebyshev_second(8);
  const auto f = fit(knots, column(knots), 0.0);
  const std::vector<double> q{2.0, -3.0};
  const Matrix got = f.evaluate(q);
  CHECK_THAT(got(0, 0), WithinAbs(2.0, 1e-12));
  CHECK_THAT(got(1, 0), WithinAbs(-3.0, 1e-12));

  const Matrix y = random_matrix(8, 1, 8);
  const auto g = fit(knots, y, 0.1);
  const std::vector<double> out{1.5, 2.5, 3.5};
  const Matrix v = g.evaluate(out);
  CHECK_THAT(v(2, 0) - v(1, 0), WithinAbs(v(1, 0) - v(0, 0), 1e-12));
  const Matrix d2 = g.derivative(out, 2);
  CHECK(d2.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("regularization path is monotone", "[spline][property]") {
  const auto knots = chebyshev_second(30);
  const Matrix y = random_matrix(30, 1, 21);
  double prev_rough = INFINITY, prev_mse = -1.0;
  for (int e = -10; e <= 2; ++e) {
    const double lambda = std::pow(10.0, e);
    const auto f = fit(knots, y, lambda);
    const double r = roughness(f);
    const double mse = (f.evaluate(knots) - y).squaredNorm() / 30.0;
    CHECK(r <= prev_rough * (1.0 + 1e-9));
    CHECK(mse >= prev_mse * (1.0 - 1e-9));
    prev_rough = r;
    prev_mse = mse;
  }
}

TEST_CASE("degenerate point counts", "[spline]") {
  const std::vector<double> two{-0.5, 0.5};
  const auto f2 = fit_or_degrade(two, column({1.0, 3.0}), 1e-2);
  CHECK(f2.is_degenerate());
  const std::vector<double> q{0.0, 1.5};
  const Matrix v2 = f2.evaluate(q);
  CHECK_THAT(v2(0, 0), WithinAbs(2.0, 1e-15));
  CHECK_THAT(v2(1, 0), WithinAbs(5.0, 1e-14));

  const std::vector<double> one{0.3};
  const auto f1 = fit_or_degrade(one, column({4.0}), 0.0);
  CHECK((f1.evaluate(q).array() == 4.0).all());
  CHECK(roughness(f1) == 0.0);

  const std::vector<double> none;
  REQUIRE_THROWS_AS(fit_or_degrade(none, Matrix(0, 1), 0.0), InvalidArgument);
  REQUIRE_THROWS_AS(fit(two, column({1.0, 3.0}), 0.0), DegenerateBasis);
}

TEST_CASE("fit rejects bad input", "[spline]") {
  const std::vector<double> t{-1.0, 0.0, 1.0};
  REQUIRE_THROWS_AS(fit(t, column({1.0, NAN, 0.0}), 0.0), InvalidArgument);
  REQUIRE_THROWS_AS(fit(t, column({1.0, 0.0, 0.0}), -1.0), InvalidArgument);
  REQUIRE_THROWS_AS(fit(t, column({1.0, 0.0}), 0.0), InvalidArgument);
}
