#include "letcc/functions.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "letcc/errors.hpp"
#include "letcc/rng.hpp"

namespace letcc {
namespace {

constexpr std::size_t kHiddenUnits = 16;
constexpr std::uint64_t kNetworkSeed = 0x6c657463635f6e6eULL;

WorkerFunction elementwise(std::string name, std::size_t d,
                           std::function<double(double)> scalar,
                           std::function<double(double)> lipschitz,
                           std::optional<double> nu,
                           std::optional<std::size_t> degree) {
  WorkerFunction f;
  f.name = std::move(name);
  f.in_dim = d;
  f.out_dim = d;
  f.eval = [scalar = std::move(scalar)](const Vector& x) -> Vector {
    return x.unaryExpr(scalar);
  };
  f.lipschitz = std::move(lipschitz);
  f.second_derivative_bound = nu;
  f.degree = degree;
  return f;
}

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

struct Network {
  Matrix w1, w2;
  Vector b1, b2;
};

WorkerFunction make_mlp(std::size_t d, std::size_t m) {
  if (m < 2) throw InvalidArgument("mlp needs m >= 2 output classes");
  auto net = std::make_shared<Network>();
  Rng rng(derive_seed(kNetworkSeed, d * 1000 + m));
  const auto h = static_cast<Eigen::Index>(kHiddenUnits);
  const auto di = static_cast<Eigen::Index>(d);
  const auto mi = static_cast<Eigen::Index>(m);
  net->w1.resize(h, di);
  net->b1.resize(h);
  net->w2.resize(mi, h);
  net->b2.resize(mi);
  const double s1 = 2.0 / std::sqrt(static_cast<double>(d));
  const double s2 = 2.0 / std::sqrt(static_cast<double>(kHiddenUnits));
  for (Eigen::Index i = 0; i < h; ++i) {
    for (Eigen::Index j = 0; j < di; ++j) net->w1(i, j) = s1 * rng.normal();
    net->b1(i) = 0.5 * rng.normal();
  }
  for (Eigen::Index i = 0; i < mi; ++i) {
    for (Eigen::Index j = 0; j < h; ++j) net->w2(i, j) = s2 * rng.normal();
    net->b2(i) = 0.5 * rng.normal();
  }
  // tanh and softmax are both 1-Lipschitz.
  const double q = Eigen::JacobiSVD<Matrix>(net->w1).singularValues()(0) *
                   Eigen::JacobiSVD<Matrix>(net->w2).singularValues()(0);

  WorkerFunction f;
  f.name = "mlp";
  f.in_dim = d;
  f.out_dim = m;
  f.eval = [net](const Vector& x) -> Vector {
    const Vector hidden = (net->w1 * x + net->b1).array().tanh().matrix();
    Vector logits = net->w2 * hidden + net->b2;
    logits.array() -= logits.maxCoeff();
    Vector p = logits.array().exp().matrix();
    return p / p.sum();
  };
  f.lipschitz = [q](double) { return q; };
  return f;
}

}  // namespace

Matrix WorkerFunction::apply(const Matrix& x) const {
  if (static_cast<std::size_t>(x.cols()) != in_dim) {
    throw InvalidArgument(name + " expects inputs of dimension " + std::to_string(in_dim));
  }
  Matrix out(x.rows(), static_cast<Eigen::Index>(out_dim));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    out.row(r) = eval(x.row(r).transpose()).transpose();
  }
  return out;
}

std::vector<std::string> worker_function_ids() {
  return {"identity", "affine", "constant", "sin_pi", "square",
          "cubic",    "softplus", "mlp"};
}

WorkerFunction make_worker_function(const std::string& id, std::size_t d,
                                    std::size_t m) {
  if (d == 0) throw InvalidArgument("input dimension must be >= 1");
  if (id == "mlp") return make_mlp(d, m == 0 ? 3 : m);
  if (m != 0 && m != d) {
    throw InvalidArgument(id + " is elementwise; output dimension must equal d");
  }
  const auto constant = [](double c) { return [c](double) { return c; }; };
  if (id == "identity") {
    return elementwise(id, d, [](double x) { return x; }, constant(1.0), 0.0, 1);
  }
  if (id == "affine") {
    return elementwise(id, d, [](double x) { return 2.0 * x + 1.0; }, constant(2.0),
                       0.0, 1);
  }
  if (id == "constant") {
    return elementwise(id, d, [](double) { return 0.5; }, constant(0.0), 0.0, 0);
  }
  if (id == "sin_pi") {
    return elementwise(id, d, [](double x) { return std::sin(std::numbers::pi * x); },
                       constant(std::numbers::pi), std::numbers::pi * std::numbers::pi,
                       std::nullopt);
  }
  if (id == "square") {
    return elementwise(id, d, [](double x) { return x * x; },
                       [](double r) { return 2.0 * r; }, 2.0, 2);
  }
  if (id == "cubic") {
    return elementwise(id, d, [](double x) { return x * x * x; },
                       [](double r) { return 3.0 * r * r; }, std::nullopt, 3);
  }
  if (id == "softplus") {
    return elementwise(id, d, softplus, constant(1.0), 0.25, std::nullopt);
  }
  throw InvalidArgument("unknown worker function '" + id + "'");
}

}  // namespace letcc
