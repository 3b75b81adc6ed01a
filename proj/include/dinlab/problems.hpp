// Copyright 2026 The dinlab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Benchmark objectives with analytic derivatives and known Lojasiewicz data.

#ifndef DINLAB_PROBLEMS_HPP
#define DINLAB_PROBLEMS_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dinlab/common.hpp"

namespace dinlab {

/// Lojasiewicz data: |f(x) - f_star| <= (1/(2 mu)) |grad f(x)|^q near the
/// critical set. `global` is true when the inequality holds on all of R^d.
struct LojasiewiczData {
  double mu = 1.0;
  double q = 2.0;
  bool global = true;
};

/// An evaluatable smooth objective.
///
/// `hvp` may be left empty; hessian_vector() then falls back to a central
/// difference of the gradient. `drive` is an optional fused evaluation of
/// grad(x) + beta * H(x) v, which is the only derivative the damped systems
/// need; problems that can evaluate it in one pass (quadratics) provide it.
struct Objective {
  using ScalarFn = std::function<double(const Vector&)>;
  using VectorFn = std::function<Vector(const Vector&)>;
  using HvpFn = std::function<Vector(const Vector&, const Vector&)>;
  using DriveFn = std::function<Vector(const Vector&, const Vector&, double)>;

  std::string name;
  int dim = 0;
  ScalarFn f;
  VectorFn grad;
  HvpFn hvp;
  DriveFn drive;
  LojasiewiczData loj;
  double f_star = 0.0;
  double smoothness = 0.0;  // largest curvature, metadata only (0 = unknown)
  std::vector<Vector> minimizers;
  std::vector<Vector> strict_saddles;

  double gap(const Vector& x) const { return f(x) - f_star; }

  Vector hessian_vector(const Vector& x, const Vector& v) const {
    if (hvp) return hvp(x, v);
    return fd_hessian_vector(x, v);
  }

  // Central difference of the gradient along v, step scaled to |x| and |v|.
  Vector fd_hessian_vector(const Vector& x, const Vector& v) const {
    const double vn = std::max(v.norm(), 1e-30);
    const double h = std::sqrt(std::numeric_limits<double>::epsilon()) *
                     (1.0 + x.norm()) / vn;
    return (grad(x + h * v) - grad(x - h * v)) / (2.0 * h);
  }

  Vector damped_drive(const Vector& x, const Vector& v, double beta) const {
    if (drive) return drive(x, v, beta);
    if (beta == 0.0) return grad(x);
    return grad(x) + beta * hessian_vector(x, v);
  }
};

/// Parameters of the random PSD quadratic benchmark.
struct QuadraticSpec {
  int dim = 400;
  double mu = 0.2;
  double L = 20.0;
  int kernel_dim = 40;
  std::uint64_t seed = 42;

  void validate() const {
    require(dim > 0, "quadratic: dim must be positive");
    require(mu > 0.0, "quadratic: mu must be positive");
    require(L >= mu, "quadratic: L must be >= mu");
    require(kernel_dim >= 0 && kernel_dim < dim,
            "quadratic: kernel_dim must lie in [0, dim)");
    require(dim - kernel_dim >= 2 || L == mu,
            "quadratic: a single positive eigenvalue requires L == mu");
  }
};

/// f(x) = 1/2 <A x, x> with A = Q diag(lambda) Q^T, stored through the
/// factor B = diag(sqrt(lambda_+)) Q_+^T so that f = 1/2 |B x|^2 and
/// grad = B^T B x share one rounding path.
class Quadratic {
 public:
  explicit Quadratic(const QuadraticSpec& spec) : spec_(spec) {
    spec.validate();
    const int d = spec.dim;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(d, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) g(i, j) = normal(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    basis_ = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j)
      if (r(j, j) < 0.0) basis_.col(j) *= -1.0;

    eigenvalues_ = Vector::Zero(d);
    int k = spec.kernel_dim;
    eigenvalues_(k++) = spec.mu;
    if (k < d) eigenvalues_(k++) = spec.L;
    std::uniform_real_distribution<double> uni(spec.mu, spec.L);
    for (; k < d; ++k) eigenvalues_(k) = uni(rng);

    const int rank = d - spec.kernel_dim;
    range_ = basis_.rightCols(rank);
    factor_ = eigenvalues_.tail(rank).cwiseSqrt().asDiagonal() *
              range_.transpose();
    matrix_ = basis_ * eigenvalues_.asDiagonal() * basis_.transpose();
    matrix_ = 0.5 * (matrix_ + matrix_.transpose()).eval();
  }

  const QuadraticSpec& spec() const { return spec_; }
  const Vector& eigenvalues() const { return eigenvalues_; }
  /// Orthonormal eigenbasis; column j pairs with eigenvalues()(j).
  const Matrix& basis() const { return basis_; }
  const Matrix& matrix() const { return matrix_; }

  double value(const Vector& x) const { return 0.5 * (factor_ * x).squaredNorm(); }
  Vector gradient(const Vector& x) const {
    return factor_.transpose() * (factor_ * x);
  }

  /// Unit eigenvector of the smallest positive eigenvalue mu.
  Vector slow_direction() const { return basis_.col(spec_.kernel_dim); }

  /// Orthogonal projection onto range(A).
  Vector project_range(const Vector& x) const {
    return range_ * (range_.transpose() * x);
  }

  Objective objective() const {
    auto self = std::make_shared<const Quadratic>(*this);
    Objective obj;
    obj.name = "quadratic";
    obj.dim = spec_.dim;
    obj.f = [self](const Vector& x) { return self->value(x); };
    obj.grad = [self](const Vector& x) { return self->gradient(x); };
    obj.hvp = [self](const Vector&, const Vector& v) { return self->gradient(v); };
    obj.drive = [self](const Vector& x, const Vector& v, double beta) {
      return self->gradient(x + beta * v);
    };
    obj.loj = {spec_.mu, 2.0, true};
    obj.f_star = 0.0;
    obj.smoothness = spec_.L;
    obj.minimizers.push_back(Vector::Zero(spec_.dim));
    return obj;
  }

 private:
  QuadraticSpec spec_;
  Vector eigenvalues_;
  Matrix basis_;
  Matrix range_;
  Matrix factor_;
  Matrix matrix_;
};

inline Objective make_quadratic(const QuadraticSpec& spec) {
  return Quadratic(spec).objective();
}

/// Rosenbrock's function (1-x)^2 + 100 (y-x^2)^2. The Lojasiewicz constant
/// mu = 0.4 and curvature L = 501 are the usual local estimates at (1,1).
inline Objective make_rosenbrock() {
  Objective obj;
  obj.name = "rosenbrock";
  obj.dim = 2;
  obj.f = [](const Vector& p) {
    const double a = 1.0 - p(0);
    const double b = p(1) - p(0) * p(0);
    return a * a + 100.0 * b * b;
  };
  obj.grad = [](const Vector& p) {
    const double b = p(1) - p(0) * p(0);
    Vector g(2);
    g << -2.0 * (1.0 - p(0)) - 400.0 * p(0) * b, 200.0 * b;
    return g;
  };
  obj.hvp = [](const Vector& p, const Vector& v) {
    const double hxx = 2.0 + 1200.0 * p(0) * p(0) - 400.0 * p(1);
    const double hxy = -400.0 * p(0);
    Vector r(2);
    r << hxx * v(0) + hxy * v(1), hxy * v(0) + 200.0 * v(1);
    return r;
  };
  obj.loj = {0.4, 2.0, false};
  obj.f_star = 0.0;
  obj.smoothness = 501.0;
  obj.minimizers.push_back(Vector::Ones(2));
  return obj;
}

/// 1/4 (x^2 - 1)^2 + 1/2 y^2: minima at (+-1, 0), strict saddle at the origin.
inline Objective make_double_well_saddle() {
  Objective obj;
  obj.name = "double_well";
  obj.dim = 2;
  obj.f = [](const Vector& p) {
    const double w = p(0) * p(0) - 1.0;
    return 0.25 * w * w + 0.5 * p(1) * p(1);
  };
  obj.grad = [](const Vector& p) {
    Vector g(2);
    g << p(0) * (p(0) * p(0) - 1.0), p(1);
    return g;
  };
  obj.hvp = [](const Vector& p, const Vector& v) {
    Vector r(2);
    r << (3.0 * p(0) * p(0) - 1.0) * v(0), v(1);
    return r;
  };
  // Hessian at the minima is diag(2, 1).
  obj.loj = {1.0, 2.0, false};
  obj.f_star = 0.0;
  obj.smoothness = 2.0;
  obj.minimizers.push_back(Vector::Unit(2, 0));
  obj.minimizers.push_back(-Vector::Unit(2, 0));
  obj.strict_saddles.push_back(Vector::Zero(2));
  return obj;
}

/// f(x) = x^4 on R. Satisfies the Lojasiewicz inequality with q = 4/3 and
/// mu = 4^{4/3}/2, with equality everywhere.
inline Objective make_quartic_1d() {
  Objective obj;
  obj.name = "quartic";
  obj.dim = 1;
  obj.f = [](const Vector& p) {
    const double s = p(0) * p(0);
    return s * s;
  };
  obj.grad = [](const Vector& p) {
    Vector g(1);
    g << 4.0 * p(0) * p(0) * p(0);
    return g;
  };
  obj.hvp = [](const Vector& p, const Vector& v) {
    Vector r(1);
    r << 12.0 * p(0) * p(0) * v(0);
    return r;
  };
  obj.loj = {0.5 * std::pow(4.0, 4.0 / 3.0), 4.0 / 3.0, true};
  obj.f_star = 0.0;
  obj.minimizers.push_back(Vector::Zero(1));
  return obj;
}

}  // namespace dinlab

#endif  // DINLAB_PROBLEMS_HPP
