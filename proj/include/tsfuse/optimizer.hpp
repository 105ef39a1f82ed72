/*
 * Copyright 2026 The tsfuse authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TSFUSE_OPTIMIZER_HPP
#define TSFUSE_OPTIMIZER_HPP

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "tsfuse/errors.hpp"

namespace tsfuse {

struct OptimizeControl {
  int max_iterations = 500;
  double gradient_tolerance = 1e-4; // infinity norm
};

struct OptimizeResult {
  Eigen::VectorXd x;
  double value = -std::numeric_limits<double>::infinity();
  double gradient_norm = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

/// Quasi-Newton (BFGS) ascent with Armijo backtracking. The objective is
/// called as f(x, grad) -> double and fills the gradient of the value being
/// maximized; it may return NaN/-inf (or throw) for infeasible points, which
/// the line search treats as rejection. Returns nullopt when even the
/// starting point is infeasible.
template <typename Objective>
std::optional<OptimizeResult> maximize_bfgs(Objective &&objective,
                                            Eigen::VectorXd x0,
                                            const OptimizeControl &control = {}) {
  const Eigen::Index dim = x0.size();
  constexpr double armijo_c1 = 1e-4;
  constexpr int max_backtracks = 60;

  auto eval = [&](const Eigen::VectorXd &x, Eigen::VectorXd &grad) -> double {
    try {
      const double value = objective(x, grad);
      if (!std::isfinite(value) || !grad.allFinite()) {
        return -std::numeric_limits<double>::infinity();
      }
      return value;
    } catch (const Error &) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd grad(dim);
  double value = eval(x, grad);
  if (!std::isfinite(value)) return std::nullopt;

  OptimizeResult best;
  best.x = x;
  best.value = value;
  best.gradient_norm = grad.lpNorm<Eigen::Infinity>();

  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(dim, dim);
  int iter = 0;
  for (; iter < control.max_iterations; ++iter) {
    const double gnorm = grad.lpNorm<Eigen::Infinity>();
    if (gnorm < control.gradient_tolerance) {
      best.converged = true;
      break;
    }

    Eigen::VectorXd direction = h_inv * grad; // ascent direction
    double slope = grad.dot(direction);
    if (!(slope > 0.0) || !direction.allFinite()) {
      h_inv.setIdentity();
      direction = grad;
      slope = grad.squaredNorm();
    }

    double step = 1.0;
    Eigen::VectorXd x_new(dim), grad_new(dim);
    double value_new = -std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int k = 0; k < max_backtracks; ++k) {
      x_new = x + step * direction;
      value_new = eval(x_new, grad_new);
      if (value_new >= value + armijo_c1 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break; // no ascent possible along this direction

    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = grad_new - grad; // gradient change of the ascent
    const double sy = s.dot(-y);               // curvature in minimization form
    if (sy > 1e-12 * s.norm() * y.norm()) {
      // Standard BFGS inverse update on the negated problem.
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd outer = s * (-y).transpose() * rho;
      h_inv = (Eigen::MatrixXd::Identity(dim, dim) - outer) * h_inv *
                  (Eigen::MatrixXd::Identity(dim, dim) - outer.transpose()) +
              rho * s * s.transpose();
    }

    x = std::move(x_new);
    grad = std::move(grad_new);
    value = value_new;
    if (value > best.value) {
      best.x = x;
      best.value = value;
    }
  }

  best.gradient_norm = grad.lpNorm<Eigen::Infinity>();
  best.iterations = iter;
  if (value >= best.value) {
    best.x = x;
    best.value = value;
  }
  return best;
}

} // namespace tsfuse

#endif // TSFUSE_OPTIMIZER_HPP
