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

#ifndef TSFUSE_KERNEL_HPP
#define TSFUSE_KERNEL_HPP

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tsfuse {

/// Stationary covariance functions on scalar time inputs. The kernel
/// variance is identically 1: data dispersion is absorbed by the
/// coregionalization weights, never by the kernel.
enum class KernelKind { Matern32, SquaredExponential };

inline std::string to_string(KernelKind kind) {
  return kind == KernelKind::Matern32 ? "matern32" : "squared_exponential";
}

inline KernelKind kernel_kind_from_string(const std::string &name) {
  if (name == "matern32") return KernelKind::Matern32;
  if (name == "squared_exponential" || name == "se")
    return KernelKind::SquaredExponential;
  throw std::invalid_argument("unknown kernel kind '" + name + "'");
}

struct KernelParams {
  KernelKind kind = KernelKind::Matern32;
  double lengthscale = 1.0; // days
};

inline void validate(const KernelParams &params) {
  if (!(params.lengthscale > 0.0) || !std::isfinite(params.lengthscale)) {
    throw std::invalid_argument("kernel lengthscale must be positive and finite");
  }
}

/// k(t1, t2) in (0, 1], with k(t, t) = 1 exactly.
///
///   Matern 3/2:           k(r) = (1 + sqrt(3) r / l) exp(-sqrt(3) r / l)
///   Squared exponential:  k(r) = exp(-r^2 / (2 l^2))
///
/// where r = |t1 - t2|.
inline double kernel_eval(const KernelParams &params, double t1, double t2) {
  const double r = std::abs(t1 - t2);
  if (r == 0.0) return 1.0;
  if (params.kind == KernelKind::Matern32) {
    const double s = std::numbers::sqrt3 * r / params.lengthscale;
    return (1.0 + s) * std::exp(-s);
  }
  const double u = r / params.lengthscale;
  return std::exp(-0.5 * u * u);
}

/// dk/dl at separation r = |t1 - t2|:
///
///   Matern 3/2:           3 r^2 / l^3 * exp(-sqrt(3) r / l)
///   Squared exponential:  r^2 / l^3 * exp(-r^2 / (2 l^2))
///
/// Zero at r = 0 for both (the unit diagonal does not depend on l).
inline double kernel_grad_lengthscale_eval(const KernelParams &params, double t1,
                                           double t2) {
  const double r = std::abs(t1 - t2);
  if (r == 0.0) return 0.0;
  const double l = params.lengthscale;
  if (params.kind == KernelKind::Matern32) {
    const double s = std::numbers::sqrt3 * r / l;
    return s * s * std::exp(-s) / l;
  }
  const double u = r / l;
  return u * u / l * std::exp(-0.5 * u * u);
}

namespace detail {

template <typename Scalarwise>
Eigen::MatrixXd pairwise(const KernelParams &params, const Eigen::VectorXd &rows,
                         const Eigen::VectorXd &cols, Scalarwise &&eval) {
  validate(params);
  if (rows.size() == 0 || cols.size() == 0) {
    throw std::invalid_argument("kernel matrix requires nonempty time vectors");
  }
  Eigen::MatrixXd result(rows.size(), cols.size());
  for (Eigen::Index j = 0; j < cols.size(); ++j) {
    for (Eigen::Index i = 0; i < rows.size(); ++i) {
      result(i, j) = eval(params, rows[i], cols[j]);
    }
  }
  return result;
}

} // namespace detail

/// Pairwise kernel matrix; element (i, j) = k(rows[i], cols[j]).
inline Eigen::MatrixXd kernel_matrix(const KernelParams &params,
                                     const Eigen::VectorXd &rows,
                                     const Eigen::VectorXd &cols) {
  return detail::pairwise(params, rows, cols, kernel_eval);
}

/// Element-wise dk/dl over the same pairing as kernel_matrix.
inline Eigen::MatrixXd kernel_grad_lengthscale(const KernelParams &params,
                                               const Eigen::VectorXd &rows,
                                               const Eigen::VectorXd &cols) {
  return detail::pairwise(params, rows, cols, kernel_grad_lengthscale_eval);
}

} // namespace tsfuse

#endif // TSFUSE_KERNEL_HPP
