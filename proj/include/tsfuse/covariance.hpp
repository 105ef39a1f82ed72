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

#ifndef TSFUSE_COVARIANCE_HPP
#define TSFUSE_COVARIANCE_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <array>
#include <cmath>
#include <stdexcept>

#include "tsfuse/errors.hpp"
#include "tsfuse/kernel.hpp"

namespace tsfuse {

/// Weights of one latent GP in the two outputs. The rank-1
/// coregionalization matrix is the outer product a a^T, so a and -a are
/// indistinguishable; the canonical representative has its first nonzero
/// component >= 0.
struct CoregVector {
  Eigen::Vector2d a = Eigen::Vector2d::Zero();

  CoregVector canonical() const {
    CoregVector out = *this;
    const double lead = a[0] != 0.0 ? a[0] : a[1];
    if (lead < 0.0) out.a = -a;
    return out;
  }
};

inline Eigen::Matrix2d coreg_matrix(const CoregVector &v) {
  return v.a * v.a.transpose();
}

/// Training inputs of the two outputs. The outputs are heterotopic: each
/// has its own time vector and the sample counts are typically unequal.
/// Output 0 is the sparse series being gap filled (optical-like), output 1
/// the dense companion (radar-like).
struct MultiInput {
  std::array<Eigen::VectorXd, 2> times;

  Eigen::Index count(int output) const { return times[static_cast<std::size_t>(output)].size(); }
  Eigen::Index total() const { return times[0].size() + times[1].size(); }
  Eigen::Index offset(int output) const { return output == 0 ? 0 : times[0].size(); }
};

inline void validate(const MultiInput &inputs) {
  if (inputs.total() == 0) {
    throw std::invalid_argument("multi-output input has no samples in either output");
  }
  for (int d = 0; d < 2; ++d) {
    const auto &t = inputs.times[static_cast<std::size_t>(d)];
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      if (!std::isfinite(t[i])) {
        throw std::invalid_argument("non-finite time in output " + std::to_string(d + 1));
      }
      if (i > 0 && !(t[i] > t[i - 1])) {
        throw std::invalid_argument("times of output " + std::to_string(d + 1) +
                                    " must be strictly ascending with no duplicates");
      }
    }
  }
}

/// Per-output observation noise variances, in normalized units.
struct NoiseVariances {
  Eigen::Vector2d sigma2 = Eigen::Vector2d::Zero();
};

inline void validate(const NoiseVariances &noise) {
  for (int d = 0; d < 2; ++d) {
    if (!(noise.sigma2[d] >= 0.0) || !std::isfinite(noise.sigma2[d])) {
      throw std::invalid_argument("noise variance of output " + std::to_string(d + 1) +
                                  " must be nonnegative and finite");
    }
  }
}

/// Full covariance over the stacked samples [output 1; output 2]:
/// block (d, d') = sum_q B_q[d, d'] K_q(T_d, T_d'), plus sigma2[d] I on the
/// diagonal blocks. This is the general block form of the sum-of-Kronecker
/// construction; it reduces to sum_q B_q (x) K_q + Sigma (x) I when both
/// outputs share one time grid.
inline Eigen::MatrixXd
assemble_full_covariance(const std::array<KernelParams, 2> &kernels,
                         const std::array<CoregVector, 2> &coregs,
                         const MultiInput &inputs, const NoiseVariances &noise) {
  validate(inputs);
  validate(noise);
  const Eigen::Index n = inputs.total();
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < 2; ++q) {
    validate(kernels[q]);
    const Eigen::Matrix2d b = coreg_matrix(coregs[q]);
    if (b.isZero(0.0)) continue;
    for (int d = 0; d < 2; ++d) {
      for (int e = 0; e < 2; ++e) {
        if (inputs.count(d) == 0 || inputs.count(e) == 0 || b(d, e) == 0.0) continue;
        full.block(inputs.offset(d), inputs.offset(e), inputs.count(d), inputs.count(e)) +=
            b(d, e) * kernel_matrix(kernels[q], inputs.times[static_cast<std::size_t>(d)],
                                    inputs.times[static_cast<std::size_t>(e)]);
      }
    }
  }
  for (int d = 0; d < 2; ++d) {
    if (inputs.count(d) == 0) continue;
    full.diagonal().segment(inputs.offset(d), inputs.count(d)).array() += noise.sigma2[d];
  }
  return full;
}

/// Cross covariance between the two outputs at a new time t_star and all
/// training samples: row d, block d' = sum_q B_q[d, d'] K_q(t_star, T_d').
inline Eigen::MatrixXd
assemble_cross_covariance(const std::array<KernelParams, 2> &kernels,
                          const std::array<CoregVector, 2> &coregs,
                          const MultiInput &inputs, double t_star) {
  validate(inputs);
  if (!std::isfinite(t_star)) {
    throw std::invalid_argument("query time must be finite");
  }
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(2, inputs.total());
  for (std::size_t q = 0; q < 2; ++q) {
    validate(kernels[q]);
    const Eigen::Matrix2d b = coreg_matrix(coregs[q]);
    for (int e = 0; e < 2; ++e) {
      const auto &t = inputs.times[static_cast<std::size_t>(e)];
      for (Eigen::Index j = 0; j < t.size(); ++j) {
        const double k = kernel_eval(kernels[q], t_star, t[j]);
        cross(0, inputs.offset(e) + j) += b(0, e) * k;
        cross(1, inputs.offset(e) + j) += b(1, e) * k;
      }
    }
  }
  return cross;
}

/// Cholesky factorization with an escalating diagonal jitter ladder.
/// Immutable once built; safe to share across threads for repeated solves.
class CholeskyFactor {
public:
  Eigen::VectorXd solve(const Eigen::VectorXd &rhs) const { return llt_.solve(rhs); }
  Eigen::MatrixXd solve(const Eigen::MatrixXd &rhs) const { return llt_.solve(rhs); }

  Eigen::MatrixXd inverse() const {
    return llt_.solve(Eigen::MatrixXd::Identity(dimension(), dimension()));
  }

  /// log det of the (jittered) matrix.
  double log_det() const {
    return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
  }

  /// Lower-triangular factor L with A = L L^T; used for sampling.
  Eigen::MatrixXd matrix_l() const { return llt_.matrixL(); }

  /// Absolute value added to every diagonal entry (0 when the plain
  /// factorization succeeded).
  double jitter() const { return jitter_; }

  /// Ladder level relative to the mean diagonal: one of 0, 1e-8, 1e-6, 1e-4.
  double jitter_level() const { return level_; }

  Eigen::Index dimension() const { return llt_.matrixLLT().rows(); }

private:
  friend CholeskyFactor stable_factorize(const Eigen::MatrixXd &);
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_ = 0.0;
  double level_ = 0.0;
};

/// Factorize a symmetric matrix, retrying with additive diagonal jitter
/// 1e-8 -> 1e-6 -> 1e-4 (relative to the mean diagonal) when the plain
/// Cholesky fails. Throws NotPositiveDefiniteError once the ladder is
/// exhausted.
inline CholeskyFactor stable_factorize(const Eigen::MatrixXd &matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw std::invalid_argument("factorization requires a nonempty square matrix");
  }
  const double scale = matrix.diagonal().cwiseAbs().mean();
  const double unit = scale > 0.0 ? scale : 1.0;
  constexpr double levels[] = {0.0, 1e-8, 1e-6, 1e-4};
  for (double level : levels) {
    Eigen::MatrixXd attempt = matrix;
    attempt.diagonal().array() += level * unit;
    Eigen::LLT<Eigen::MatrixXd> llt(attempt);
    if (llt.info() == Eigen::Success && llt.matrixLLT().allFinite() &&
        (llt.matrixLLT().diagonal().array() > 0.0).all()) {
      CholeskyFactor factor;
      factor.llt_ = std::move(llt);
      factor.jitter_ = level * unit;
      factor.level_ = level;
      return factor;
    }
  }
  throw NotPositiveDefiniteError(
      "matrix is not positive definite even with maximum jitter; "
      "hyperparameters are likely degenerate");
}

} // namespace tsfuse

#endif // TSFUSE_COVARIANCE_HPP
