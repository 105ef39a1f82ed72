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

#ifndef TSFUSE_TRAINING_HPP
#define TSFUSE_TRAINING_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <limits>

#include "tsfuse/errors.hpp"
#include "tsfuse/kernel.hpp"

namespace tsfuse {

struct TrainConfig {
  KernelKind kernel = KernelKind::Matern32;
  int restarts = 5;
  std::uint64_t seed = 0;
  int max_iterations = 500;
  double gradient_tolerance = 1e-4;
  /// Lower bound on the optimized noise variance (normalized units).
  double noise_floor = 1e-6;
  /// Nearest-time pairing window used to estimate the cross-correlation
  /// sign when initializing the coregionalization vectors.
  double pairing_tolerance_days = 1.5;
};

/// z-score constants of one output's training values.
struct Normalization {
  double mean = 0.0;
  double std = 1.0;
};

/// Population mean/std of `values`. Throws ConstantSeriesError when the
/// dispersion is (numerically) zero. `output_index` is 1-based and only
/// used for the error message.
inline Normalization fit_normalization(const Eigen::VectorXd &values,
                                       int output_index = 0) {
  Normalization norm;
  norm.mean = values.mean();
  norm.std = std::sqrt((values.array() - norm.mean).square().mean());
  if (!(norm.std > 1e-12 * (1.0 + std::abs(norm.mean)))) {
    throw ConstantSeriesError(output_index);
  }
  return norm;
}

inline Eigen::VectorXd normalize(const Eigen::VectorXd &values,
                                 const Normalization &norm) {
  return (values.array() - norm.mean) / norm.std;
}

/// Noise variance from its log-parameterization, honoring the floor. The
/// derivative d(sigma_n^2)/d(log sigma_n^2) is zero once the floor binds.
inline double noise_from_log(double log_sigma2, double floor,
                             double *derivative = nullptr) {
  const double raw = std::exp(log_sigma2);
  if (raw >= floor) {
    if (derivative) *derivative = raw;
    return raw;
  }
  if (derivative) *derivative = 0.0;
  return floor;
}

/// Optimizer metadata retained with a trained model.
struct FitInfo {
  int iterations = 0;
  int restart_index = 0;
  double log_likelihood = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  /// Absolute diagonal jitter the final factorization needed (0 normally).
  double jitter = 0.0;
};

/// Per-output predictive mean and standard deviation, in original units.
/// The standard deviation is at observation level (it includes the fitted
/// noise), matching the +-2 sigma band convention.
struct PredictionBand {
  Eigen::VectorXd times;
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;
};

} // namespace tsfuse

#endif // TSFUSE_TRAINING_HPP
