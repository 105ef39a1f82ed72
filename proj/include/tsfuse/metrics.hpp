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

#ifndef TSFUSE_METRICS_HPP
#define TSFUSE_METRICS_HPP

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

#include "tsfuse/errors.hpp"

namespace tsfuse {

/// Plain Pearson correlation of two equal-length vectors. Throws
/// ConstantSeriesError when either has zero variance.
inline double pearson_correlation(const Eigen::VectorXd &a,
                                  const Eigen::VectorXd &b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("pearson correlation needs >= 2 paired samples");
  }
  const Eigen::ArrayXd da = a.array() - a.mean();
  const Eigen::ArrayXd db = b.array() - b.mean();
  const double ssa = (da * da).sum();
  const double ssb = (db * db).sum();
  if (!(ssa > 0.0)) throw ConstantSeriesError(1);
  if (!(ssb > 0.0)) throw ConstantSeriesError(2);
  return (da * db).sum() / std::sqrt(ssa * ssb);
}

/// R^2 as the squared Pearson correlation between predictions and the
/// reference (the remote-sensing convention used alongside RMSE).
inline double metric_r2(const Eigen::VectorXd &pred, const Eigen::VectorXd &ref) {
  if (pred.size() != ref.size() || pred.size() < 2) {
    throw std::invalid_argument("metric_r2 needs >= 2 aligned samples");
  }
  const Eigen::ArrayXd dr = ref.array() - ref.mean();
  if (!((dr * dr).sum() > 0.0)) {
    throw ConstantReferenceError("metric_r2: reference values are constant");
  }
  const double rho = pearson_correlation(pred, ref);
  return rho * rho;
}

/// Coefficient of determination, 1 - SS_res / SS_tot. Unlike the squared
/// Pearson form this is not invariant under affine maps of the predictions
/// and may be negative.
inline double metric_r2_cod(const Eigen::VectorXd &pred,
                            const Eigen::VectorXd &ref) {
  if (pred.size() != ref.size() || pred.size() < 2) {
    throw std::invalid_argument("metric_r2_cod needs >= 2 aligned samples");
  }
  const Eigen::ArrayXd dr = ref.array() - ref.mean();
  const double ss_tot = (dr * dr).sum();
  if (!(ss_tot > 0.0)) {
    throw ConstantReferenceError("metric_r2_cod: reference values are constant");
  }
  const double ss_res = (pred - ref).squaredNorm();
  return 1.0 - ss_res / ss_tot;
}

inline double metric_rmse(const Eigen::VectorXd &pred, const Eigen::VectorXd &ref) {
  if (pred.size() != ref.size() || pred.size() == 0) {
    throw std::invalid_argument("metric_rmse needs aligned, nonempty samples");
  }
  return std::sqrt((pred - ref).squaredNorm() / static_cast<double>(pred.size()));
}

} // namespace tsfuse

#endif // TSFUSE_METRICS_HPP
