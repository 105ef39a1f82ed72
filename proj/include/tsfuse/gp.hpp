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

#ifndef TSFUSE_GP_HPP
#define TSFUSE_GP_HPP

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "tsfuse/covariance.hpp"
#include "tsfuse/errors.hpp"
#include "tsfuse/kernel.hpp"
#include "tsfuse/optimizer.hpp"
#include "tsfuse/time_series.hpp"
#include "tsfuse/training.hpp"

namespace tsfuse {

/// Hyperparameters of a single-output GP with zero mean and unit kernel
/// variance, on z-score normalized values.
struct GpParameters {
  KernelParams kernel;
  double noise_variance = 0.1; // normalized units
};

inline void validate(const GpParameters &params) {
  validate(params.kernel);
  if (!(params.noise_variance >= 0.0) || !std::isfinite(params.noise_variance)) {
    throw std::invalid_argument("noise variance must be nonnegative and finite");
  }
}

namespace detail {

inline constexpr double log_2pi = 1.8378770664093454836;

struct GpEvaluation {
  double value;
  Eigen::Vector2d gradient; // wrt (log lengthscale, log noise variance)
  double jitter;
};

/// Log marginal likelihood and its gradient on normalized values.
/// `noise_chain` is d(sigma_n^2)/d(log sigma_n^2); pass the noise variance
/// itself for the unconstrained parameterization, or 0 when a floor binds.
inline GpEvaluation gp_evaluate(const GpParameters &params,
                                const Eigen::VectorXd &times,
                                const Eigen::VectorXd &y, double noise_chain,
                                bool with_gradient) {
  validate(params);
  if (times.size() == 0 || times.size() != y.size()) {
    throw std::invalid_argument("need at least one training sample and matching lengths");
  }
  const Eigen::Index n = times.size();
  Eigen::MatrixXd a = kernel_matrix(params.kernel, times, times);
  a.diagonal().array() += params.noise_variance;
  const CholeskyFactor factor = stable_factorize(a);
  const Eigen::VectorXd alpha = factor.solve(y);

  GpEvaluation out{};
  out.jitter = factor.jitter();
  out.value = -0.5 * y.dot(alpha) - 0.5 * factor.log_det() -
              0.5 * static_cast<double>(n) * log_2pi;
  if (with_gradient) {
    const Eigen::MatrixXd w = alpha * alpha.transpose() - factor.inverse();
    const Eigen::MatrixXd dk_dl = kernel_grad_lengthscale(params.kernel, times, times);
    out.gradient[0] =
        0.5 * params.kernel.lengthscale * (w.array() * dk_dl.array()).sum();
    out.gradient[1] = 0.5 * noise_chain * w.trace();
  }
  return out;
}

} // namespace detail

/// -1/2 y^T (K + sigma_n^2 I)^-1 y - 1/2 log det(K + sigma_n^2 I) - N/2 log 2pi
/// on normalized values.
inline double gp_log_marginal_likelihood(const GpParameters &params,
                                         const Eigen::VectorXd &times,
                                         const Eigen::VectorXd &y) {
  return detail::gp_evaluate(params, times, y, params.noise_variance, false).value;
}

/// Analytic gradient of the log marginal likelihood with respect to
/// (log lengthscale, log noise variance), via
/// 1/2 tr((alpha alpha^T - A^-1) dA/dtheta).
inline Eigen::Vector2d gp_gradients(const GpParameters &params,
                                    const Eigen::VectorXd &times,
                                    const Eigen::VectorXd &y) {
  return detail::gp_evaluate(params, times, y, params.noise_variance, true).gradient;
}

/// A trained single-output GP. Immutable after construction; the cached
/// factorization is always consistent with the stored hyperparameters, so
/// concurrent prediction is safe.
class GpModel {
public:
  static GpModel from_parameters(const GpParameters &params,
                                 const Normalization &norm, Eigen::VectorXd times,
                                 Eigen::VectorXd values, std::string label = "",
                                 FitInfo fit = {}) {
    validate(params);
    if (!(norm.std > 0.0) || !std::isfinite(norm.std) || !std::isfinite(norm.mean)) {
      throw std::invalid_argument("normalization std must be positive");
    }
    if (times.size() == 0 || times.size() != values.size()) {
      throw std::invalid_argument("model requires matching, nonempty times and values");
    }
    for (Eigen::Index i = 1; i < times.size(); ++i) {
      if (!(times[i] > times[i - 1])) {
        throw std::invalid_argument("training times must be strictly ascending");
      }
    }
    GpModel model;
    model.params_ = params;
    model.norm_ = norm;
    model.times_ = std::move(times);
    model.values_ = std::move(values);
    model.label_ = std::move(label);
    model.y_norm_ = normalize(model.values_, norm);
    Eigen::MatrixXd a = kernel_matrix(params.kernel, model.times_, model.times_);
    a.diagonal().array() += params.noise_variance;
    model.factor_ = stable_factorize(a);
    model.alpha_ = model.factor_.solve(model.y_norm_);
    fit.jitter = model.factor_.jitter();
    model.fit_ = fit;
    return model;
  }

  const GpParameters &parameters() const { return params_; }
  const Normalization &normalization() const { return norm_; }
  const Eigen::VectorXd &train_times() const { return times_; }
  const Eigen::VectorXd &train_values() const { return values_; }
  const Eigen::VectorXd &normalized_values() const { return y_norm_; }
  const std::string &label() const { return label_; }
  const FitInfo &fit_info() const { return fit_; }
  const CholeskyFactor &factor() const { return factor_; }
  const Eigen::VectorXd &alpha() const { return alpha_; }

private:
  GpModel() = default;
  GpParameters params_;
  Normalization norm_;
  Eigen::VectorXd times_, values_, y_norm_, alpha_;
  std::string label_;
  CholeskyFactor factor_;
  FitInfo fit_;
};

/// Fit hyperparameters by maximizing the marginal likelihood over
/// (log lengthscale, log noise variance), keeping the best of
/// `config.restarts` randomized starts.
inline GpModel gp_train(const TimeSeries &series, const TrainConfig &config = {}) {
  validate(series);
  if (series.size() < 2) {
    throw TooFewSamplesError("gp_train requires at least 2 samples, got " +
                             std::to_string(series.size()));
  }
  const Normalization norm = fit_normalization(series.values, 1);
  const Eigen::VectorXd y = normalize(series.values, norm);
  const double range = series.times[series.size() - 1] - series.times[0];

  auto objective = [&](const Eigen::VectorXd &theta, Eigen::VectorXd &grad) {
    GpParameters params;
    params.kernel = {config.kernel, std::exp(theta[0])};
    double chain = 0.0;
    params.noise_variance = noise_from_log(theta[1], config.noise_floor, &chain);
    if (!(params.kernel.lengthscale > 0.0) ||
        !std::isfinite(params.kernel.lengthscale) ||
        !std::isfinite(params.noise_variance)) {
      return -std::numeric_limits<double>::infinity();
    }
    const auto eval = detail::gp_evaluate(params, series.times, y, chain, true);
    grad = eval.gradient;
    return eval.value;
  };

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  const double bases[] = {range / 10.0, range / 3.0, range};
  const OptimizeControl control{config.max_iterations, config.gradient_tolerance};

  std::optional<OptimizeResult> best;
  int best_restart = 0;
  const int restarts = std::max(config.restarts, 1);
  for (int r = 0; r < restarts; ++r) {
    const double l0 = bases[r % 3] * std::exp(0.2 * unit_normal(rng));
    Eigen::VectorXd theta0(2);
    theta0 << std::log(l0), std::log(0.1);
    const auto result = maximize_bfgs(objective, theta0, control);
    if (result && (!best || result->value > best->value)) {
      best = result;
      best_restart = r;
    }
  }
  if (!best) {
    throw OptimizerDivergedError("gp_train: all optimizer restarts failed");
  }

  GpParameters params;
  params.kernel = {config.kernel, std::exp(best->x[0])};
  params.noise_variance = noise_from_log(best->x[1], config.noise_floor);
  FitInfo fit;
  fit.iterations = best->iterations;
  fit.restart_index = best_restart;
  fit.log_likelihood = best->value;
  fit.converged = best->converged;
  return GpModel::from_parameters(params, norm, series.times, series.values,
                                  series.label, fit);
}

/// Posterior mean and observation-level standard deviation at `times`,
/// de-normalized to original units.
inline PredictionBand gp_predict(const GpModel &model, const Eigen::VectorXd &times) {
  PredictionBand band;
  band.times = times;
  band.mean.resize(times.size());
  band.stddev.resize(times.size());
  if (times.size() == 0) return band;

  const auto &params = model.parameters();
  const Eigen::MatrixXd k_star =
      kernel_matrix(params.kernel, model.train_times(), times);
  const Eigen::VectorXd mean_n = k_star.transpose() * model.alpha();
  const Eigen::MatrixXd v = model.factor().solve(k_star);
  const double c_star = 1.0 + params.noise_variance;
  const auto &norm = model.normalization();
  for (Eigen::Index j = 0; j < times.size(); ++j) {
    const double var_n =
        std::max(c_star - k_star.col(j).dot(v.col(j)), 1e-18);
    band.mean[j] = mean_n[j] * norm.std + norm.mean;
    band.stddev[j] = std::sqrt(var_n) * norm.std;
  }
  return band;
}

} // namespace tsfuse

#endif // TSFUSE_GP_HPP
