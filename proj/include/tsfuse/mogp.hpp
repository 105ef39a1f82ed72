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

#ifndef TSFUSE_MOGP_HPP
#define TSFUSE_MOGP_HPP

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "tsfuse/covariance.hpp"
#include "tsfuse/errors.hpp"
#include "tsfuse/gp.hpp"
#include "tsfuse/kernel.hpp"
#include "tsfuse/optimizer.hpp"
#include "tsfuse/synthetic.hpp"
#include "tsfuse/time_series.hpp"
#include "tsfuse/training.hpp"

namespace tsfuse {

/// The 8 free quantities of the two-output, two-latent, rank-1 model:
/// 2 lengthscales, 4 coregionalization weights, 2 noise variances. Kernel
/// variances are fixed to 1; the coregionalization weights carry the data
/// dispersion.
struct SlfmParameters {
  std::array<KernelParams, 2> kernels;
  std::array<CoregVector, 2> coregs;
  NoiseVariances noise;
};

inline void validate(const SlfmParameters &params) {
  validate(params.kernels[0]);
  validate(params.kernels[1]);
  validate(params.noise);
  if (!params.coregs[0].a.allFinite() || !params.coregs[1].a.allFinite()) {
    throw std::invalid_argument("coregionalization weights must be finite");
  }
}

/// Optimizer coordinates:
/// [log l1, log l2, a_{1,1}, a_{2,1}, a_{1,2}, a_{2,2}, log s1^2, log s2^2].
using SlfmTheta = Eigen::Matrix<double, 8, 1>;

inline SlfmTheta pack_slfm(const SlfmParameters &params) {
  SlfmTheta theta;
  theta << std::log(params.kernels[0].lengthscale),
      std::log(params.kernels[1].lengthscale), params.coregs[0].a[0],
      params.coregs[0].a[1], params.coregs[1].a[0], params.coregs[1].a[1],
      std::log(params.noise.sigma2[0]), std::log(params.noise.sigma2[1]);
  return theta;
}

inline SlfmParameters unpack_slfm(const SlfmTheta &theta, KernelKind kind,
                                  double noise_floor = 0.0,
                                  Eigen::Vector2d *noise_chain = nullptr) {
  SlfmParameters params;
  params.kernels[0] = {kind, std::exp(theta[0])};
  params.kernels[1] = {kind, std::exp(theta[1])};
  params.coregs[0].a << theta[2], theta[3];
  params.coregs[1].a << theta[4], theta[5];
  for (int d = 0; d < 2; ++d) {
    double chain = 0.0;
    params.noise.sigma2[d] = noise_from_log(theta[6 + d], noise_floor, &chain);
    if (noise_chain) (*noise_chain)[d] = chain;
  }
  return params;
}

namespace detail {

struct SlfmEvaluation {
  double value;
  SlfmTheta gradient;
  double jitter;
};

/// Log marginal likelihood of the stacked normalized values under the full
/// covariance, with the analytic gradient 1/2 tr((alpha alpha^T - K^-1) dK).
inline SlfmEvaluation slfm_evaluate(const SlfmParameters &params,
                                    const MultiInput &inputs,
                                    const Eigen::VectorXd &y,
                                    const Eigen::Vector2d &noise_chain,
                                    bool with_gradient) {
  validate(params);
  if (inputs.total() != y.size() || inputs.total() < 1) {
    throw std::invalid_argument("stacked values must match the input layout");
  }
  const Eigen::MatrixXd full =
      assemble_full_covariance(params.kernels, params.coregs, inputs, params.noise);
  const CholeskyFactor factor = stable_factorize(full);
  const Eigen::VectorXd alpha = factor.solve(y);

  SlfmEvaluation out{};
  out.jitter = factor.jitter();
  out.value = -0.5 * y.dot(alpha) - 0.5 * factor.log_det() -
              0.5 * static_cast<double>(inputs.total()) * log_2pi;
  if (!with_gradient) return out;

  const Eigen::MatrixXd w = alpha * alpha.transpose() - factor.inverse();
  out.gradient.setZero();
  for (std::size_t q = 0; q < 2; ++q) {
    const Eigen::Matrix2d b = coreg_matrix(params.coregs[q]);
    Eigen::Matrix2d s = Eigen::Matrix2d::Zero();  // <W_de, K_de> per block
    Eigen::Matrix2d sg = Eigen::Matrix2d::Zero(); // <W_de, dK_de/dl> per block
    for (int d = 0; d < 2; ++d) {
      for (int e = 0; e < 2; ++e) {
        if (inputs.count(d) == 0 || inputs.count(e) == 0) continue;
        const auto w_block = w.block(inputs.offset(d), inputs.offset(e),
                                     inputs.count(d), inputs.count(e));
        const auto &td = inputs.times[static_cast<std::size_t>(d)];
        const auto &te = inputs.times[static_cast<std::size_t>(e)];
        s(d, e) = (w_block.array() *
                   kernel_matrix(params.kernels[q], td, te).array())
                      .sum();
        sg(d, e) = (w_block.array() *
                    kernel_grad_lengthscale(params.kernels[q], td, te).array())
                       .sum();
      }
    }
    out.gradient[static_cast<Eigen::Index>(q)] =
        0.5 * params.kernels[q].lengthscale * (b.array() * sg.array()).sum();
    const Eigen::Vector2d ga =
        0.5 * (s + s.transpose()) * params.coregs[q].a; // d/d a_{d,q}
    out.gradient[2 + 2 * static_cast<Eigen::Index>(q)] = ga[0];
    out.gradient[3 + 2 * static_cast<Eigen::Index>(q)] = ga[1];
  }
  for (int d = 0; d < 2; ++d) {
    if (inputs.count(d) == 0) continue;
    const double trace_d =
        w.diagonal().segment(inputs.offset(d), inputs.count(d)).sum();
    out.gradient[6 + d] = 0.5 * noise_chain[d] * trace_d;
  }
  return out;
}

} // namespace detail

/// Exact dense Gaussian log likelihood of the stacked normalized values.
inline double mogp_log_marginal_likelihood(const SlfmParameters &params,
                                           const MultiInput &inputs,
                                           const Eigen::VectorXd &y) {
  if (inputs.total() < 2) {
    throw std::invalid_argument("mogp likelihood needs at least 2 samples in total");
  }
  return detail::slfm_evaluate(params, inputs, y, params.noise.sigma2, false).value;
}

/// Analytic gradient of the log marginal likelihood in the optimizer
/// coordinates (log lengthscales, raw weights, log noise variances).
inline SlfmTheta mogp_gradients(const SlfmParameters &params,
                                const MultiInput &inputs,
                                const Eigen::VectorXd &y) {
  return detail::slfm_evaluate(params, inputs, y, params.noise.sigma2, true).gradient;
}

/// A trained two-output SLFM. Immutable after construction; safe to share
/// across threads for prediction. Independent models (one per pixel or
/// parcel) can train in parallel with no shared state.
class SlfmModel {
public:
  static SlfmModel from_parameters(SlfmParameters params,
                                   std::array<Normalization, 2> norm,
                                   MultiInput inputs,
                                   std::array<Eigen::VectorXd, 2> values,
                                   std::array<std::string, 2> labels = {},
                                   FitInfo fit = {}) {
    validate(params);
    validate(inputs);
    for (int d = 0; d < 2; ++d) {
      const auto sd = static_cast<std::size_t>(d);
      if (values[sd].size() != inputs.count(d)) {
        throw std::invalid_argument("values of output " + std::to_string(d + 1) +
                                    " do not match its time vector");
      }
      if (inputs.count(d) > 0 &&
          (!(norm[sd].std > 0.0) || !std::isfinite(norm[sd].std))) {
        throw std::invalid_argument("normalization std of output " +
                                    std::to_string(d + 1) + " must be positive");
      }
    }
    SlfmModel model;
    params.coregs[0] = params.coregs[0].canonical();
    params.coregs[1] = params.coregs[1].canonical();
    model.params_ = std::move(params);
    model.norm_ = norm;
    model.inputs_ = std::move(inputs);
    model.values_ = std::move(values);
    model.labels_ = std::move(labels);
    model.y_norm_.resize(model.inputs_.total());
    for (int d = 0; d < 2; ++d) {
      const auto sd = static_cast<std::size_t>(d);
      if (model.inputs_.count(d) > 0) {
        model.y_norm_.segment(model.inputs_.offset(d), model.inputs_.count(d)) =
            normalize(model.values_[sd], norm[sd]);
      }
    }
    model.factor_ = stable_factorize(assemble_full_covariance(
        model.params_.kernels, model.params_.coregs, model.inputs_,
        model.params_.noise));
    model.alpha_ = model.factor_.solve(model.y_norm_);
    fit.jitter = model.factor_.jitter();
    model.fit_ = fit;
    return model;
  }

  const SlfmParameters &parameters() const { return params_; }
  const std::array<Normalization, 2> &normalization() const { return norm_; }
  const MultiInput &inputs() const { return inputs_; }
  const std::array<Eigen::VectorXd, 2> &values() const { return values_; }
  const std::array<std::string, 2> &labels() const { return labels_; }
  const Eigen::VectorXd &normalized_values() const { return y_norm_; }
  const FitInfo &fit_info() const { return fit_; }
  const CholeskyFactor &factor() const { return factor_; }
  const Eigen::VectorXd &alpha() const { return alpha_; }

private:
  SlfmModel() = default;
  SlfmParameters params_;
  std::array<Normalization, 2> norm_;
  MultiInput inputs_;
  std::array<Eigen::VectorXd, 2> values_;
  std::array<std::string, 2> labels_;
  Eigen::VectorXd y_norm_, alpha_;
  CholeskyFactor factor_;
  FitInfo fit_;
};

/// Joint training of the 8 free parameters over both (heterotopic) series.
/// Each output is z-scored independently; the best of `config.restarts`
/// optimizer runs is kept and the coregionalization vectors are
/// canonicalized.
///
/// Initialization pre-breaks the low/high-frequency symmetry: the two
/// lengthscales start at range/5 and range/40, the first latent starts
/// shared across outputs with the sign of the empirical cross-correlation,
/// the second starts mostly private to output 1.
inline SlfmModel mogp_train(const TimeSeries &series_1, const TimeSeries &series_2,
                            const TrainConfig &config = {}) {
  validate(series_1);
  validate(series_2);
  const TimeSeries *series[2] = {&series_1, &series_2};
  for (int d = 0; d < 2; ++d) {
    if (series[d]->size() < 2) {
      throw TooFewSamplesError("mogp_train requires >= 2 samples per output; output " +
                               std::to_string(d + 1) + " has " +
                               std::to_string(series[d]->size()));
    }
  }
  std::array<Normalization, 2> norm = {fit_normalization(series_1.values, 1),
                                       fit_normalization(series_2.values, 2)};
  MultiInput inputs{{series_1.times, series_2.times}};
  Eigen::VectorXd y(inputs.total());
  y << normalize(series_1.values, norm[0]), normalize(series_2.values, norm[1]);

  double rho_sign = 1.0;
  try {
    rho_sign =
        pearson_temporal(series_1, series_2, config.pairing_tolerance_days) < 0.0
            ? -1.0
            : 1.0;
  } catch (const Error &) {
    // No usable pairing; keep the positive-correlation default.
  }

  const double t_min = std::min(series_1.times[0], series_2.times[0]);
  const double t_max = std::max(series_1.times[series_1.size() - 1],
                                series_2.times[series_2.size() - 1]);
  const double range = t_max - t_min;

  SlfmParameters base;
  base.kernels[0] = {config.kernel, range / 5.0};
  base.kernels[1] = {config.kernel, range / 40.0};
  base.coregs[0].a << 0.8, 0.8 * rho_sign;
  base.coregs[1].a << 0.3, 0.05;
  base.noise.sigma2 << 0.1, 0.1;

  auto objective = [&](const Eigen::VectorXd &theta, Eigen::VectorXd &grad) {
    Eigen::Vector2d chain;
    const SlfmParameters params =
        unpack_slfm(theta, config.kernel, config.noise_floor, &chain);
    for (std::size_t q = 0; q < 2; ++q) {
      if (!(params.kernels[q].lengthscale > 0.0) ||
          !std::isfinite(params.kernels[q].lengthscale) ||
          !params.coregs[q].a.allFinite()) {
        return -std::numeric_limits<double>::infinity();
      }
    }
    if (!params.noise.sigma2.allFinite()) {
      return -std::numeric_limits<double>::infinity();
    }
    const auto eval = detail::slfm_evaluate(params, inputs, y, chain, true);
    grad = eval.gradient;
    return eval.value;
  };

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  const OptimizeControl control{config.max_iterations, config.gradient_tolerance};

  std::optional<OptimizeResult> best;
  int best_restart = 0;
  const int restarts = std::max(config.restarts, 1);
  for (int r = 0; r < restarts; ++r) {
    SlfmTheta theta0 = pack_slfm(base);
    if (r > 0) {
      theta0[0] += 0.3 * unit_normal(rng);
      theta0[1] += 0.3 * unit_normal(rng);
      for (int i = 2; i < 6; ++i) theta0[i] += 0.15 * unit_normal(rng);
      theta0[6] += 0.3 * unit_normal(rng);
      theta0[7] += 0.3 * unit_normal(rng);
    }
    const auto result = maximize_bfgs(objective, theta0, control);
    if (result && (!best || result->value > best->value)) {
      best = result;
      best_restart = r;
    }
  }
  if (!best) {
    throw OptimizerDivergedError("mogp_train: all optimizer restarts failed");
  }

  const SlfmParameters params =
      unpack_slfm(best->x, config.kernel, config.noise_floor);
  FitInfo fit;
  fit.iterations = best->iterations;
  fit.restart_index = best_restart;
  fit.log_likelihood = best->value;
  fit.converged = best->converged;
  return SlfmModel::from_parameters(params, norm, inputs,
                                    {series_1.values, series_2.values},
                                    {series_1.label, series_2.label}, fit);
}

/// Joint prediction of both outputs at arbitrary times (dense grids, the
/// union of both acquisition-date sets, anything). Means and observation
/// level standard deviations are de-normalized per output.
inline std::array<PredictionBand, 2> mogp_predict(const SlfmModel &model,
                                                  const Eigen::VectorXd &times) {
  std::array<PredictionBand, 2> bands;
  for (auto &band : bands) {
    band.times = times;
    band.mean.resize(times.size());
    band.stddev.resize(times.size());
  }
  if (times.size() == 0) return bands;

  const auto &params = model.parameters();
  const auto &inputs = model.inputs();
  const Eigen::Index n = inputs.total();
  const Eigen::Index m = times.size();

  // Cross-covariance rows for output d against all training samples.
  std::array<Eigen::MatrixXd, 2> cross = {Eigen::MatrixXd::Zero(m, n),
                                          Eigen::MatrixXd::Zero(m, n)};
  for (std::size_t q = 0; q < 2; ++q) {
    const Eigen::Matrix2d b = coreg_matrix(params.coregs[q]);
    for (int e = 0; e < 2; ++e) {
      if (inputs.count(e) == 0) continue;
      const Eigen::MatrixXd k = kernel_matrix(
          params.kernels[q], times, inputs.times[static_cast<std::size_t>(e)]);
      for (int d = 0; d < 2; ++d) {
        if (b(d, e) == 0.0) continue;
        cross[static_cast<std::size_t>(d)].middleCols(inputs.offset(e),
                                                      inputs.count(e)) +=
            b(d, e) * k;
      }
    }
  }

  for (int d = 0; d < 2; ++d) {
    const auto sd = static_cast<std::size_t>(d);
    const double prior_var = params.coregs[0].a[d] * params.coregs[0].a[d] +
                             params.coregs[1].a[d] * params.coregs[1].a[d] +
                             params.noise.sigma2[d];
    const Eigen::VectorXd mean_n = cross[sd] * model.alpha();
    const Eigen::MatrixXd cross_t = cross[sd].transpose();
    const Eigen::MatrixXd v = model.factor().solve(cross_t);
    const Normalization &norm = model.normalization()[sd];
    for (Eigen::Index j = 0; j < m; ++j) {
      const double var_n =
          std::max(prior_var - cross[sd].row(j).dot(v.col(j)), 1e-18);
      bands[sd].mean[j] = mean_n[j] * norm.std + norm.mean;
      bands[sd].stddev[j] = std::sqrt(var_n) * norm.std;
    }
  }
  return bands;
}

enum class SynergyClass { SynergyDominant, Mixed, Independent };

inline std::string to_string(SynergyClass c) {
  switch (c) {
  case SynergyClass::SynergyDominant: return "synergy_dominant";
  case SynergyClass::Mixed: return "mixed";
  default: return "independent";
  }
}

/// What a trained model says about the two series. The latent GPs are
/// relabeled LF/HF by descending lengthscale (ties go to the one with the
/// larger |b12|): LF carries the shared seasonal trend, HF the
/// output-specific detail. The off-diagonals b12 measure how much of each
/// latent is shared; the component ratios |a_{d,LF}/a_{d,HF}| say which
/// latent dominates each output.
struct SynergyDiagnostics {
  double ell_lf = 0.0;
  double ell_hf = 0.0;
  Eigen::Matrix2d b_lf = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d b_hf = Eigen::Matrix2d::Zero();
  double b12_lf = 0.0;
  double b12_hf = 0.0;
  double ratio_out1 = 0.0;
  double ratio_out2 = 0.0;
  SynergyClass synergy_class = SynergyClass::Mixed;
};

inline SynergyDiagnostics diagnose_parameters(const SlfmParameters &params,
                                              double synergy_threshold = 1.5) {
  validate(params);
  const double l0 = params.kernels[0].lengthscale;
  const double l1 = params.kernels[1].lengthscale;
  const double b12_0 = params.coregs[0].a[0] * params.coregs[0].a[1];
  const double b12_1 = params.coregs[1].a[0] * params.coregs[1].a[1];
  std::size_t lf = 0;
  if (l1 > l0 || (l1 == l0 && std::abs(b12_1) > std::abs(b12_0))) lf = 1;
  const std::size_t hf = 1 - lf;

  const CoregVector a_lf = params.coregs[lf].canonical();
  const CoregVector a_hf = params.coregs[hf].canonical();

  auto ratio = [](double num, double den) {
    num = std::abs(num);
    den = std::abs(den);
    if (den == 0.0) {
      return num == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                        : std::numeric_limits<double>::infinity();
    }
    return num / den;
  };

  SynergyDiagnostics diag;
  diag.ell_lf = params.kernels[lf].lengthscale;
  diag.ell_hf = params.kernels[hf].lengthscale;
  diag.b_lf = coreg_matrix(a_lf);
  diag.b_hf = coreg_matrix(a_hf);
  diag.b12_lf = diag.b_lf(0, 1);
  diag.b12_hf = diag.b_hf(0, 1);
  diag.ratio_out1 = ratio(a_lf.a[0], a_hf.a[0]);
  diag.ratio_out2 = ratio(a_lf.a[1], a_hf.a[1]);

  const bool coupled =
      std::abs(diag.b12_lf) > 1e-12 || std::abs(diag.b12_hf) > 1e-12;
  if (!coupled) {
    diag.synergy_class = SynergyClass::Independent;
  } else if (diag.ratio_out1 > synergy_threshold) {
    diag.synergy_class = SynergyClass::SynergyDominant;
  } else {
    diag.synergy_class = SynergyClass::Mixed;
  }
  return diag;
}

inline SynergyDiagnostics diagnose(const SlfmModel &model,
                                   double synergy_threshold = 1.5) {
  return diagnose_parameters(model.parameters(), synergy_threshold);
}

} // namespace tsfuse

#endif // TSFUSE_MOGP_HPP
