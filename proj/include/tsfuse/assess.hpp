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

#ifndef TSFUSE_ASSESS_HPP
#define TSFUSE_ASSESS_HPP

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "tsfuse/errors.hpp"
#include "tsfuse/gp.hpp"
#include "tsfuse/keyvalue.hpp"
#include "tsfuse/metrics.hpp"
#include "tsfuse/mogp.hpp"
#include "tsfuse/time_series.hpp"

namespace tsfuse {

enum class AssessMethod { Mogp, Gp, Linear, Nearest, Previous };

inline std::string to_string(AssessMethod method) {
  switch (method) {
  case AssessMethod::Mogp: return "mogp";
  case AssessMethod::Gp: return "gp";
  case AssessMethod::Linear: return "linear";
  case AssessMethod::Nearest: return "nearest";
  default: return "previous";
  }
}

inline AssessMethod assess_method_from_string(const std::string &name) {
  if (name == "mogp") return AssessMethod::Mogp;
  if (name == "gp") return AssessMethod::Gp;
  if (name == "linear") return AssessMethod::Linear;
  if (name == "nearest") return AssessMethod::Nearest;
  if (name == "previous") return AssessMethod::Previous;
  throw std::invalid_argument("unknown assessment method '" + name + "'");
}

enum class R2Definition { SquaredPearson, CoefficientOfDetermination };

struct AssessOptions {
  AssessMethod method = AssessMethod::Gp;
  R2Definition r2 = R2Definition::SquaredPearson;
  TrainConfig train;
};

/// Holdout evaluation of one method, in original units.
struct AssessmentReport {
  std::string method;
  std::string r2_definition;
  Eigen::VectorXd holdout_times;
  Eigen::VectorXd predicted;
  Eigen::VectorXd reference;
  Eigen::VectorXd residuals; // predicted - reference
  double r2 = std::numeric_limits<double>::quiet_NaN(); // NaN when undefined
  double rmse = 0.0;
  std::optional<SynergyDiagnostics> diagnostics; // mogp runs only
  std::optional<FitInfo> fit;                    // trained methods only
};

inline double interpolate_linear(const TimeSeries &series, double t) {
  validate(series);
  if (series.size() == 0) throw std::invalid_argument("empty series");
  if (t <= series.times[0]) return series.values[0];
  const Eigen::Index last = series.size() - 1;
  if (t >= series.times[last]) return series.values[last];
  Eigen::Index hi = 1;
  while (series.times[hi] < t) ++hi;
  const double t0 = series.times[hi - 1], t1 = series.times[hi];
  const double v0 = series.values[hi - 1], v1 = series.values[hi];
  return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

inline double interpolate_nearest(const TimeSeries &series, double t) {
  validate(series);
  if (series.size() == 0) throw std::invalid_argument("empty series");
  return series.values[detail::nearest_index(series.times, t)];
}

inline double interpolate_previous(const TimeSeries &series, double t) {
  validate(series);
  if (series.size() == 0) throw std::invalid_argument("empty series");
  Eigen::Index i = 0;
  while (i + 1 < series.size() && series.times[i + 1] <= t) ++i;
  if (series.times[i] > t) return series.values[0]; // nothing earlier
  return series.values[i];
}

/// Leave-one-image-out style assessment: remove the holdout samples from
/// the output-1 training series only, fit or apply the method, predict at
/// the holdout times and score against the withheld values. R^2 is NaN
/// when undefined (fewer than 2 points, or constant reference).
inline AssessmentReport assess_holdout(const TimeSeries &series_1,
                                       const TimeSeries &series_2,
                                       const Eigen::VectorXd &holdout_times,
                                       const AssessOptions &options = {}) {
  if (holdout_times.size() == 0) {
    throw std::invalid_argument("holdout list is empty; nothing to assess");
  }
  const TimeSeries reduced = remove_exact_times(series_1, holdout_times);

  AssessmentReport report;
  report.method = to_string(options.method);
  report.r2_definition = options.r2 == R2Definition::SquaredPearson
                             ? "squared_pearson"
                             : "coefficient_of_determination";
  report.holdout_times = holdout_times;
  report.reference.resize(holdout_times.size());
  for (Eigen::Index h = 0; h < holdout_times.size(); ++h) {
    for (Eigen::Index i = 0; i < series_1.size(); ++i) {
      if (series_1.times[i] == holdout_times[h]) {
        report.reference[h] = series_1.values[i];
        break;
      }
    }
  }

  switch (options.method) {
  case AssessMethod::Mogp: {
    const SlfmModel model = mogp_train(reduced, series_2, options.train);
    report.predicted = mogp_predict(model, holdout_times)[0].mean;
    report.diagnostics = diagnose(model);
    report.fit = model.fit_info();
    break;
  }
  case AssessMethod::Gp: {
    const GpModel model = gp_train(reduced, options.train);
    report.predicted = gp_predict(model, holdout_times).mean;
    report.fit = model.fit_info();
    break;
  }
  default: {
    report.predicted.resize(holdout_times.size());
    for (Eigen::Index h = 0; h < holdout_times.size(); ++h) {
      const double t = holdout_times[h];
      report.predicted[h] = options.method == AssessMethod::Linear
                                ? interpolate_linear(reduced, t)
                                : options.method == AssessMethod::Nearest
                                      ? interpolate_nearest(reduced, t)
                                      : interpolate_previous(reduced, t);
    }
    break;
  }
  }

  report.residuals = report.predicted - report.reference;
  report.rmse = metric_rmse(report.predicted, report.reference);
  try {
    report.r2 = options.r2 == R2Definition::SquaredPearson
                    ? metric_r2(report.predicted, report.reference)
                    : metric_r2_cod(report.predicted, report.reference);
  } catch (const std::exception &) {
    report.r2 = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

inline std::string serialize_report(const AssessmentReport &report) {
  KeyValueDocument doc;
  doc.add("tsfuse_report_version", "1");
  doc.add("method", report.method);
  doc.add("r2_definition", report.r2_definition);
  doc.add("n_holdout", std::to_string(report.holdout_times.size()));
  doc.add("r2", format_double(report.r2));
  doc.add("rmse", format_double(report.rmse));
  doc.add("holdout_times", format_vector(report.holdout_times));
  doc.add("predicted", format_vector(report.predicted));
  doc.add("reference", format_vector(report.reference));
  doc.add("residuals", format_vector(report.residuals));
  if (report.fit) {
    doc.add("log_likelihood", format_double(report.fit->log_likelihood));
    doc.add("optimizer_iterations", std::to_string(report.fit->iterations));
    doc.add("optimizer_converged", report.fit->converged ? "1" : "0");
  }
  if (report.diagnostics) {
    const auto &d = *report.diagnostics;
    doc.add("ell_lf", format_double(d.ell_lf));
    doc.add("ell_hf", format_double(d.ell_hf));
    doc.add("b12_lf", format_double(d.b12_lf));
    doc.add("b12_hf", format_double(d.b12_hf));
    doc.add("ratio_out1", format_double(d.ratio_out1));
    doc.add("ratio_out2", format_double(d.ratio_out2));
    doc.add("synergy_class", to_string(d.synergy_class));
  }
  return doc.serialize();
}

} // namespace tsfuse

#endif // TSFUSE_ASSESS_HPP
