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

#ifndef TSFUSE_TIME_SERIES_HPP
#define TSFUSE_TIME_SERIES_HPP

#include <Eigen/Core>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>

#include "tsfuse/errors.hpp"

namespace tsfuse {

/// Irregularly sampled scalar observations of one output. Times are
/// fractional days since an arbitrary epoch and must be strictly ascending;
/// missing observations are simply absent (never sentinel values).
struct TimeSeries {
  Eigen::VectorXd times;
  Eigen::VectorXd values;
  std::string label;

  Eigen::Index size() const { return times.size(); }
};

inline void validate(const TimeSeries &series) {
  if (series.times.size() != series.values.size()) {
    throw std::invalid_argument("time series '" + series.label +
                                "': times and values differ in length");
  }
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    if (!std::isfinite(series.times[i]) || !std::isfinite(series.values[i])) {
      throw std::invalid_argument("time series '" + series.label +
                                  "': non-finite entry at row " +
                                  std::to_string(i));
    }
    if (i > 0 && !(series.times[i] > series.times[i - 1])) {
      throw std::invalid_argument("time series '" + series.label +
                                  "': times must be strictly ascending (row " +
                                  std::to_string(i) + ")");
    }
  }
}

inline TimeSeries make_series(std::initializer_list<double> times,
                              std::initializer_list<double> values,
                              std::string label = "") {
  TimeSeries s;
  s.times = Eigen::Map<const Eigen::VectorXd>(times.begin(),
                                              static_cast<Eigen::Index>(times.size()));
  s.values = Eigen::Map<const Eigen::VectorXd>(values.begin(),
                                               static_cast<Eigen::Index>(values.size()));
  s.label = std::move(label);
  validate(s);
  return s;
}

/// Remove the samples whose times match `holdout` exactly (bitwise double
/// equality; times written and re-read through the CSV layer round-trip
/// exactly). Throws if any requested time is absent.
inline TimeSeries remove_exact_times(const TimeSeries &series,
                                     const Eigen::VectorXd &holdout) {
  validate(series);
  std::vector<bool> keep(static_cast<std::size_t>(series.size()), true);
  for (Eigen::Index h = 0; h < holdout.size(); ++h) {
    bool found = false;
    for (Eigen::Index i = 0; i < series.size(); ++i) {
      if (series.times[i] == holdout[h] && keep[static_cast<std::size_t>(i)]) {
        keep[static_cast<std::size_t>(i)] = false;
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::invalid_argument("holdout time " + std::to_string(holdout[h]) +
                                  " is not a sample of series '" + series.label +
                                  "'");
    }
  }
  TimeSeries out;
  out.label = series.label;
  const Eigen::Index kept =
      series.size() - static_cast<Eigen::Index>(holdout.size());
  out.times.resize(kept);
  out.values.resize(kept);
  Eigen::Index j = 0;
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    if (keep[static_cast<std::size_t>(i)]) {
      out.times[j] = series.times[i];
      out.values[j] = series.values[i];
      ++j;
    }
  }
  return out;
}

} // namespace tsfuse

#endif // TSFUSE_TIME_SERIES_HPP
