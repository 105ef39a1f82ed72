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

#ifndef TSFUSE_CSV_IO_HPP
#define TSFUSE_CSV_IO_HPP

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tsfuse/errors.hpp"
#include "tsfuse/keyvalue.hpp"
#include "tsfuse/time_series.hpp"
#include "tsfuse/training.hpp"

namespace tsfuse {

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    lines.push_back(trim(text.substr(pos, eol - pos)));
    pos = eol + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    fields.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

} // namespace detail

/// Series CSV: header `time,value`, one sample per row, times in fractional
/// days relative to `epoch`. Missing observations are absent rows.
inline TimeSeries parse_series_csv(const std::string &text, std::string label,
                                   double epoch = 0.0) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw FormatError("series CSV is empty");
  const auto header = detail::split_fields(lines[0]);
  if (header.size() != 2 || header[0] != "time" || header[1] != "value") {
    throw FormatError("series CSV must start with header 'time,value'");
  }
  std::vector<double> times, values;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = detail::split_fields(lines[i]);
    if (fields.size() != 2) {
      throw FormatError("series CSV row " + std::to_string(i + 1) +
                        ": expected 2 fields");
    }
    times.push_back(parse_double(fields[0]) - epoch);
    values.push_back(parse_double(fields[1]));
  }
  TimeSeries series;
  series.label = std::move(label);
  series.times = Eigen::Map<const Eigen::VectorXd>(
      times.data(), static_cast<Eigen::Index>(times.size()));
  series.values = Eigen::Map<const Eigen::VectorXd>(
      values.data(), static_cast<Eigen::Index>(values.size()));
  validate(series);
  return series;
}

inline TimeSeries read_series_csv(const std::filesystem::path &path,
                                  double epoch = 0.0) {
  return parse_series_csv(read_text_file(path), path.stem().string(), epoch);
}

inline std::string serialize_series_csv(const TimeSeries &series,
                                        double epoch = 0.0) {
  std::string out = "time,value\n";
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    out += format_double(series.times[i] + epoch);
    out += ",";
    out += format_double(series.values[i]);
    out += "\n";
  }
  return out;
}

inline void write_series_csv(const std::filesystem::path &path,
                             const TimeSeries &series, double epoch = 0.0) {
  write_text_file_atomic(path, serialize_series_csv(series, epoch));
}

/// Query times: either a plain one-number-per-line file or any CSV whose
/// first column is `time`.
inline Eigen::VectorXd read_times_file(const std::filesystem::path &path,
                                       double epoch = 0.0) {
  const std::string text = read_text_file(path);
  const auto lines = detail::split_lines(text);
  std::vector<double> times;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = detail::split_fields(lines[i]);
    if (i == 0 && !fields.empty() && fields[0] == "time") continue;
    times.push_back(parse_double(fields[0]) - epoch);
  }
  if (times.empty()) {
    throw FormatError("times file '" + path.string() + "' contains no times");
  }
  return Eigen::Map<const Eigen::VectorXd>(times.data(),
                                           static_cast<Eigen::Index>(times.size()));
}

/// Prediction CSV: `time,mean_1,std_1[,mean_2,std_2]`.
inline std::string serialize_prediction_csv(const PredictionBand &band_1,
                                            const PredictionBand *band_2,
                                            double epoch = 0.0) {
  std::string out = band_2 ? "time,mean_1,std_1,mean_2,std_2\n" : "time,mean_1,std_1\n";
  for (Eigen::Index i = 0; i < band_1.times.size(); ++i) {
    out += format_double(band_1.times[i] + epoch);
    out += ",";
    out += format_double(band_1.mean[i]);
    out += ",";
    out += format_double(band_1.stddev[i]);
    if (band_2) {
      out += ",";
      out += format_double(band_2->mean[i]);
      out += ",";
      out += format_double(band_2->stddev[i]);
    }
    out += "\n";
  }
  return out;
}

} // namespace tsfuse

#endif // TSFUSE_CSV_IO_HPP
