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

#ifndef TSFUSE_ERRORS_HPP
#define TSFUSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tsfuse {

/// Base class for all computation failures raised by this library.
/// Usage errors (bad arguments, malformed inputs) use std::invalid_argument
/// or the file/format errors below instead.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A symmetric matrix could not be factorized even after the jitter ladder
/// was exhausted; usually a sign of degenerate hyperparameters.
class NotPositiveDefiniteError : public Error {
public:
  using Error::Error;
};

/// A value series has zero dispersion, so z-score normalization (or a
/// correlation) is undefined. `output()` is 1-based; 0 means unspecified.
class ConstantSeriesError : public Error {
public:
  explicit ConstantSeriesError(int output_index = 0)
      : Error(output_index > 0
                  ? "series for output " + std::to_string(output_index) +
                        " is constant; cannot normalize"
                  : "series is constant"),
        output_(output_index) {}
  int output() const { return output_; }

private:
  int output_;
};

class TooFewSamplesError : public Error {
public:
  using Error::Error;
};

class TooFewPairsError : public Error {
public:
  using Error::Error;
};

/// Every optimizer restart failed to produce a finite objective value.
class OptimizerDivergedError : public Error {
public:
  using Error::Error;
};

class ZeroDenominatorError : public Error {
public:
  using Error::Error;
};

class ConstantReferenceError : public Error {
public:
  using Error::Error;
};

/// Malformed text content (CSV, key=value files, model files).
class FormatError : public Error {
public:
  using Error::Error;
};

/// Filesystem-level failure; the message always names the path.
class FileError : public Error {
public:
  using Error::Error;
};

} // namespace tsfuse

#endif // TSFUSE_ERRORS_HPP
