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

#ifndef TSFUSE_TSFUSE_HPP
#define TSFUSE_TSFUSE_HPP

#include "tsfuse/assess.hpp"
#include "tsfuse/covariance.hpp"
#include "tsfuse/csv_io.hpp"
#include "tsfuse/errors.hpp"
#include "tsfuse/gp.hpp"
#include "tsfuse/kernel.hpp"
#include "tsfuse/keyvalue.hpp"
#include "tsfuse/metrics.hpp"
#include "tsfuse/model_io.hpp"
#include "tsfuse/mogp.hpp"
#include "tsfuse/optimizer.hpp"
#include "tsfuse/synthetic.hpp"
#include "tsfuse/time_series.hpp"
#include "tsfuse/training.hpp"

namespace tsfuse {

inline constexpr const char *version = "0.1.0";

} // namespace tsfuse

#endif // TSFUSE_TSFUSE_HPP
