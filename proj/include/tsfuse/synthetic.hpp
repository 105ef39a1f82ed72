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

#ifndef TSFUSE_SYNTHETIC_HPP
#define TSFUSE_SYNTHETIC_HPP

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tsfuse/covariance.hpp"
#include "tsfuse/errors.hpp"
#include "tsfuse/kernel.hpp"
#include "tsfuse/metrics.hpp"
#include "tsfuse/time_series.hpp"

namespace tsfuse {

/// Dual-pol radar vegetation index 4 VH / (VH + VV) from linear backscatter
/// powers. Range [0, 4); scale invariant.
inline double rvi(double vh, double vv) {
  if (!(vh >= 0.0) || !(vv >= 0.0)) {
    throw std::invalid_argument("rvi expects nonnegative linear backscatter");
  }
  if (vh + vv == 0.0) {
    throw ZeroDenominatorError("rvi undefined for vh = vv = 0");
  }
  return 4.0 * vh / (vh + vv);
}

/// Merge ascending/descending acquisitions into one series, averaging
/// samples that fall on the same calendar day (floor of the fractional
/// day). Days present in only one input pass through unchanged.
inline TimeSeries merge_daily(const TimeSeries &asc, const TimeSeries &desc) {
  validate(asc);
  validate(desc);
  struct Bucket {
    double time_sum = 0.0, value_sum = 0.0;
    int count = 0;
  };
  std::map<long long, Bucket> days;
  auto absorb = [&](const TimeSeries &s) {
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      auto &b = days[static_cast<long long>(std::floor(s.times[i]))];
      b.time_sum += s.times[i];
      b.value_sum += s.values[i];
      b.count += 1;
    }
  };
  absorb(asc);
  absorb(desc);
  TimeSeries out;
  out.label = asc.label.empty() ? desc.label : asc.label;
  out.times.resize(static_cast<Eigen::Index>(days.size()));
  out.values.resize(static_cast<Eigen::Index>(days.size()));
  Eigen::Index i = 0;
  for (const auto &[day, b] : days) {
    out.times[i] = b.time_sum / b.count;
    out.values[i] = b.value_sum / b.count;
    ++i;
  }
  return out;
}

namespace detail {

/// Index of the element of `sorted` nearest to t (ties go to the earlier
/// element).
inline Eigen::Index nearest_index(const Eigen::VectorXd &sorted, double t) {
  const double *begin = sorted.data();
  const double *end = begin + sorted.size();
  const double *it = std::lower_bound(begin, end, t);
  if (it == begin) return 0;
  if (it == end) return sorted.size() - 1;
  const Eigen::Index right = it - begin;
  return (t - sorted[right - 1] <= sorted[right] - t) ? right - 1 : right;
}

} // namespace detail

/// Pearson correlation over nearest-time pairs: each sample of `a` pairs
/// with the nearest sample of `b` within the tolerance window.
inline double pearson_temporal(const TimeSeries &a, const TimeSeries &b,
                               double pairing_tolerance_days = 1.5) {
  validate(a);
  validate(b);
  if (!(pairing_tolerance_days >= 0.0)) {
    throw std::invalid_argument("pairing tolerance must be nonnegative");
  }
  std::vector<double> pa, pb;
  for (Eigen::Index i = 0; i < a.size() && b.size() > 0; ++i) {
    const Eigen::Index j = detail::nearest_index(b.times, a.times[i]);
    if (std::abs(a.times[i] - b.times[j]) <= pairing_tolerance_days) {
      pa.push_back(a.values[i]);
      pb.push_back(b.values[j]);
    }
  }
  if (pa.size() < 3) {
    throw TooFewPairsError("pearson_temporal found only " +
                           std::to_string(pa.size()) +
                           " pairs within tolerance (need >= 3)");
  }
  const auto n = static_cast<Eigen::Index>(pa.size());
  return pearson_correlation(Eigen::Map<const Eigen::VectorXd>(pa.data(), n),
                             Eigen::Map<const Eigen::VectorXd>(pb.data(), n));
}

struct DescriptorScore {
  std::string label;
  double rho_t;
};

struct DescriptorRanking {
  std::vector<DescriptorScore> ranked;               // rho_t descending
  std::vector<std::pair<std::string, std::string>> skipped; // (label, reason)
};

/// Rank candidate companion descriptors by their temporal correlation with
/// the optical series. Candidates whose correlation is undefined are
/// excluded and reported in `skipped`. Ties break by label.
inline DescriptorRanking
select_descriptor(const TimeSeries &optical,
                  const std::vector<std::pair<std::string, TimeSeries>> &candidates,
                  double pairing_tolerance_days = 1.5) {
  DescriptorRanking out;
  for (const auto &[label, series] : candidates) {
    try {
      out.ranked.push_back({label, pearson_temporal(optical, series,
                                                    pairing_tolerance_days)});
    } catch (const Error &e) {
      out.skipped.emplace_back(label, e.what());
    }
  }
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const DescriptorScore &x, const DescriptorScore &y) {
                     if (x.rho_t != y.rho_t) return x.rho_t > y.rho_t;
                     return x.label < y.label;
                   });
  return out;
}

enum class GeneratorKind { DoubleLogisticSeasons, SlfmSample };

struct GapWindow {
  double start = 0.0;  // days; samples with start <= t < start + length drop
  double length = 0.0;
};

/// Seasonal double-logistic profile for the optical-like output, with the
/// radar-like output derived from the same seasons through an affine map
/// plus an independent short-period detail term.
struct DoubleLogisticParams {
  double base = 0.2;
  double amplitude = 4.5;
  double rise_rate = 0.08; // 1/day
  double fall_rate = 0.08;
  double season_start = 60.0; // growth onset within each cycle
  double season_length = 180.0;
  double season_period = 365.0;
  double out2_offset = 0.3;
  double out2_scale = 0.35;
  double out2_detail_amp = 0.15;
  double out2_detail_period = 30.0;
};

/// Joint draw from the two-latent rank-1 coregionalization prior.
struct SlfmSampleParams {
  KernelKind kernel = KernelKind::Matern32;
  std::array<double, 2> lengthscales = {76.44, 13.43};
  std::array<CoregVector, 2> coregs = {
      CoregVector{Eigen::Vector2d(0.8420, 1.0831)},
      CoregVector{Eigen::Vector2d(0.4243, -0.036)}};
};

struct ScenarioConfig {
  GeneratorKind generator = GeneratorKind::DoubleLogisticSeasons;
  double span_days = 1095.0;
  double interval_1 = 15.0; // sampling cadence of output 1 (optical-like)
  double interval_2 = 6.0;  // cadence of output 2 (radar-like, gap free)
  std::vector<GapWindow> gaps; // applied to output 1 only
  double noise_std_1 = 0.05;
  double noise_std_2 = 0.05;
  std::uint64_t seed = 0;
  double truth_step = 1.0;
  DoubleLogisticParams logistic;
  SlfmSampleParams slfm;
};

inline void validate(const ScenarioConfig &config) {
  if (!(config.span_days > 0.0)) {
    throw std::invalid_argument("scenario span must be positive");
  }
  if (!(config.interval_1 > 0.0) || !(config.interval_2 > 0.0) ||
      !(config.truth_step > 0.0)) {
    throw std::invalid_argument("scenario sampling intervals must be positive");
  }
  if (!(config.noise_std_1 >= 0.0) || !(config.noise_std_2 >= 0.0)) {
    throw std::invalid_argument("scenario noise levels must be nonnegative");
  }
  for (const auto &gap : config.gaps) {
    if (!(gap.length > 0.0) || gap.start < 0.0 ||
        gap.start + gap.length > config.span_days) {
      throw std::invalid_argument("gap windows must lie within the scenario span");
    }
  }
  if (config.generator == GeneratorKind::SlfmSample) {
    for (double l : config.slfm.lengthscales) {
      if (!(l > 0.0)) throw std::invalid_argument("slfm lengthscales must be positive");
    }
  }
}

struct Scenario {
  TimeSeries truth_1;    // noiseless dense output-1 curve
  TimeSeries observed_1; // sampled, gapped, noisy
  TimeSeries observed_2; // sampled, noisy, gap free
};

namespace detail {

inline Eigen::VectorXd regular_grid(double span, double step) {
  std::vector<double> t;
  for (double x = 0.0; x <= span + 1e-9; x += step) t.push_back(x);
  return Eigen::Map<const Eigen::VectorXd>(t.data(),
                                           static_cast<Eigen::Index>(t.size()));
}

inline double logistic_sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double double_logistic_value(const DoubleLogisticParams &p, double t) {
  double value = p.base;
  const int first = static_cast<int>(std::floor((t - 2.0 * p.season_period) /
                                                p.season_period));
  for (int s = first; s <= first + 4; ++s) {
    const double sos = p.season_start + s * p.season_period;
    const double eos = sos + p.season_length;
    value += p.amplitude * (logistic_sigmoid(p.rise_rate * (t - sos)) -
                            logistic_sigmoid(p.fall_rate * (t - eos)));
  }
  return value;
}

} // namespace detail

/// Deterministic generation of a coupled optical/radar-like scenario:
/// truth curve, gapped noisy samples of output 1, dense noisy samples of
/// output 2. Identical configurations (including the seed) reproduce
/// bit-identical series.
inline Scenario generate_scenario(const ScenarioConfig &config) {
  validate(config);
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> unit_normal(0.0, 1.0);

  const Eigen::VectorXd grid = detail::regular_grid(config.span_days, config.truth_step);
  const Eigen::VectorXd t1 = detail::regular_grid(config.span_days, config.interval_1);
  const Eigen::VectorXd t2 = detail::regular_grid(config.span_days, config.interval_2);

  Eigen::VectorXd truth(grid.size());
  Eigen::VectorXd f1(t1.size()), f2(t2.size());

  if (config.generator == GeneratorKind::DoubleLogisticSeasons) {
    const double phase =
        std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
    const auto &p = config.logistic;
    auto out2 = [&](double t) {
      return p.out2_offset + p.out2_scale * detail::double_logistic_value(p, t) +
             p.out2_detail_amp *
                 std::sin(2.0 * std::numbers::pi * t / p.out2_detail_period + phase);
    };
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      truth[i] = detail::double_logistic_value(p, grid[i]);
    }
    for (Eigen::Index i = 0; i < t1.size(); ++i) {
      f1[i] = detail::double_logistic_value(p, t1[i]);
    }
    for (Eigen::Index i = 0; i < t2.size(); ++i) f2[i] = out2(t2[i]);
  } else {
    // Joint latent draw over the union of all evaluation times.
    std::vector<double> u(grid.data(), grid.data() + grid.size());
    u.insert(u.end(), t1.data(), t1.data() + t1.size());
    u.insert(u.end(), t2.data(), t2.data() + t2.size());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    const Eigen::Map<const Eigen::VectorXd> union_times(
        u.data(), static_cast<Eigen::Index>(u.size()));
    const Eigen::Index m = union_times.size();

    std::array<Eigen::VectorXd, 2> latent;
    for (std::size_t q = 0; q < 2; ++q) {
      const KernelParams kernel{config.slfm.kernel, config.slfm.lengthscales[q]};
      Eigen::MatrixXd k = kernel_matrix(kernel, union_times, union_times);
      k.diagonal().array() += 1e-10;
      const CholeskyFactor factor = stable_factorize(k);
      Eigen::VectorXd z(m);
      for (Eigen::Index i = 0; i < m; ++i) z[i] = unit_normal(rng);
      latent[q] = factor.matrix_l() * z;
    }
    auto lookup = [&](double t) {
      const auto it = std::lower_bound(u.begin(), u.end(), t);
      return static_cast<Eigen::Index>(it - u.begin());
    };
    auto value_of = [&](int output, double t) {
      const Eigen::Index i = lookup(t);
      return config.slfm.coregs[0].a[output] * latent[0][i] +
             config.slfm.coregs[1].a[output] * latent[1][i];
    };
    for (Eigen::Index i = 0; i < grid.size(); ++i) truth[i] = value_of(0, grid[i]);
    for (Eigen::Index i = 0; i < t1.size(); ++i) f1[i] = value_of(0, t1[i]);
    for (Eigen::Index i = 0; i < t2.size(); ++i) f2[i] = value_of(1, t2[i]);
  }

  // Noise is drawn for every nominal sample before gaps are applied, so a
  // gap changes which rows survive but not the values of the survivors.
  Eigen::VectorXd noisy1(t1.size()), noisy2(t2.size());
  for (Eigen::Index i = 0; i < t1.size(); ++i) {
    noisy1[i] = f1[i] + config.noise_std_1 * unit_normal(rng);
  }
  for (Eigen::Index i = 0; i < t2.size(); ++i) {
    noisy2[i] = f2[i] + config.noise_std_2 * unit_normal(rng);
  }

  auto in_gap = [&](double t) {
    for (const auto &gap : config.gaps) {
      if (t >= gap.start && t < gap.start + gap.length) return true;
    }
    return false;
  };

  Scenario scenario;
  scenario.truth_1 = TimeSeries{grid, truth, "truth_1"};
  {
    std::vector<double> kt, kv;
    for (Eigen::Index i = 0; i < t1.size(); ++i) {
      if (!in_gap(t1[i])) {
        kt.push_back(t1[i]);
        kv.push_back(noisy1[i]);
      }
    }
    const auto n = static_cast<Eigen::Index>(kt.size());
    scenario.observed_1 =
        TimeSeries{Eigen::Map<const Eigen::VectorXd>(kt.data(), n),
                   Eigen::Map<const Eigen::VectorXd>(kv.data(), n), "observed_1"};
  }
  scenario.observed_2 = TimeSeries{t2, noisy2, "observed_2"};
  return scenario;
}

} // namespace tsfuse

#endif // TSFUSE_SYNTHETIC_HPP
