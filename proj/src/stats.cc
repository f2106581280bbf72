// Copyright (c) 2026 The asrinc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "error.h"

namespace asrinc {

namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    fail(ErrorCode::kLengthMismatch, "pearson: " + std::to_string(x.size()) + " vs " +
                                         std::to_string(y.size()) + " values");
  }
  if (x.size() < 3) fail(ErrorCode::kTooFewValues, "pearson needs at least 3 points");
  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) fail(ErrorCode::kDegenerateVariance, "pearson: zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double student_t_cdf(double t, double dof) {
  return boost::math::cdf(boost::math::students_t(dof), t);
}

double student_t_quantile(double p, double dof) {
  return boost::math::quantile(boost::math::students_t(dof), p);
}

MeanCi mean_ci(std::span<const double> values, double level) {
  if (values.size() < 2) fail(ErrorCode::kTooFewValues, "mean_ci needs at least 2 values");
  if (!(level > 0.0 && level < 1.0)) fail(ErrorCode::kInvalidArgument, "level must be in (0, 1)");
  const double n = static_cast<double>(values.size());
  const double m = mean_of(values);
  const double s = std::sqrt(sample_variance(values, m));
  const double t = student_t_quantile((1.0 + level) / 2.0, n - 1.0);
  return {m, t * s / std::sqrt(n)};
}

TTestResult two_sample_t(std::span<const double> a, std::span<const double> b,
                         const TTestOptions &options) {
  if (a.size() < 2 || b.size() < 2) {
    fail(ErrorCode::kTooFewValues, "t-test needs at least 2 values per sample");
  }
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double ma = mean_of(a), mb = mean_of(b);
  const double va = sample_variance(a, ma) / na, vb = sample_variance(b, mb) / nb;
  const double se2 = va + vb;
  const double diff = ma - mb;

  TTestResult r{};
  if (se2 < options.variance_epsilon) {
    r.dof = na + nb - 2.0;
    if (diff == 0.0) {
      r.t_stat = 0.0;
      r.p_value = 1.0;
    } else {
      r.t_stat = diff / std::sqrt(options.variance_epsilon);
      r.p_value = 2.0 * student_t_cdf(-std::abs(r.t_stat), r.dof);
    }
  } else {
    r.dof = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    r.t_stat = diff / std::sqrt(se2);
    r.p_value = std::min(1.0, 2.0 * student_t_cdf(-std::abs(r.t_stat), r.dof));
  }
  r.significant = r.p_value < options.significance_level;
  return r;
}

}  // namespace asrinc
