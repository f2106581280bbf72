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

#ifndef ASRINC_STATS_H_
#define ASRINC_STATS_H_

#include <span>

namespace asrinc {

// Sample Pearson correlation. Throws LengthMismatch, TooFewValues (< 3
// points) and DegenerateVariance.
double pearson(std::span<const double> x, std::span<const double> y);

struct MeanCi {
  double mean;
  double halfwidth;
};

// Student-t interval mean +/- t_{(1+level)/2, n-1} * s / sqrt(n).
// Throws TooFewValues.
MeanCi mean_ci(std::span<const double> values, double level = 0.95);

struct TTestResult {
  double t_stat;
  double p_value;  // two-sided
  double dof;
  bool significant;  // p < 0.05
};

struct TTestOptions {
  // Floor on the squared standard error, used when both samples are
  // constant.
  double variance_epsilon = 1e-12;
  double significance_level = 0.05;
};

// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
// freedom. Throws TooFewValues.
TTestResult two_sample_t(std::span<const double> a, std::span<const double> b,
                         const TTestOptions &options = {});

// Two-sided quantile and CDF helpers over Student's t.
double student_t_cdf(double t, double dof);
double student_t_quantile(double p, double dof);

}  // namespace asrinc

#endif  // ASRINC_STATS_H_
