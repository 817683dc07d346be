// Copyright 2026 the perpetua authors
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

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace perpetua {

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

WilsonInterval wilson_ci(std::size_t successes, std::size_t total,
                         double z = 1.959963984540054);

// Empirical law of a [0, inf]-valued quantity observed per path.  Finite
// observations live in `samples`; paths classified as divergent carry mass
// at +inf; biased-low censored observations are only counted.
struct EmpiricalLaw {
  std::vector<double> samples;
  std::size_t n_divergent = 0;
  std::size_t n_censored_low = 0;
  std::optional<double> censored_at;  // horizon, when observations are capped

  std::size_t n_total() const {
    return samples.size() + n_divergent + n_censored_low;
  }
  double infinite_mass() const {
    const std::size_t n = n_total();
    return n == 0 ? 0.0 : double(n_divergent) / double(n);
  }
  double mean_finite() const;
};

struct KsResult {
  double d_statistic = 0.0;   // sup |F1 - F2| over the common finite support
  double mass_gap = 0.0;      // |infinite-mass difference|
  double common_censor = std::numeric_limits<double>::infinity();
};

// Two-sample Kolmogorov-Smirnov distance on sub-distribution functions:
// jumps come from finite samples only, denominators count every path, and
// the comparison stops at the smaller censoring horizon.
KsResult ks_censored(const EmpiricalLaw& a, const EmpiricalLaw& b);

// Large-sample two-sided critical value c(alpha) sqrt((n+m)/(nm)).
double ks_critical_value(std::size_t n, std::size_t m, double alpha = 0.01);

double percentile(std::vector<double> values, double q);

}  // namespace perpetua
