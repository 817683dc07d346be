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

#include "perpetua/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace perpetua {

WilsonInterval wilson_ci(std::size_t successes, std::size_t total, double z) {
  if (total == 0) return {0.0, 1.0};
  const double n = double(total);
  const double p = double(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double EmpiricalLaw::mean_finite() const {
  if (samples.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (double v : samples) sum += v;
  return sum / double(samples.size());
}

KsResult ks_censored(const EmpiricalLaw& a, const EmpiricalLaw& b) {
  const std::size_t min_samples = 200;
  if (a.n_total() < min_samples || b.n_total() < min_samples)
    throw std::invalid_argument("ks_censored needs at least 200 paths per law");

  KsResult result;
  result.mass_gap = std::abs(a.infinite_mass() - b.infinite_mass());
  if (a.censored_at) result.common_censor = *a.censored_at;
  if (b.censored_at)
    result.common_censor = std::min(result.common_censor, *b.censored_at);

  std::vector<double> sa = a.samples;
  std::vector<double> sb = b.samples;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = double(a.n_total());
  const double nb = double(b.n_total());

  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < sa.size() || ib < sb.size()) {
    const double next_a =
        ia < sa.size() ? sa[ia] : std::numeric_limits<double>::infinity();
    const double next_b =
        ib < sb.size() ? sb[ib] : std::numeric_limits<double>::infinity();
    const double x = std::min(next_a, next_b);
    if (x > result.common_censor) break;
    while (ia < sa.size() && sa[ia] == x) ++ia;
    while (ib < sb.size() && sb[ib] == x) ++ib;
    d = std::max(d, std::abs(double(ia) / na - double(ib) / nb));
  }
  result.d_statistic = d;
  return result;
}

double ks_critical_value(std::size_t n, std::size_t m, double alpha) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return c * std::sqrt(double(n + m) / (double(n) * double(m)));
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * double(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double w = pos - double(lo);
  return (1.0 - w) * values[lo] + w * values[hi];
}

}  // namespace perpetua
