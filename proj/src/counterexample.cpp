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

#include "perpetua/counterexample.hpp"

#include <cmath>
#include <stdexcept>

namespace perpetua {

double unit_ball_volume(int dim) {
  return std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

Counterexample build_counterexample_g(const ScalarField& rho, int dim,
                                      int n_balls, long search_budget) {
  if (dim < 3) throw std::invalid_argument("counterexample needs dim >= 3");
  if (n_balls < 1) throw std::invalid_argument("n_balls must be >= 1");
  if (std::abs(rho(0.0) - 1.0) > 1e-9)
    throw std::invalid_argument("rho(0) must equal 1");

  CounterexampleSpec spec;
  spec.rho = rho;
  spec.dim = dim;
  spec.center_norms.push_back(1.0);  // x_1 = e_1
  for (int n = 1; n < n_balls; ++n) {
    const double base = 4.0 * spec.center_norms.back();
    const double threshold = std::pow(4.0, double(dim) * (n + 1));
    bool found = false;
    for (long k = 1; k <= search_budget; ++k) {
      const double t = base * (1.0 + double(k) / 8.0);
      if (rho(0.5 * t) > threshold) {
        spec.center_norms.push_back(t);
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::runtime_error(
          "rho grows too slowly for requested n_balls (stuck at ball " +
          std::to_string(n + 1) + ")");
    }
  }
  for (int n = 0; n < n_balls; ++n)
    spec.radii.push_back(std::pow(3.0, -(n + 1)) * spec.center_norms[n]);

  ScalarField g;
  g.dim = dim;
  g.eval = [spec](const Vector& x) {
    for (std::size_t n = 0; n < spec.center_norms.size(); ++n) {
      Vector center = Vector::Zero(x.size());
      center[0] = spec.center_norms[n];
      if ((x - center).norm() < spec.radii[n]) {
        return (1.0 + x.squaredNorm()) /
               spec.rho(spec.center_norms[n] - spec.radii[n]);
      }
    }
    const double r2 = x.squaredNorm();
    return 2.0 + r2 * r2;
  };
  return Counterexample{std::move(spec), std::move(g)};
}

std::vector<double> divergence_partial_sums(const CounterexampleSpec& spec) {
  const double omega = unit_ball_volume(spec.dim);
  std::vector<double> sums;
  double acc = 0.0;
  for (std::size_t n = 0; n < spec.center_norms.size(); ++n) {
    const double xn = spec.center_norms[n];
    const double rn = spec.radii[n];
    const double term = omega * spec.rho(xn - rn) *
                        std::pow(xn, 2.0 - spec.dim) *
                        std::pow(rn, double(spec.dim)) /
                        (1.0 + (xn + rn) * (xn + rn));
    acc += term;
    sums.push_back(acc);
  }
  return sums;
}

}  // namespace perpetua
