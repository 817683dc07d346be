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

#include <functional>
#include <string>
#include <vector>

namespace perpetua {

enum class TriState { Yes, No, Undetermined };

std::string to_string(TriState state);

struct QuadratureConfig {
  double abs_tol = 1e-6;
  double rel_tol = 1e-6;
  double doubling_start = 1.0;
  int doubling_max = 60;        // number of dyadic tail intervals
  // Decay ratios of z^{-p} tails are 2^{1-p}, so anything below 1 means
  // convergence; 0.75 keeps the p = 3/2 family (ratio ~ 0.707) decidable
  // while still refusing near-critical tails.
  double decay_ratio_threshold = 0.75;
  int consecutive_doublings = 4;
  int nodes_per_octave = 64;
  int angular_nodes = 26;

  void validate() const;
};

// Convergence verdict for an improper integral from the dyadic tail
// contributions c_k over [z0 2^k, z0 2^{k+1}].  Yes needs the final
// `consecutive_doublings` ratios at or below the decay threshold plus a
// geometric tail bound below abs_tol; No needs the final contributions
// non-decreasing.  Anything else stays Undetermined.
struct TailReport {
  TriState verdict = TriState::Undetermined;
  double value = 0.0;  // accumulated partial integral
  std::vector<double> contributions;
  std::string diagnostic;
};

TailReport classify_contributions(const std::vector<double>& contributions,
                                  double head_value,
                                  const QuadratureConfig& cfg);

// Integrates phi over [z0, z0 2^doubling_max] on dyadic intervals
// (log-spaced composite Simpson inside each) and classifies the tail.
TailReport classify_improper_integral(
    const std::function<double(double)>& phi, double z0,
    const QuadratureConfig& cfg);

// Classic recursive adaptive Simpson on a finite interval.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 40);

// Nodes and weights integrating g over the unit sphere S^{d-1} with weights
// summing to the sphere area.  d = 3 uses the 26-point Lebedev design
// (exact through degree 7); other dimensions use a product Gauss rule.
struct SphereRule {
  std::vector<std::vector<double>> nodes;
  std::vector<double> weights;
};

SphereRule sphere_rule(int dim, int nodes_hint);

double sphere_area(int dim);

}  // namespace perpetua
