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
#include <vector>

#include "perpetua/fields.hpp"

namespace perpetua {

// Slow-growth counterexample: a clock density g that explodes the
// time-changed Brownian motion although its Newtonian-kernel integral
// diverges.  Balls B_{R_n}(x_n) sit on the first axis with R_n = 3^-n |x_n|;
// inside ball n the density drops to (1 + |x|^2) / rho(|x_n| - R_n), outside
// all balls it is 2 + |x|^4.
struct CounterexampleSpec {
  ScalarField rho;  // increasing profile on R_+, rho(0) = 1
  int dim = 3;
  std::vector<double> center_norms;  // |x_n|, centers x_n = |x_n| e_1
  std::vector<double> radii;         // R_n
};

struct Counterexample {
  CounterexampleSpec spec;
  ScalarField g;
};

// Center selection walks the grid t = 4|x_n| (1 + k/8), k = 1, 2, ... and
// takes the smallest admissible point; throws "rho grows too slowly" when
// the grid search exceeds `search_budget` steps.
Counterexample build_counterexample_g(const ScalarField& rho, int dim,
                                      int n_balls,
                                      long search_budget = 1 << 26);

// Partial sums of the ball-by-ball lower bound on the Newtonian-kernel
// integral of 1/g: omega_d * rho(|x_n| - R_n) |x_n|^{2-d} R_n^d
//                    / (1 + (|x_n| + R_n)^2).
std::vector<double> divergence_partial_sums(const CounterexampleSpec& spec);

double unit_ball_volume(int dim);

}  // namespace perpetua
