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

#include "perpetua/girsanov.hpp"

namespace perpetua {

// Discounted price S^i = exp(X^i - x0^i - [X^i, X^i]/2) built from the
// driftless problem MP(a, 0, x0); a must be strictly positive definite on
// the probed shells.
struct MarketSpec {
  CoefficientField base;  // diffusion only; any drift is rejected
  Vector x0;
  int asset = 0;
};

struct AssetPath {
  std::vector<double> times;
  std::vector<double> s_values;  // S^i along the grid, S_0 = 1
  PathStatus status = PathStatus::Alive;
};

AssetPath simulate_asset(const MarketSpec& spec, const SimConfig& cfg);

struct LadderStat {
  double t = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  double median = 0.0;
};

// Per-checkpoint mean/median of S^i over n paths.
std::vector<LadderStat> asset_ladder(const MarketSpec& spec,
                                     std::size_t n_paths,
                                     const std::vector<double>& checkpoints,
                                     const SimConfig& cfg);

// Decides the martingale-measure property through explosion of the
// auxiliary problem (a/a_ii, a e_i/a_ii) and cross-checks it against the
// uniform-integrability probe of the density with -c = e_i.  The base
// problem must look conservative (explosion fraction at most 2%) before
// the question even makes sense.
Verdict martingale_measure_check(const MarketSpec& spec, std::size_t n_paths,
                                 const SimConfig& cfg);

enum class OneDimMartingale { Martingale, StrictLocal, Undetermined };

std::string to_string(OneDimMartingale cls);

struct OneDimMartReport {
  OneDimMartingale verdict = OneDimMartingale::Undetermined;
  TriState positive_tail_diverges = TriState::Undetermined;
  TriState negative_tail_diverges = TriState::Undetermined;
  double positive_tail_value = 0.0;
  double negative_tail_value = 0.0;
};

// One-dimensional criterion: S stays a (plain) martingale on the infinite
// horizon iff int_0^inf dx / a(x) diverges.  Classification follows the
// positive tail; the negative tail is reported alongside.
OneDimMartReport one_dim_mart_criterion(const ScalarField& a,
                                        const QuadratureConfig& quad);

}  // namespace perpetua
