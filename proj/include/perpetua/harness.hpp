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
#include "perpetua/stats.hpp"
#include "perpetua/timechange.hpp"

namespace perpetua {

// Distributional check of the time-change identity: the law of the clock
// total int_0^theta f(X) ds under the base problem against the law of the
// explosion time of the changed problem (a/f, b/f), compared with the
// censor-aware two-sample distance.
struct TimechangeLawReport {
  KsResult ks;
  double critical_value = 0.0;  // 1% two-sample threshold
  EmpiricalLaw clock_law;
  EmpiricalLaw direct_law;
  double clock_mean = 0.0;
  double direct_mean = 0.0;
  bool low_power = false;  // more than 20% censoring on either side
};

TimechangeLawReport verify_timechange_law(const CoefficientField& field,
                                          const ScalarField& f,
                                          const Vector& x0,
                                          std::size_t n_paths,
                                          const SimConfig& cfg_base,
                                          const SimConfig& cfg_direct);

// Builds the empirical law of the clock totals under `field` itself.
EmpiricalLaw sample_perpetual_law(const CoefficientField& field,
                                  const ScalarField& f, const Vector& x0,
                                  std::size_t n_paths, const SimConfig& cfg);

// Builds the empirical law of the explosion time of `field`.
EmpiricalLaw sample_explosion_law(const CoefficientField& field,
                                  const Vector& x0, std::size_t n_paths,
                                  const SimConfig& cfg);

struct MultiStartRow {
  Vector start;
  Verdict verdict;
};

struct MultiStartReport {
  std::vector<MultiStartRow> rows;
  bool all_agree = true;
  bool ellipticity_probe_passed = true;
};

// Runs the dichotomy from several starting points; under locally Hoelder,
// strictly elliptic coefficients the verdict is a zero-one property of the
// field and must not depend on the start.
MultiStartReport multi_start_experiment(const CoefficientField& field,
                                        const std::vector<Vector>& starts,
                                        std::size_t n_paths,
                                        const DichotomyConfig& cfg);

}  // namespace perpetua
