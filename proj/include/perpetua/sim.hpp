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

#include <cstdint>
#include <functional>
#include <vector>

#include "perpetua/fields.hpp"

namespace perpetua {

enum class PathStatus { Alive, Exploded, Truncated };

std::string to_string(PathStatus status);

struct SimConfig {
  double step = 4e-3;              // base time step h
  double horizon = 50.0;           // T_max
  double explosion_radius = 1e3;   // R_exp
  double truncation_radius = 1e4;  // R_trunc
  std::vector<double> level_radii; // nested stopping radii (default 2^1..2^10)
  double increment_cap = 0.5;      // hit-increment ceiling for "summable"
  int min_increments = 3;
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  std::size_t max_steps = 50'000'000;

  static std::vector<double> default_levels();
  SimConfig with_path(std::uint64_t index) const;
  void validate() const;
};

struct LevelHit {
  double level = 0.0;
  double time = 0.0;
};

struct PathOutcome {
  PathStatus status = PathStatus::Alive;
  double end_time = 0.0;
  double theta_hat = std::numeric_limits<double>::quiet_NaN();
  Vector end_state;
  std::vector<LevelHit> level_hits;  // nondecreasing in level and time
  std::size_t steps = 0;
};

struct StepHooks {
  // After each accepted step: pre-state x at time t, effective step h,
  // post-state, and the martingale part of the increment (sigma sqrt(h) xi).
  std::function<void(double t, const Vector& x, double h, const Vector& x_next,
                     const Vector& noise)>
      on_step;
  std::function<void(double t, const Vector& x)> on_checkpoint;
};

// Euler-Maruyama with a scale-aware step and the nested stopping radii.
// A path is Exploded once it leaves the explosion radius with its recent
// level-hit increments all under the cap (a summability proxy); a runaway
// path whose increments stay large is Truncated at the truncation radius.
// The grid lands exactly on each checkpoint and on the horizon.
PathOutcome run_path(const CoefficientField& field, const Vector& x0,
                     const SimConfig& cfg, const StepHooks& hooks = {},
                     const std::vector<double>& checkpoints = {});

struct PathSample {
  std::vector<double> times;  // times[0] = 0
  Matrix states;              // column i = state at times[i]
  PathStatus status = PathStatus::Alive;
  double theta_hat = std::numeric_limits<double>::quiet_NaN();
  std::vector<LevelHit> level_hits;
  double base_step = 0.0;

  int dim() const { return static_cast<int>(states.rows()); }
  std::size_t size() const { return times.size(); }
  Vector state_at(double t) const;  // linear interpolation
  double max_step_displacement() const;
};

PathSample simulate_path(const CoefficientField& field, const Vector& x0,
                         const SimConfig& cfg);

struct ExplosionEstimate {
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t n_paths = 0;
  std::size_t n_exploded = 0;
  std::size_t n_truncated = 0;
  std::size_t n_alive = 0;
  bool inconclusive = false;  // raised when > 20% of paths were truncated
};

ExplosionEstimate estimate_explosion_prob(const CoefficientField& field,
                                          const Vector& x0,
                                          std::size_t n_paths,
                                          const SimConfig& cfg);

struct DefectPoint {
  double t = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
};

// Mean of f(X_{t ^ tau}) - f(x0) - int_0^{t ^ tau} (Kf)(X_s) ds across
// paths, stopped at the first exit from |x| >= stop_level.  Zero within a
// few standard errors is the defining property of the dynamics.
std::vector<DefectPoint> martingale_defect(
    const CoefficientField& field, const Vector& x0, const TestFunction& fn,
    std::size_t n_paths, const std::vector<double>& checkpoints,
    const SimConfig& cfg, double stop_level = 16.0);

}  // namespace perpetua
