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

#include "perpetua/fields.hpp"
#include "perpetua/sim.hpp"

namespace perpetua {

// Classification of an additive-functional total on a finite simulation.
// Finite totals come from exploded paths and from alive paths whose clock
// has visibly settled; an alive path whose clock is still accumulating at
// the horizon is censored-divergent (the value is a lower bound, never an
// extrapolation); truncated paths are censored with a low bias.
enum class ClockStatus { Finite, CensoredDivergent, CensoredTruncated };

std::string to_string(ClockStatus status);

struct Clock {
  std::vector<double> times;   // original-time grid
  std::vector<double> values;  // T_i, nondecreasing with values[0] = 0
  double total = 0.0;          // last value (a lower bound when censored)
  ClockStatus status = ClockStatus::Finite;
};

// Streaming trapezoid accumulator for T_t = int_0^t f(X_s) ds, tracking the
// first/second half split of the horizon for the divergence heuristic.
class ClockAccumulator {
 public:
  ClockAccumulator(const ScalarField& f, double horizon,
                   double divergence_ratio = 0.5);

  void update(double t, const Vector& x, double h, const Vector& x_next);
  double value() const { return value_; }
  double value_at_half() const { return value_half_; }
  ClockStatus classify(PathStatus status) const;

 private:
  const ScalarField* f_;
  double horizon_;
  double ratio_;
  double value_ = 0.0;
  double value_half_ = 0.0;
  double f_prev_ = std::numeric_limits<double>::quiet_NaN();
  double t_prev_ = 0.0;
};

Clock additive_functional(const PathSample& path, const ScalarField& f,
                          double divergence_ratio = 0.5);

// Right-continuous inverse L(t) = inf(s : T_s > t) of the piecewise-linear
// clock interpolant; returns +inf for t >= total.
class ClockInverse {
 public:
  explicit ClockInverse(const Clock& clock) : clock_(&clock) {}
  double operator()(double t) const;

 private:
  const Clock* clock_;
};

ClockInverse invert_clock(const Clock& clock);

struct TimeChangeResult {
  Clock clock;
  PathSample y_path;   // uniform changed-time grid (for law comparisons)
  PathSample y_image;  // exact image grid: times = clock values
  double total = 0.0;  // == clock.total
};

// Builds Y_t = X_{L(t)} twice: interpolated onto a uniform grid with the
// original base step, and exactly on the image of the original grid (the
// image grid concentrates near the explosion time, which the uniform grid
// cannot resolve).  The changed path is Exploded exactly when the clock
// total is classified finite, with the total as its explosion time.
TimeChangeResult time_change_path(const PathSample& path,
                                  const ScalarField& f);

// Inverts the change: S_t = int_0^t 1/f(Y_s) ds along the image grid, A
// its right-continuous inverse, and U_t = Y_{A(t)} sampled back on the
// original grid.  The speed integral uses the harmonic pair rule
// dS = dT * 2/(f(Y_k) + f(Y_{k+1})), the discrete inverse of the clock's
// trapezoid, so the round trip is exact at grid resolution.
PathSample recover_original(const TimeChangeResult& result,
                            const ScalarField& f);

struct PerpetualValue {
  double value = 0.0;
  ClockStatus status = ClockStatus::Finite;
};

PerpetualValue perpetual_integral(const PathSample& path,
                                  const ScalarField& f);

}  // namespace perpetua
