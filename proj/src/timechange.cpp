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

#include "perpetua/timechange.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace perpetua {

std::string to_string(ClockStatus status) {
  switch (status) {
    case ClockStatus::Finite: return "finite";
    case ClockStatus::CensoredDivergent: return "censored-divergent";
    default: return "censored-truncated";
  }
}

ClockAccumulator::ClockAccumulator(const ScalarField& f, double horizon,
                                   double divergence_ratio)
    : f_(&f), horizon_(horizon), ratio_(divergence_ratio) {}

void ClockAccumulator::update(double t, const Vector& x, double h,
                              const Vector& x_next) {
  if (std::isnan(f_prev_)) {
    f_prev_ = (*f_)(x);
    if (!std::isfinite(f_prev_))
      throw std::runtime_error("clock density non-finite at " +
                               format_point(x));
  }
  const double f_next = (*f_)(x_next);
  if (!std::isfinite(f_next))
    throw std::runtime_error("clock density non-finite at " +
                             format_point(x_next));
  const double t_next = t + h;
  const double increment = 0.5 * h * (f_prev_ + f_next);
  const double half = 0.5 * horizon_;
  if (t < half && t_next >= half) {
    // linear split of the crossing increment at the half horizon
    value_half_ = value_ + increment * (half - t) / h;
  } else if (t_next < half) {
    value_half_ = value_ + increment;
  }
  value_ += increment;
  f_prev_ = f_next;
  t_prev_ = t_next;
}

ClockStatus ClockAccumulator::classify(PathStatus status) const {
  if (status == PathStatus::Exploded) return ClockStatus::Finite;
  if (status == PathStatus::Truncated) return ClockStatus::CensoredTruncated;
  const double first = value_half_;
  const double second = value_ - value_half_;
  if (first <= 0.0)
    return second > 0.0 ? ClockStatus::CensoredDivergent : ClockStatus::Finite;
  return second >= ratio_ * first ? ClockStatus::CensoredDivergent
                                  : ClockStatus::Finite;
}

Clock additive_functional(const PathSample& path, const ScalarField& f,
                          double divergence_ratio) {
  if (path.times.empty()) throw std::invalid_argument("empty path");
  Clock clock;
  clock.times = path.times;
  clock.values.resize(path.times.size());
  clock.values[0] = 0.0;
  ClockAccumulator acc(f, path.times.back(), divergence_ratio);
  for (std::size_t i = 1; i < path.times.size(); ++i) {
    acc.update(path.times[i - 1], path.states.col(i - 1),
               path.times[i] - path.times[i - 1], path.states.col(i));
    clock.values[i] = acc.value();
  }
  clock.total = acc.value();
  clock.status = acc.classify(path.status);
  return clock;
}

double ClockInverse::operator()(double t) const {
  const auto& values = clock_->values;
  const auto& times = clock_->times;
  if (t < 0.0) return 0.0;
  if (t >= clock_->total) return std::numeric_limits<double>::infinity();
  const auto it = std::upper_bound(values.begin(), values.end(), t);
  if (it == values.begin()) return times.front();
  if (it == values.end()) return times.back();
  const std::size_t hi = static_cast<std::size_t>(it - values.begin());
  const std::size_t lo = hi - 1;
  const double dv = values[hi] - values[lo];
  if (dv <= 0.0) return times[hi];
  return times[lo] + (t - values[lo]) / dv * (times[hi] - times[lo]);
}

ClockInverse invert_clock(const Clock& clock) {
  for (std::size_t i = 1; i < clock.values.size(); ++i) {
    if (clock.values[i] < clock.values[i - 1])
      throw std::invalid_argument("clock must be nondecreasing");
  }
  return ClockInverse(clock);
}

TimeChangeResult time_change_path(const PathSample& path,
                                  const ScalarField& f) {
  TimeChangeResult result;
  result.clock = additive_functional(path, f);
  result.total = result.clock.total;
  const ClockInverse inverse = invert_clock(result.clock);

  PathSample y;
  y.base_step = path.base_step;
  const double dt = path.base_step;
  std::vector<double> flat;
  double t = 0.0;
  while (t < result.total || y.times.empty()) {
    const double s = std::min(inverse(t), path.times.back());
    const Vector state = path.state_at(s);
    y.times.push_back(t);
    flat.insert(flat.end(), state.begin(), state.end());
    t += dt;
    if (t >= result.total) break;
  }
  y.states = Eigen::Map<const Matrix>(flat.data(), path.dim(),
                                      static_cast<Eigen::Index>(y.times.size()));
  switch (result.clock.status) {
    case ClockStatus::Finite:
      y.status = PathStatus::Exploded;
      y.theta_hat = result.total;
      break;
    case ClockStatus::CensoredDivergent:
      y.status = PathStatus::Alive;
      break;
    case ClockStatus::CensoredTruncated:
      y.status = PathStatus::Truncated;
      break;
  }
  // nested stopping radii seen in the changed time scale
  std::size_t level_idx = 0;
  const std::vector<double> levels = SimConfig::default_levels();
  for (std::size_t i = 0; i < y.times.size() && level_idx < levels.size();
       ++i) {
    const double r = y.states.col(i).norm();
    while (level_idx < levels.size() && r >= levels[level_idx]) {
      y.level_hits.push_back({levels[level_idx], y.times[i]});
      ++level_idx;
    }
  }

  PathSample image;
  image.times = result.clock.values;
  image.states = path.states;
  image.base_step = path.base_step;
  image.status = y.status;
  image.theta_hat = y.theta_hat;
  image.level_hits = y.level_hits;

  result.y_path = std::move(y);
  result.y_image = std::move(image);
  return result;
}

PathSample recover_original(const TimeChangeResult& result,
                            const ScalarField& f) {
  const PathSample& y = result.y_image;
  if (y.times.empty()) throw std::invalid_argument("empty changed path");

  Clock speed;  // S_t = int_0^t 1/f(Y_s) ds on the image grid
  speed.times = y.times;
  speed.values.resize(y.times.size());
  speed.values[0] = 0.0;
  double f_prev = f(Vector(y.states.col(0)));
  for (std::size_t i = 1; i < y.times.size(); ++i) {
    const double f_next = f(Vector(y.states.col(i)));
    if (!(f_prev > 0.0) || !(f_next > 0.0))
      throw std::domain_error("clock density not positive along the path");
    const double h = y.times[i] - y.times[i - 1];
    speed.values[i] = speed.values[i - 1] + h * 2.0 / (f_prev + f_next);
    f_prev = f_next;
  }
  speed.total = speed.values.back();
  speed.status = result.clock.status;
  const ClockInverse back(speed);

  PathSample u;
  u.times = result.clock.times;
  u.base_step = y.base_step;
  u.status = y.status;
  if (y.status == PathStatus::Exploded) u.theta_hat = speed.total;
  std::vector<double> flat;
  for (double t : u.times) {
    const double s = std::min(back(t), y.times.back());
    const Vector state =
        std::isfinite(s) ? y.state_at(s) : Vector(y.states.col(y.size() - 1));
    flat.insert(flat.end(), state.begin(), state.end());
  }
  u.states = Eigen::Map<const Matrix>(flat.data(), y.dim(),
                                      static_cast<Eigen::Index>(u.times.size()));
  return u;
}

PerpetualValue perpetual_integral(const PathSample& path,
                                  const ScalarField& f) {
  const Clock clock = additive_functional(path, f);
  return {clock.total, clock.status};
}

}  // namespace perpetua
