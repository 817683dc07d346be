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

#include "perpetua/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "perpetua/parallel.hpp"
#include "perpetua/rng.hpp"
#include "perpetua/stats.hpp"

namespace perpetua {

std::string to_string(PathStatus status) {
  switch (status) {
    case PathStatus::Alive: return "alive";
    case PathStatus::Exploded: return "exploded";
    default: return "truncated";
  }
}

std::vector<double> SimConfig::default_levels() {
  std::vector<double> levels;
  for (int k = 1; k <= 10; ++k) levels.push_back(double(1 << k));
  return levels;
}

SimConfig SimConfig::with_path(std::uint64_t index) const {
  SimConfig cfg = *this;
  cfg.path_index = index;
  return cfg;
}

void SimConfig::validate() const {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(truncation_radius > explosion_radius))
    throw std::invalid_argument("truncation radius must exceed explosion radius");
  double max_level = 0.0;
  for (std::size_t i = 0; i < level_radii.size(); ++i) {
    if (i > 0 && level_radii[i] <= level_radii[i - 1])
      throw std::invalid_argument("level radii must be strictly increasing");
    max_level = std::max(max_level, level_radii[i]);
  }
  if (explosion_radius < 0.5 * max_level)
    throw std::invalid_argument(
        "explosion radius must be at least half the largest level");
}

namespace {

bool increments_summable(const std::vector<LevelHit>& hits, double cap,
                         int min_increments) {
  const int n = static_cast<int>(hits.size());
  if (n - 1 < min_increments) return false;
  const int take = std::min(5, n - 1);
  for (int i = n - take; i < n; ++i) {
    if (hits[i].time - hits[i - 1].time > cap) return false;
  }
  return true;
}

}  // namespace

PathOutcome run_path(const CoefficientField& field, const Vector& x0,
                     const SimConfig& cfg, const StepHooks& hooks,
                     const std::vector<double>& checkpoints) {
  cfg.validate();
  if (x0.size() != field.dim)
    throw std::invalid_argument("x0 dimension does not match the field");
  std::vector<double> levels =
      cfg.level_radii.empty() ? SimConfig::default_levels() : cfg.level_radii;

  PathOutcome out;
  Vector x = x0;
  Vector x_next(field.dim);
  Vector noise(field.dim);
  Vector xi(field.dim);
  double t = 0.0;
  double radius = x.norm();

  std::size_t level_idx = 0;
  while (level_idx < levels.size() && radius >= levels[level_idx]) {
    out.level_hits.push_back({levels[level_idx], 0.0});
    ++level_idx;
  }

  std::size_t cp_idx = 0;
  while (cp_idx < checkpoints.size() && checkpoints[cp_idx] <= 0.0) ++cp_idx;

  GaussianStream gauss(cfg.seed, cfg.path_index);
  const bool iso = field.isotropic();
  Matrix sigma;

  for (std::size_t step_index = 0;; ++step_index) {
    if (step_index >= cfg.max_steps)
      throw std::runtime_error("path exceeded the step budget at t = " +
                               std::to_string(t));

    double drift_norm = 0.0;
    Vector b;
    if (field.has_drift()) {
      b = field.drift(x);
      drift_norm = b.norm();
    }
    double op_norm;
    double iso_value = 0.0;
    if (iso) {
      iso_value = field.iso_diffusion(x);
      if (iso_value < -1e-8)
        throw std::runtime_error("negative isotropic diffusion at " +
                                 format_point(x));
      iso_value = std::max(iso_value, 0.0);
      op_norm = iso_value;
    } else {
      const Matrix a = symmetrized(field.diffusion(x));
      Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
      Vector lambda = eig.eigenvalues();
      op_norm = lambda.maxCoeff();
      for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda[i] < -1e-8)
          throw std::runtime_error("diffusion matrix not PSD at " +
                                   format_point(x) + ": eigenvalue " +
                                   std::to_string(lambda[i]));
        lambda[i] = lambda[i] < 1e-12 ? 0.0 : std::sqrt(lambda[i]);
      }
      sigma = eig.eigenvectors() * lambda.asDiagonal() *
              eig.eigenvectors().transpose();
    }

    // Scale-aware shrink: displacement stays a small multiple of the
    // current scale 1 + |x|, so level ladders cost O(1/h) steps each.
    const double scale = 1.0 + radius;
    double h = cfg.step /
               (1.0 + drift_norm / scale + op_norm / (scale * scale));

    double next_event = cfg.horizon;
    if (cp_idx < checkpoints.size())
      next_event = std::min(next_event, checkpoints[cp_idx]);
    bool hit_event = false;
    if (t + h >= next_event - 1e-12 * std::max(1.0, next_event)) {
      h = next_event - t;
      hit_event = true;
    }
    if (!(h > 0.0)) throw std::runtime_error("step size collapsed");

    gauss.begin_step(step_index);
    for (int i = 0; i < field.dim; ++i) xi[i] = gauss.next();
    const double sqrt_h = std::sqrt(h);
    if (iso) {
      noise = std::sqrt(iso_value) * sqrt_h * xi;
    } else {
      noise = sigma * (sqrt_h * xi);
    }
    if (field.has_drift()) {
      x_next = x + h * b + noise;
    } else {
      x_next = x + noise;
    }
    if (!x_next.allFinite())
      throw std::runtime_error("non-finite state after step from " +
                               format_point(x));

    const double t_next = t + h;
    if (hooks.on_step) hooks.on_step(t, x, h, x_next, noise);
    ++out.steps;

    const double radius_next = x_next.norm();
    while (level_idx < levels.size() && radius_next >= levels[level_idx]) {
      out.level_hits.push_back({levels[level_idx], t_next});
      ++level_idx;
    }

    x.swap(x_next);
    t = t_next;
    radius = radius_next;

    if (radius >= cfg.explosion_radius) {
      if (increments_summable(out.level_hits, cfg.increment_cap,
                              cfg.min_increments)) {
        out.status = PathStatus::Exploded;
        out.theta_hat = t;
        break;
      }
      if (radius >= cfg.truncation_radius) {
        out.status = PathStatus::Truncated;
        break;
      }
    }
    if (hit_event && cp_idx < checkpoints.size() &&
        t >= checkpoints[cp_idx] - 1e-9 * std::max(1.0, checkpoints[cp_idx])) {
      if (hooks.on_checkpoint) hooks.on_checkpoint(t, x);
      ++cp_idx;
    }
    if (t >= cfg.horizon - 1e-12 * std::max(1.0, cfg.horizon)) {
      out.status = PathStatus::Alive;
      break;
    }
  }
  out.end_time = t;
  out.end_state = x;
  return out;
}

Vector PathSample::state_at(double t) const {
  if (times.empty()) throw std::runtime_error("empty path");
  if (t <= times.front()) return states.col(0);
  if (t >= times.back()) return states.col(states.cols() - 1);
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double span = times[hi] - times[lo];
  if (span <= 0.0) return states.col(hi);
  const double w = (t - times[lo]) / span;
  return (1.0 - w) * states.col(lo) + w * states.col(hi);
}

double PathSample::max_step_displacement() const {
  double worst = 0.0;
  for (Eigen::Index i = 1; i < states.cols(); ++i)
    worst = std::max(worst, (states.col(i) - states.col(i - 1)).norm());
  return worst;
}

PathSample simulate_path(const CoefficientField& field, const Vector& x0,
                         const SimConfig& cfg) {
  std::vector<double> times{0.0};
  std::vector<double> flat(x0.begin(), x0.end());
  StepHooks hooks;
  hooks.on_step = [&times, &flat](double, const Vector&, double h,
                                  const Vector& x_next, const Vector&) {
    times.push_back(times.back() + h);
    flat.insert(flat.end(), x_next.begin(), x_next.end());
  };
  const PathOutcome outcome = run_path(field, x0, cfg, hooks);

  PathSample sample;
  sample.times = std::move(times);
  sample.states = Eigen::Map<const Matrix>(
      flat.data(), field.dim, static_cast<Eigen::Index>(sample.times.size()));
  sample.status = outcome.status;
  sample.theta_hat = outcome.theta_hat;
  sample.level_hits = outcome.level_hits;
  sample.base_step = cfg.step;
  return sample;
}

ExplosionEstimate estimate_explosion_prob(const CoefficientField& field,
                                          const Vector& x0,
                                          std::size_t n_paths,
                                          const SimConfig& cfg) {
  if (n_paths < 100)
    throw std::invalid_argument("explosion estimate needs at least 100 paths");
  std::vector<PathStatus> statuses(n_paths);
  parallel_for(n_paths, [&](std::size_t i) {
    statuses[i] = run_path(field, x0, cfg.with_path(i)).status;
  });
  ExplosionEstimate est;
  est.n_paths = n_paths;
  for (PathStatus s : statuses) {
    if (s == PathStatus::Exploded) ++est.n_exploded;
    if (s == PathStatus::Truncated) ++est.n_truncated;
    if (s == PathStatus::Alive) ++est.n_alive;
  }
  est.p_hat = double(est.n_exploded) / double(n_paths);
  const WilsonInterval ci = wilson_ci(est.n_exploded, n_paths);
  est.ci_lo = ci.lo;
  est.ci_hi = ci.hi;
  est.inconclusive = est.n_truncated > n_paths / 5;
  return est;
}

std::vector<DefectPoint> martingale_defect(
    const CoefficientField& field, const Vector& x0, const TestFunction& fn,
    std::size_t n_paths, const std::vector<double>& checkpoints,
    const SimConfig& cfg, double stop_level) {
  const double f0 = fn.value(x0);
  std::vector<std::vector<double>> defects(
      n_paths, std::vector<double>(checkpoints.size(), 0.0));

  parallel_for(n_paths, [&](std::size_t p) {
    double compensator = 0.0;
    double kf_prev = generator_apply(field, fn, x0);
    bool stopped = false;
    double frozen = 0.0;
    std::size_t cp = 0;
    StepHooks hooks;
    hooks.on_step = [&](double, const Vector&, double h, const Vector& x_next,
                        const Vector&) {
      if (stopped) return;
      const double kf_next = generator_apply(field, fn, x_next);
      compensator += 0.5 * h * (kf_prev + kf_next);
      kf_prev = kf_next;
      frozen = fn.value(x_next) - f0 - compensator;
      if (x_next.norm() >= stop_level) stopped = true;
    };
    hooks.on_checkpoint = [&](double, const Vector&) {
      if (cp < checkpoints.size()) defects[p][cp++] = frozen;
    };
    run_path(field, x0, cfg.with_path(p), hooks, checkpoints);
    for (; cp < checkpoints.size(); ++cp) defects[p][cp] = frozen;
  });

  std::vector<DefectPoint> result(checkpoints.size());
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    double mean = 0.0;
    for (std::size_t p = 0; p < n_paths; ++p) mean += defects[p][k];
    mean /= double(n_paths);
    double var = 0.0;
    for (std::size_t p = 0; p < n_paths; ++p) {
      const double d = defects[p][k] - mean;
      var += d * d;
    }
    var /= double(n_paths > 1 ? n_paths - 1 : 1);
    result[k] = {checkpoints[k], mean, std::sqrt(var / double(n_paths))};
  }
  return result;
}

}  // namespace perpetua
