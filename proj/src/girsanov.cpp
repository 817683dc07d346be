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

#include "perpetua/girsanov.hpp"

#include <algorithm>
#include <cmath>

#include "perpetua/parallel.hpp"
#include "perpetua/rng.hpp"
#include "perpetua/stats.hpp"

namespace perpetua {

namespace {

// The target law has drift b + a c; the density is accumulated against it.
CoefficientField with_target_drift(const CoefficientField& field) {
  CoefficientField q = field;
  q.drift = [field](const Vector& x) {
    Vector ac;
    if (field.iso_diffusion) {
      ac = field.iso_diffusion(x) * field.girsanov(x);
    } else {
      ac = field.diffusion(x) * field.girsanov(x);
    }
    if (field.has_drift()) return (field.drift(x) + ac).eval();
    return ac;
  };
  return q;
}

constexpr double kLogClamp = 700.0;

// Incremental pieces of log Z along a step: the stochastic integral uses
// the left endpoint (Ito), the quadratic part a trapezoid.
struct DensityAccumulator {
  const CoefficientField* field;
  double log_z = 0.0;
  double stoch = 0.0;
  double quad = 0.0;
  double energy_prev = std::numeric_limits<double>::quiet_NaN();
  bool frozen = false;
  bool overflowed = false;

  void update(const Vector& x, double h, const Vector& noise) {
    if (frozen) return;
    if (std::isnan(energy_prev)) energy_prev = field->girsanov_energy(x);
    const Vector c = field->girsanov(x);
    stoch += c.dot(noise);
    // x + noise approximates the right endpoint of the quadratic part
    const double energy_next = field->girsanov_energy(x + noise);
    quad += 0.5 * h * (energy_prev + energy_next);
    energy_prev = energy_next;
    log_z = -stoch - 0.5 * quad;
    if (std::abs(log_z) > kLogClamp) {
      log_z = std::clamp(log_z, -kLogClamp, kLogClamp);
      overflowed = true;
    }
  }

  double z() const { return std::exp(log_z); }
};

}  // namespace

DensityPath simulate_density(const CoefficientField& field, const Vector& x0,
                             const SimConfig& cfg,
                             std::optional<double> stop_level) {
  if (!field.has_girsanov())
    throw std::invalid_argument("density simulation needs a Girsanov direction");
  const CoefficientField q_field = with_target_drift(field);

  DensityPath path;
  DensityAccumulator acc{&field};
  path.times.push_back(0.0);
  path.z_values.push_back(1.0);
  path.stochastic_integral.push_back(0.0);
  path.quadratic_part.push_back(0.0);

  StepHooks hooks;
  hooks.on_step = [&](double, const Vector& x, double h, const Vector& x_next,
                      const Vector& noise) {
    acc.update(x, h, noise);
    if (!acc.frozen && stop_level && x_next.norm() >= *stop_level) {
      acc.frozen = true;
      path.stopped_at_level = *stop_level;
    }
    path.times.push_back(path.times.back() + h);
    path.z_values.push_back(acc.z());
    path.stochastic_integral.push_back(acc.stoch);
    path.quadratic_part.push_back(acc.quad);
  };

  const PathOutcome outcome = run_path(q_field, x0, cfg, hooks);
  path.status = outcome.status;
  if (outcome.status != PathStatus::Alive && !stop_level)
    path.stopped_at_level = outcome.end_state.norm();
  path.a_theta = acc.quad;
  path.overflowed = acc.overflowed;
  return path;
}

UiReport ui_martingale_check(const CoefficientField& field, const Vector& x0,
                             std::size_t n_paths,
                             const std::vector<double>& horizon_ladder,
                             const SimConfig& cfg) {
  if (n_paths < 1000)
    throw std::invalid_argument("UI check needs at least 1000 paths");
  if (horizon_ladder.empty())
    throw std::invalid_argument("UI check needs a horizon ladder");
  std::vector<double> ladder = horizon_ladder;
  std::sort(ladder.begin(), ladder.end());

  const CoefficientField q_field = with_target_drift(field);
  std::vector<std::vector<double>> z_at(n_paths,
                                        std::vector<double>(ladder.size()));
  SimConfig run_cfg = cfg;
  run_cfg.horizon = ladder.back();

  parallel_for(n_paths, [&](std::size_t p) {
    DensityAccumulator acc{&field};
    std::size_t k = 0;
    StepHooks hooks;
    hooks.on_step = [&](double, const Vector& x, double h, const Vector&,
                        const Vector& noise) { acc.update(x, h, noise); };
    hooks.on_checkpoint = [&](double, const Vector&) {
      if (k < ladder.size()) z_at[p][k++] = acc.z();
    };
    const PathOutcome outcome =
        run_path(q_field, x0, run_cfg.with_path(p), hooks, ladder);
    // Z is frozen past an explosion; fill the remaining rungs with it.
    (void)outcome;
    for (; k < ladder.size(); ++k) z_at[p][k] = acc.z();
  });

  UiReport report;
  report.ladder.resize(ladder.size());
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    std::vector<double> column(n_paths);
    double sum = 0.0;
    for (std::size_t p = 0; p < n_paths; ++p) {
      column[p] = z_at[p][k];
      sum += column[p];
    }
    const double mean = sum / double(n_paths);
    double var = 0.0;
    for (double z : column) var += (z - mean) * (z - mean);
    var /= double(n_paths - 1);
    std::sort(column.begin(), column.end());
    const std::size_t top = std::max<std::size_t>(1, n_paths / 100);
    double top_sum = 0.0;
    for (std::size_t i = n_paths - top; i < n_paths; ++i) top_sum += column[i];
    report.ladder[k] = {ladder[k], mean, std::sqrt(var / double(n_paths)),
                        sum > 0.0 ? top_sum / sum : 0.0};
  }

  bool concentrates = false;
  double tail_min = 1.0, tail_max = 0.0;
  bool heavy = false;
  bool means_ok = true;
  bool decaying = true;
  for (std::size_t k = 0; k < report.ladder.size(); ++k) {
    const auto& pt = report.ladder[k];
    if (pt.tail_share >= 0.9) concentrates = true;
    tail_min = std::min(tail_min, pt.tail_share);
    tail_max = std::max(tail_max, pt.tail_share);
    if (pt.mean > 0.0 && pt.std_error / pt.mean > 0.2) heavy = true;
    if (std::abs(pt.mean - 1.0) > 3.0 * pt.std_error) means_ok = false;
    if (k > 0 && pt.mean > report.ladder[k - 1].mean + 1e-12) decaying = false;
  }
  const auto& last = report.ladder.back();
  const bool decays_below = decaying && last.mean < 1.0 - 3.0 * last.std_error;

  if (concentrates || decays_below) {
    report.uniformly_integrable = TriState::No;
    report.diagnostic = concentrates
                            ? "mean carried by a vanishing fraction of paths"
                            : "means decay below 1 - 3 SE";
  } else if (heavy) {
    report.uniformly_integrable = TriState::Undetermined;
    report.diagnostic =
        "relative standard error above 20%; consider importance sampling";
  } else if (means_ok && tail_max <= 0.5 && tail_max - tail_min <= 0.3) {
    report.uniformly_integrable = TriState::Yes;
  } else {
    report.uniformly_integrable = TriState::Undetermined;
    report.diagnostic = "means or tail contributions not stable enough";
  }
  return report;
}

Verdict dichotomy_verdict(const CoefficientField& field, const Vector& x0,
                          std::size_t n_paths, const DichotomyConfig& cfg) {
  if (!field.has_girsanov())
    throw std::invalid_argument("dichotomy needs a Girsanov direction");
  const RegularityReport probes =
      probe_regularity(field, cfg.probe_radii, 32);
  if (!probes.passed()) {
    std::string expand = "coefficient probes failed";
    for (const auto& d : probes.diagnostics) expand += "; " + d;
    throw std::invalid_argument(expand);
  }

  ScalarField f = field.clock;
  if (!f.valid()) {
    f.dim = field.dim;
    f.eval = [field](const Vector& x) { return field.girsanov_energy(x); };
  }

  Verdict verdict;

  // Route 1: the perpetual integral under the base law.
  std::vector<ClockStatus> clock_status(n_paths);
  parallel_for(n_paths, [&](std::size_t p) {
    ClockAccumulator acc(f, cfg.sim.horizon);
    StepHooks hooks;
    hooks.on_step = [&acc](double t, const Vector& x, double h,
                           const Vector& x_next, const Vector&) {
      acc.update(t, x, h, x_next);
    };
    const PathOutcome outcome = run_path(field, x0, cfg.sim.with_path(p), hooks);
    clock_status[p] = acc.classify(outcome.status);
  });
  std::size_t finite = 0, divergent = 0, censored = 0;
  for (ClockStatus s : clock_status) {
    if (s == ClockStatus::Finite) ++finite;
    if (s == ClockStatus::CensoredDivergent) ++divergent;
    if (s == ClockStatus::CensoredTruncated) ++censored;
  }
  const std::size_t classified = finite + divergent;
  const double p1 = classified ? double(finite) / double(classified) : 0.0;
  const WilsonInterval ci1 = wilson_ci(finite, std::max<std::size_t>(classified, 1));
  verdict.evidence.push_back({"route-1 perpetual-integral finite fraction", p1,
                              cfg.near_one,
                              std::to_string(finite) + " finite, " +
                                  std::to_string(divergent) + " divergent, " +
                                  std::to_string(censored) + " censored"});

  // Route 2: explosion of the auxiliary problem.
  const CoefficientField aux = time_change_coeffs(field, f);
  SimConfig aux_cfg = cfg.sim;
  aux_cfg.seed = derive_seed(cfg.sim.seed, /*tag=*/2);
  const ExplosionEstimate aux_est =
      estimate_explosion_prob(aux, x0, n_paths, aux_cfg);
  verdict.evidence.push_back(
      {"route-2 auxiliary explosion fraction", aux_est.p_hat, cfg.near_one,
       std::to_string(aux_est.n_exploded) + "/" +
           std::to_string(aux_est.n_paths) + " exploded, " +
           std::to_string(aux_est.n_truncated) + " truncated"});

  // Route 3: uniform integrability of the density.
  SimConfig ui_cfg = cfg.sim;
  ui_cfg.seed = derive_seed(cfg.sim.seed, /*tag=*/3);
  const double T = cfg.sim.horizon;
  const UiReport ui = ui_martingale_check(
      field, x0, n_paths, {T / 8.0, T / 4.0, T / 2.0, T}, ui_cfg);
  verdict.evidence.push_back(
      {"route-3 UI martingale", ui.uniformly_integrable == TriState::Yes
                                    ? 1.0
                                    : (ui.uniformly_integrable == TriState::No
                                           ? 0.0
                                           : 0.5),
       1.0, to_string(ui.uniformly_integrable) +
                (ui.diagnostic.empty() ? "" : "; " + ui.diagnostic)});

  const double w1 = 0.5 * (ci1.hi - ci1.lo);
  const double w2 = 0.5 * (aux_est.ci_hi - aux_est.ci_lo);
  const double gap = std::abs(p1 - aux_est.p_hat);
  verdict.evidence.push_back(
      {"route agreement |p1 - p2|", gap, w1 + w2,
       gap <= w1 + w2 ? "within combined CI" : "route-disagreement"});
  if (gap > w1 + w2) {
    verdict.outcome = Outcome::Inconclusive;
    return verdict;
  }

  const bool ui_yes = ui.uniformly_integrable == TriState::Yes;
  if (p1 >= cfg.near_one && aux_est.p_hat >= cfg.near_one && ui_yes) {
    verdict.outcome = Outcome::AbsolutelyContinuous;
  } else if (p1 <= cfg.near_zero && aux_est.p_hat <= cfg.near_zero) {
    verdict.outcome = Outcome::Singular;
  } else {
    verdict.outcome = Outcome::Inconclusive;
  }
  return verdict;
}

}  // namespace perpetua
