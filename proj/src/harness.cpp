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

#include "perpetua/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "perpetua/parallel.hpp"
#include "perpetua/rng.hpp"

namespace perpetua {

EmpiricalLaw sample_perpetual_law(const CoefficientField& field,
                                  const ScalarField& f, const Vector& x0,
                                  std::size_t n_paths, const SimConfig& cfg) {
  std::vector<double> totals(n_paths);
  std::vector<ClockStatus> statuses(n_paths);
  parallel_for(n_paths, [&](std::size_t p) {
    ClockAccumulator acc(f, cfg.horizon);
    StepHooks hooks;
    hooks.on_step = [&acc](double t, const Vector& x, double h,
                           const Vector& x_next, const Vector&) {
      acc.update(t, x, h, x_next);
    };
    const PathOutcome outcome = run_path(field, x0, cfg.with_path(p), hooks);
    totals[p] = acc.value();
    statuses[p] = acc.classify(outcome.status);
  });

  EmpiricalLaw law;
  double censor = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < n_paths; ++p) {
    switch (statuses[p]) {
      case ClockStatus::Finite:
        law.samples.push_back(totals[p]);
        break;
      case ClockStatus::CensoredDivergent:
        ++law.n_divergent;
        censor = std::min(censor, totals[p]);
        break;
      case ClockStatus::CensoredTruncated:
        ++law.n_censored_low;
        censor = std::min(censor, totals[p]);
        break;
    }
  }
  if (std::isfinite(censor)) law.censored_at = censor;
  return law;
}

EmpiricalLaw sample_explosion_law(const CoefficientField& field,
                                  const Vector& x0, std::size_t n_paths,
                                  const SimConfig& cfg) {
  std::vector<double> thetas(n_paths);
  std::vector<PathStatus> statuses(n_paths);
  parallel_for(n_paths, [&](std::size_t p) {
    const PathOutcome outcome = run_path(field, x0, cfg.with_path(p));
    statuses[p] = outcome.status;
    thetas[p] = outcome.status == PathStatus::Exploded ? outcome.theta_hat
                                                       : outcome.end_time;
  });

  EmpiricalLaw law;
  double censor = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < n_paths; ++p) {
    switch (statuses[p]) {
      case PathStatus::Exploded:
        law.samples.push_back(thetas[p]);
        break;
      case PathStatus::Alive:
        ++law.n_divergent;  // theta exceeds the horizon
        censor = std::min(censor, thetas[p]);
        break;
      case PathStatus::Truncated:
        ++law.n_censored_low;
        censor = std::min(censor, thetas[p]);
        break;
    }
  }
  if (std::isfinite(censor)) law.censored_at = censor;
  return law;
}

TimechangeLawReport verify_timechange_law(const CoefficientField& field,
                                          const ScalarField& f,
                                          const Vector& x0,
                                          std::size_t n_paths,
                                          const SimConfig& cfg_base,
                                          const SimConfig& cfg_direct) {
  TimechangeLawReport report;
  report.clock_law = sample_perpetual_law(field, f, x0, n_paths, cfg_base);
  const CoefficientField changed = time_change_coeffs(field, f);
  report.direct_law = sample_explosion_law(changed, x0, n_paths, cfg_direct);
  report.ks = ks_censored(report.clock_law, report.direct_law);
  report.critical_value = ks_critical_value(report.clock_law.n_total(),
                                            report.direct_law.n_total());
  report.clock_mean = report.clock_law.mean_finite();
  report.direct_mean = report.direct_law.mean_finite();
  const auto censored_heavy = [n_paths](const EmpiricalLaw& law) {
    return law.n_divergent + law.n_censored_low > n_paths / 5;
  };
  report.low_power =
      censored_heavy(report.clock_law) || censored_heavy(report.direct_law);
  return report;
}

MultiStartReport multi_start_experiment(const CoefficientField& field,
                                        const std::vector<Vector>& starts,
                                        std::size_t n_paths,
                                        const DichotomyConfig& cfg) {
  if (starts.empty()) throw std::invalid_argument("no starting points");
  MultiStartReport report;

  const RegularityReport probes = probe_regularity(field, cfg.probe_radii, 32);
  for (const ShellStats& shell : probes.shells) {
    if (shell.min_diffusion_eig <= 0.0) report.ellipticity_probe_passed = false;
  }

  for (std::size_t s = 0; s < starts.size(); ++s) {
    DichotomyConfig per_start = cfg;
    per_start.sim.seed = derive_seed(cfg.sim.seed, 100 + s);
    MultiStartRow row;
    row.start = starts[s];
    if (field.has_girsanov()) {
      row.verdict = dichotomy_verdict(field, starts[s], n_paths, per_start);
    } else {
      // without a drift change the zero-one property is plain explosion
      const ExplosionEstimate est =
          estimate_explosion_prob(field, starts[s], n_paths, per_start.sim);
      row.verdict.evidence.push_back(
          {"explosion fraction", est.p_hat, cfg.near_one,
           std::to_string(est.n_exploded) + "/" +
               std::to_string(est.n_paths)});
      if (est.p_hat >= cfg.near_one && !est.inconclusive) {
        row.verdict.outcome = Outcome::Explosive;
      } else if (est.p_hat <= cfg.near_zero && !est.inconclusive) {
        row.verdict.outcome = Outcome::Conservative;
      } else {
        row.verdict.outcome = Outcome::Inconclusive;
      }
    }
    report.rows.push_back(std::move(row));
  }
  for (const MultiStartRow& row : report.rows) {
    if (row.verdict.outcome != report.rows.front().verdict.outcome)
      report.all_agree = false;
  }
  return report;
}

}  // namespace perpetua
