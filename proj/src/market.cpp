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

#include "perpetua/market.hpp"

#include <algorithm>
#include <cmath>

#include "perpetua/parallel.hpp"
#include "perpetua/rng.hpp"
#include "perpetua/stats.hpp"

namespace perpetua {

std::string to_string(OneDimMartingale cls) {
  switch (cls) {
    case OneDimMartingale::Martingale: return "martingale";
    case OneDimMartingale::StrictLocal: return "strict-local";
    default: return "undetermined";
  }
}

namespace {

void check_spec(const MarketSpec& spec) {
  if (spec.base.has_drift())
    throw std::invalid_argument("market base problem must be driftless");
  if (spec.asset < 0 || spec.asset >= spec.base.dim)
    throw std::invalid_argument("asset index out of range");
}

double diag_entry(const CoefficientField& base, int i, const Vector& x) {
  if (base.iso_diffusion) return base.iso_diffusion(x);
  return base.diffusion(x)(i, i);
}

// log S^i accumulated along one path: d log S = dX^i - a_ii dt / 2.
struct AssetAccumulator {
  const CoefficientField* base;
  int asset;
  double log_s = 0.0;
  double quad = 0.0;
  double aii_prev = std::numeric_limits<double>::quiet_NaN();

  void update(const Vector& x, double h, const Vector& x_next) {
    if (std::isnan(aii_prev)) aii_prev = diag_entry(*base, asset, x);
    const double aii_next = diag_entry(*base, asset, x_next);
    if (!(aii_prev > 0.0))
      throw std::domain_error("a_ii not positive at " + format_point(x));
    quad += 0.5 * h * (aii_prev + aii_next);
    log_s += x_next[asset] - x[asset];
    aii_prev = aii_next;
  }

  double s() const { return std::exp(log_s - 0.5 * quad); }
};

}  // namespace

AssetPath simulate_asset(const MarketSpec& spec, const SimConfig& cfg) {
  check_spec(spec);
  AssetPath path;
  path.times.push_back(0.0);
  path.s_values.push_back(1.0);
  AssetAccumulator acc{&spec.base, spec.asset};
  StepHooks hooks;
  hooks.on_step = [&](double, const Vector& x, double h, const Vector& x_next,
                      const Vector&) {
    acc.update(x, h, x_next);
    path.times.push_back(path.times.back() + h);
    path.s_values.push_back(acc.s());
  };
  const PathOutcome outcome = run_path(spec.base, spec.x0, cfg, hooks);
  path.status = outcome.status;
  return path;
}

std::vector<LadderStat> asset_ladder(const MarketSpec& spec,
                                     std::size_t n_paths,
                                     const std::vector<double>& checkpoints,
                                     const SimConfig& cfg) {
  check_spec(spec);
  std::vector<double> ladder = checkpoints;
  std::sort(ladder.begin(), ladder.end());
  SimConfig run_cfg = cfg;
  run_cfg.horizon = ladder.back();

  std::vector<std::vector<double>> s_at(n_paths,
                                        std::vector<double>(ladder.size()));
  parallel_for(n_paths, [&](std::size_t p) {
    AssetAccumulator acc{&spec.base, spec.asset};
    std::size_t k = 0;
    StepHooks hooks;
    hooks.on_step = [&](double, const Vector& x, double h,
                        const Vector& x_next,
                        const Vector&) { acc.update(x, h, x_next); };
    hooks.on_checkpoint = [&](double, const Vector&) {
      if (k < ladder.size()) s_at[p][k++] = acc.s();
    };
    run_path(spec.base, spec.x0, run_cfg.with_path(p), hooks, ladder);
    for (; k < ladder.size(); ++k) s_at[p][k] = acc.s();
  });

  std::vector<LadderStat> stats(ladder.size());
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    std::vector<double> column(n_paths);
    double sum = 0.0;
    for (std::size_t p = 0; p < n_paths; ++p) {
      column[p] = s_at[p][k];
      sum += column[p];
    }
    const double mean = sum / double(n_paths);
    double var = 0.0;
    for (double s : column) var += (s - mean) * (s - mean);
    var /= double(n_paths - 1);
    stats[k] = {ladder[k], mean, std::sqrt(var / double(n_paths)),
                percentile(column, 0.5)};
  }
  return stats;
}

Verdict martingale_measure_check(const MarketSpec& spec, std::size_t n_paths,
                                 const SimConfig& cfg) {
  check_spec(spec);
  Verdict verdict;

  // positivity probe of a_ii through the Girsanov energy with c = e_i
  CoefficientField probe_field = spec.base;
  probe_field.girsanov = [i = spec.asset](const Vector& x) {
    Vector c = Vector::Zero(x.size());
    c[i] = 1.0;
    return c;
  };
  const RegularityReport probes =
      probe_regularity(probe_field, {0.5, 1, 2, 4, 16, 64}, 32);
  if (!probes.passed()) {
    verdict.outcome = Outcome::Inconclusive;
    verdict.evidence.push_back({"a_ii positivity probe", 0.0, 1.0,
                                probes.diagnostics.empty()
                                    ? "probe failed"
                                    : probes.diagnostics.front()});
    return verdict;
  }

  // the corollary is about conservative base laws; refuse otherwise
  SimConfig base_cfg = cfg;
  base_cfg.seed = derive_seed(cfg.seed, /*tag=*/11);
  const ExplosionEstimate base_est =
      estimate_explosion_prob(spec.base, spec.x0, n_paths, base_cfg);
  verdict.evidence.push_back({"base explosion fraction", base_est.p_hat, 0.02,
                              std::to_string(base_est.n_exploded) + "/" +
                                  std::to_string(base_est.n_paths)});
  if (base_est.p_hat > 0.02) {
    verdict.outcome = Outcome::Inconclusive;
    verdict.evidence.push_back(
        {"hypothesis", 0.0, 1.0, "base problem does not look conservative"});
    return verdict;
  }

  // auxiliary problem (a/a_ii, a e_i/a_ii)
  CoefficientField aux;
  aux.dim = spec.base.dim;
  if (spec.base.iso_diffusion) {
    aux.iso_diffusion = [](const Vector&) { return 1.0; };
    aux.drift = [i = spec.asset](const Vector& x) {
      Vector b = Vector::Zero(x.size());
      b[i] = 1.0;
      return b;
    };
  } else {
    aux.diffusion = [base = spec.base, i = spec.asset](const Vector& x) {
      return (base.diffusion(x) / base.diffusion(x)(i, i)).eval();
    };
    aux.drift = [base = spec.base, i = spec.asset](const Vector& x) {
      const Matrix a = base.diffusion(x);
      return (a.col(i) / a(i, i)).eval();
    };
  }
  SimConfig aux_cfg = cfg;
  aux_cfg.seed = derive_seed(cfg.seed, /*tag=*/12);
  const ExplosionEstimate aux_est =
      estimate_explosion_prob(aux, spec.x0, n_paths, aux_cfg);
  verdict.evidence.push_back(
      {"auxiliary explosion fraction", aux_est.p_hat, 0.9,
       std::to_string(aux_est.n_exploded) + "/" +
           std::to_string(aux_est.n_paths) + " exploded, " +
           std::to_string(aux_est.n_truncated) + " truncated"});

  // cross-check: S^i equals the density of the drift change with -c = e_i
  CoefficientField pair = spec.base;
  pair.girsanov = [i = spec.asset](const Vector& x) {
    Vector c = Vector::Zero(x.size());
    c[i] = -1.0;
    return c;
  };
  if (pair.iso_diffusion) {
    pair.drift = [iso = pair.iso_diffusion, i = spec.asset](const Vector& x) {
      Vector b = Vector::Zero(x.size());
      b[i] = iso(x);
      return b;
    };
  } else {
    pair.drift = [diffusion = pair.diffusion,
                  i = spec.asset](const Vector& x) {
      return (diffusion(x).col(i)).eval();
    };
  }
  SimConfig ui_cfg = cfg;
  ui_cfg.seed = derive_seed(cfg.seed, /*tag=*/13);
  const double T = cfg.horizon;
  const UiReport ui = ui_martingale_check(
      pair, spec.x0, n_paths, {T / 8.0, T / 4.0, T / 2.0, T}, ui_cfg);
  verdict.evidence.push_back(
      {"density UI cross-check",
       ui.uniformly_integrable == TriState::Yes
           ? 1.0
           : (ui.uniformly_integrable == TriState::No ? 0.0 : 0.5),
       1.0,
       to_string(ui.uniformly_integrable) +
           (ui.diagnostic.empty() ? "" : "; " + ui.diagnostic)});

  const bool aux_explodes = aux_est.p_hat >= 0.9 && !aux_est.inconclusive;
  const bool aux_conservative = aux_est.p_hat <= 0.1;
  if (aux_explodes && ui.uniformly_integrable != TriState::No) {
    verdict.outcome = Outcome::AbsolutelyContinuous;
    verdict.evidence.push_back(
        {"verdict", 1.0, 1.0, "UI martingale measure (plausible)"});
  } else if (aux_conservative && ui.uniformly_integrable != TriState::Yes) {
    verdict.outcome = Outcome::Singular;
    verdict.evidence.push_back(
        {"verdict", 0.0, 0.0, "not a UI martingale measure"});
  } else {
    verdict.outcome = Outcome::Inconclusive;
    verdict.evidence.push_back({"verdict", 0.5, 1.0, "routes disagree"});
  }
  return verdict;
}

OneDimMartReport one_dim_mart_criterion(const ScalarField& a,
                                        const QuadratureConfig& quad) {
  OneDimMartReport report;
  auto inv_a = [&a](double sign) {
    return [&a, sign](double r) {
      const double value = a(sign * r);
      if (!(value > 0.0))
        throw std::domain_error("volatility not positive at x = " +
                                std::to_string(sign * r));
      return 1.0 / value;
    };
  };
  QuadratureConfig q = quad;
  q.doubling_start = 1.0;
  // head piece [0, 1] is finite for locally bounded-away a; only the tails
  // decide the classification
  const TailReport pos = classify_improper_integral(inv_a(1.0), 1.0, q);
  const TailReport neg = classify_improper_integral(inv_a(-1.0), 1.0, q);
  report.positive_tail_value = pos.value;
  report.negative_tail_value = neg.value;
  report.positive_tail_diverges =
      pos.verdict == TriState::Yes
          ? TriState::No
          : (pos.verdict == TriState::No ? TriState::Yes
                                         : TriState::Undetermined);
  report.negative_tail_diverges =
      neg.verdict == TriState::Yes
          ? TriState::No
          : (neg.verdict == TriState::No ? TriState::Yes
                                         : TriState::Undetermined);
  if (pos.verdict == TriState::No) {
    report.verdict = OneDimMartingale::Martingale;
  } else if (pos.verdict == TriState::Yes) {
    report.verdict = OneDimMartingale::StrictLocal;
  }
  return report;
}

}  // namespace perpetua
