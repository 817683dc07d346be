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

#include "perpetua/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "perpetua/counterexample.hpp"
#include "perpetua/harness.hpp"
#include "perpetua/market.hpp"
#include "perpetua/parallel.hpp"
#include "perpetua/rng.hpp"
#include "perpetua/zoo.hpp"

namespace perpetua {

namespace {

constexpr double kQuarticClockMean = 1.1107207345395915;  // pi / (2 sqrt 2)

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

struct Scale {
  bool quick;
  std::size_t n(std::size_t full, std::size_t reduced) const {
    return quick ? reduced : full;
  }
};

using Clockt = std::chrono::steady_clock;

double seconds_since(Clockt::time_point start) {
  return std::chrono::duration<double>(Clockt::now() - start).count();
}

// --- criterion 1: law of the quartic clock of Brownian motion ---------

CriterionResult criterion_time_change_law(const Scale& scale,
                                          std::uint64_t seed) {
  CriterionResult result{1, "time-change law (quartic clock, d=3)"};

  // Independent oracle first: 2 int_0^inf r/(2+r^4) dr by quadrature.
  QuadratureConfig quad;
  const TailReport oracle_tail = classify_improper_integral(
      [](double r) { return r / (2.0 + r * r * r * r); }, 1e-3, quad);
  const double head = adaptive_simpson(
      [](double r) { return r / (2.0 + r * r * r * r); }, 0.0, 1e-3, 1e-14);
  const double oracle = 2.0 * (head + oracle_tail.value);

  const ZooModel bm = make_model("bm3");
  const ScalarField f = make_clock("inv-quartic", 3);

  SimConfig base_cfg;
  base_cfg.step = scale.quick ? 1e-2 : 4e-3;
  base_cfg.horizon = scale.quick ? 500.0 : 2000.0;
  base_cfg.seed = derive_seed(seed, 1);
  SimConfig direct_cfg = base_cfg;
  direct_cfg.step = scale.quick ? 4e-3 : 1e-3;

  const std::size_t n = scale.n(2000, 300);
  const TimechangeLawReport report =
      verify_timechange_law(bm.field, f, bm.x0, n, base_cfg, direct_cfg);

  const double d_threshold = scale.quick ? report.critical_value : 0.0515;
  const double mass_threshold = scale.quick ? 0.08 : 0.03;
  const double mean_tolerance = scale.quick ? 0.15 : 0.08;
  const double mean_error = std::abs(report.clock_mean / oracle - 1.0);

  result.passed = std::abs(oracle - kQuarticClockMean) < 1e-6 &&
                  report.ks.d_statistic < d_threshold &&
                  report.ks.mass_gap < mass_threshold &&
                  mean_error < mean_tolerance;
  result.details = {
      "oracle = " + fmt(oracle) + " (closed form " + fmt(kQuarticClockMean) +
          ")",
      "D = " + fmt(report.ks.d_statistic) + " (threshold " +
          fmt(d_threshold) + ")",
      "mass gap = " + fmt(report.ks.mass_gap) + " (threshold " +
          fmt(mass_threshold) + ")",
      "clock mean = " + fmt(report.clock_mean) + ", direct mean = " +
          fmt(report.direct_mean) + " (relative error " + fmt(mean_error) +
          ")"};
  result.data = {{"oracle", oracle},
                 {"d_statistic", report.ks.d_statistic},
                 {"d_threshold", d_threshold},
                 {"mass_gap", report.ks.mass_gap},
                 {"clock_mean", report.clock_mean},
                 {"direct_mean", report.direct_mean},
                 {"n_paths", n}};
  return result;
}

// --- criterion 2: pathwise clock identities over the zoo ---------------

CriterionResult criterion_clock_identities(const Scale& scale,
                                           std::uint64_t seed) {
  CriterionResult result{2, "pathwise clock identities on the model zoo"};
  const std::size_t n = scale.n(2000, 100);
  SimConfig cfg;
  cfg.step = 4e-3;
  cfg.horizon = 10.0;

  std::size_t failures = 0;
  std::size_t paths_total = 0;
  double worst_inverse = 0.0;
  double worst_roundtrip = 0.0;

  for (const std::string& id : zoo_model_ids()) {
    const ZooModel model = make_model(id);
    const ScalarField f = make_clock("inv-quartic", model.field.dim);
    SimConfig model_cfg = cfg;
    model_cfg.seed = derive_seed(seed, std::hash<std::string>{}(id));

    std::vector<int> ok(n, 1);
    std::vector<double> err_inv(n, 0.0), err_rt(n, 0.0);
    parallel_for(n, [&](std::size_t p) {
      const PathSample path =
          simulate_path(model.field, model.x0, model_cfg.with_path(p));
      const Clock clock = additive_functional(path, f);
      const ClockInverse inverse = invert_clock(clock);

      double sup_f = 0.0;
      for (std::size_t i = 0; i < path.size(); ++i)
        sup_f = std::max(sup_f, f(Vector(path.states.col(i))));
      const double tol_inverse = 2.0 * path.base_step * sup_f;

      double e1 = 0.0;
      for (std::size_t i = 0; i < path.size(); ++i) {
        if (clock.values[i] >= clock.total) break;
        e1 = std::max(e1, std::abs(inverse(clock.values[i]) - path.times[i]));
      }

      const TimeChangeResult changed = time_change_path(path, f);
      const PathSample u = recover_original(changed, f);
      const double tol_roundtrip = 5.0 * path.max_step_displacement();
      double e2 = 0.0;
      for (std::size_t i = 0; i < path.size(); ++i)
        e2 = std::max(e2, (u.states.col(i) - path.states.col(i)).norm());

      err_inv[p] = tol_inverse > 0 ? e1 / tol_inverse : 0.0;
      err_rt[p] = tol_roundtrip > 0 ? e2 / tol_roundtrip : 0.0;
      if (e1 > tol_inverse || e2 > tol_roundtrip) ok[p] = 0;
    });
    for (std::size_t p = 0; p < n; ++p) {
      paths_total += 1;
      if (!ok[p]) ++failures;
      worst_inverse = std::max(worst_inverse, err_inv[p]);
      worst_roundtrip = std::max(worst_roundtrip, err_rt[p]);
    }
  }
  result.passed = failures == 0;
  result.details = {
      std::to_string(paths_total - failures) + "/" +
          std::to_string(paths_total) + " paths pass both identities",
      "worst |L(T(s)) - s| at " + fmt(100.0 * worst_inverse) +
          "% of tolerance",
      "worst recovered-path error at " + fmt(100.0 * worst_roundtrip) +
          "% of tolerance"};
  result.data = {{"paths", paths_total},
                 {"failures", failures},
                 {"worst_inverse_ratio", worst_inverse},
                 {"worst_roundtrip_ratio", worst_roundtrip}};
  return result;
}

// --- criterion 3: radial dichotomy --------------------------------------

CriterionResult criterion_radial(const Scale& scale, std::uint64_t seed) {
  CriterionResult result{3, "radial dichotomy (1+r)^3 vs (1+r)^2"};
  const std::size_t n = scale.n(2000, 300);
  SimConfig cfg;
  cfg.step = 4e-3;
  cfg.horizon = 50.0;
  cfg.seed = derive_seed(seed, 3);

  QuadratureConfig quad;
  const ZooModel cubic = make_model("radial:p=3");
  const ZooModel square = make_model("radial:p=2");
  const ExplosionEstimate est3 =
      estimate_explosion_prob(cubic.field, cubic.x0, n, cfg);
  const ExplosionEstimate est2 =
      estimate_explosion_prob(square.field, square.x0, n, cfg);
  const RadialReport rad3 = radial_explosion_test(
      make_profile([](double r) { return std::pow(1.0 + r, 3.0); }), 1.0,
      quad);
  const RadialReport rad2 = radial_explosion_test(
      make_profile([](double r) { return std::pow(1.0 + r, 2.0); }), 1.0,
      quad);

  result.passed = est3.p_hat >= 0.95 && rad3.outcome == Outcome::Explosive &&
                  est2.p_hat <= 0.05 && rad2.outcome == Outcome::Conservative;
  result.details = {
      "(1+r)^3: explosion fraction " + fmt(est3.p_hat) + " (need >= 0.95), " +
          "analytic " + to_string(rad3.outcome),
      "(1+r)^2: explosion fraction " + fmt(est2.p_hat) + " (need <= 0.05), " +
          "analytic " + to_string(rad2.outcome) + ", truncated " +
          std::to_string(est2.n_truncated)};
  result.data = {{"p3_fraction", est3.p_hat},
                 {"p3_verdict", to_string(rad3.outcome)},
                 {"p2_fraction", est2.p_hat},
                 {"p2_verdict", to_string(rad2.outcome)},
                 {"n_paths", n}};
  return result;
}

// --- criterion 4: three-route agreement ---------------------------------

CriterionResult criterion_dichotomy_routes(const Scale& scale,
                                           std::uint64_t seed) {
  CriterionResult result{4, "three-route dichotomy agreement"};
  const std::size_t n = scale.n(2000, 1000);

  DichotomyConfig cfg;
  cfg.sim.step = 4e-3;
  cfg.sim.horizon = 50.0;
  cfg.sim.seed = derive_seed(seed, 4);

  const ZooModel fuchsian = make_model("fuchsian:g=quartic");
  const Verdict ac = dichotomy_verdict(fuchsian.field, fuchsian.x0, n, cfg);
  bool routes_within_ci = false;
  for (const Evidence& e : ac.evidence) {
    if (e.criterion.rfind("route agreement", 0) == 0)
      routes_within_ci = e.value <= e.threshold;
  }

  DichotomyConfig cfg_pair = cfg;
  cfg_pair.sim.seed = derive_seed(seed, 44);
  const ZooModel pair = make_model("pair-bm-drift1");
  const Verdict singular = dichotomy_verdict(pair.field, pair.x0, n, cfg_pair);
  const EmpiricalLaw pair_law = sample_perpetual_law(
      pair.field, pair.field.clock, pair.x0, n, cfg_pair.sim);
  const double divergent_fraction =
      double(pair_law.n_divergent) / double(pair_law.n_total());

  result.passed = ac.outcome == Outcome::AbsolutelyContinuous &&
                  routes_within_ci &&
                  singular.outcome == Outcome::Singular &&
                  divergent_fraction >= 0.98;
  result.details = {"quartic pair: " + to_string(ac.outcome) +
                        (routes_within_ci ? " (routes within combined CI)"
                                          : " (routes disagree)"),
                    "unit-drift pair: " + to_string(singular.outcome) +
                        ", divergent fraction " + fmt(divergent_fraction) +
                        " (need >= 0.98)"};
  for (const Evidence& e : ac.evidence)
    result.details.push_back("  [quartic] " + e.criterion + " = " +
                             fmt(e.value) + " | " + e.note);
  result.data = {{"fuchsian_outcome", to_string(ac.outcome)},
                 {"pair_outcome", to_string(singular.outcome)},
                 {"pair_divergent_fraction", divergent_fraction},
                 {"n_paths", n}};
  return result;
}

// --- criterion 5: nested-integral classifier vs closed form -------------

bool power_law_converges(double alpha, double beta) {
  // inner integrand u^{beta-alpha}; the outer tail is z^{1-alpha} when
  // beta >= alpha-1 (log factor at equality) and K z^{-beta} otherwise
  if (beta >= alpha - 1.0) return alpha > 2.0;
  return beta > 1.0;
}

CriterionResult criterion_power_law_table(const Scale&, std::uint64_t) {
  CriterionResult result{5, "nested-integral classifier on power laws"};
  const std::vector<double> alphas{1.5, 2.0, 3.0, 4.0};
  const std::vector<double> betas{0.0, 1.0, 2.0, 3.0, 4.0};
  int matches = 0, wrong = 0, undetermined = 0;
  for (double alpha : alphas) {
    for (double beta : betas) {
      const TailReport report =
          nested_integral_converges(power_law_spec(alpha, beta));
      const TriState expected =
          power_law_converges(alpha, beta) ? TriState::Yes : TriState::No;
      if (report.verdict == expected) {
        ++matches;
      } else if (report.verdict == TriState::Undetermined) {
        ++undetermined;
        result.details.push_back("alpha=" + fmt(alpha) + " beta=" +
                                 fmt(beta) + ": undetermined (expected " +
                                 to_string(expected) + ")");
      } else {
        ++wrong;
        result.details.push_back("alpha=" + fmt(alpha) + " beta=" +
                                 fmt(beta) + ": WRONG (got " +
                                 to_string(report.verdict) + ", expected " +
                                 to_string(expected) + ")");
      }
    }
  }
  result.passed = matches >= 19 && wrong == 0;
  result.details.insert(result.details.begin(),
                        std::to_string(matches) + "/20 match the symbolic "
                        "answer, " + std::to_string(undetermined) +
                            " undetermined, " + std::to_string(wrong) +
                            " wrong");
  result.data = {{"matches", matches},
                 {"undetermined", undetermined},
                 {"wrong", wrong}};
  return result;
}

// --- criterion 6: 1d explosion oracle vs Monte Carlo --------------------

CriterionResult criterion_feller_vs_mc(const Scale& scale,
                                       std::uint64_t seed) {
  CriterionResult result{6, "1d explosion oracle vs Monte Carlo"};
  const std::size_t n = scale.n(2000, 300);
  SimConfig cfg;
  cfg.step = 4e-3;
  cfg.horizon = 50.0;

  QuadratureConfig quad;
  int decided = 0;
  bool all_match = true;
  for (const std::string& id : zoo_1d_ids()) {
    const ZooModel model = make_model(id);
    ScalarField a;
    a.dim = 1;
    if (model.field.iso_diffusion) {
      a.eval = [iso = model.field.iso_diffusion](const Vector& x) {
        return iso(x);
      };
    } else {
      a.eval = [diff = model.field.diffusion](const Vector& x) {
        return diff(x)(0, 0);
      };
    }
    ScalarField b;
    b.dim = 1;
    if (model.field.has_drift())
      b.eval = [drift = model.field.drift](const Vector& x) {
        return drift(x)[0];
      };
    const FellerReport feller = feller_test_1d(a, b, model.x0[0], quad);

    SimConfig model_cfg = cfg;
    model_cfg.seed = derive_seed(seed, std::hash<std::string>{}(id));
    const ExplosionEstimate est =
        estimate_explosion_prob(model.field, model.x0, n, model_cfg);

    std::string line = id + ": oracle " + to_string(feller.verdict) +
                       ", MC fraction " + fmt(est.p_hat);
    if (feller.verdict == FellerVerdict::ExplodesAS) {
      ++decided;
      if (est.p_hat < 0.95) {
        all_match = false;
        line += " MISMATCH";
      }
    } else if (feller.verdict == FellerVerdict::ConservativeAS) {
      ++decided;
      if (est.p_hat > 0.05) {
        all_match = false;
        line += " MISMATCH";
      }
    }
    result.details.push_back(line);
    result.data[id] = {{"oracle", to_string(feller.verdict)},
                       {"mc_fraction", est.p_hat}};
  }
  result.passed = all_match && decided >= 4;
  result.details.insert(result.details.begin(),
                        std::to_string(decided) + " decided models, " +
                            std::string(all_match ? "all" : "NOT all") +
                            " match the Monte Carlo split");
  return result;
}

// --- criterion 7: market application -------------------------------------

CriterionResult criterion_market(const Scale& scale, std::uint64_t seed) {
  CriterionResult result{7, "flat-volatility market (d=1)"};
  const std::size_t n = scale.n(2000, 1000);

  MarketSpec spec;
  spec.base.dim = 1;
  spec.base.iso_diffusion = [](const Vector&) { return 1.0; };
  spec.x0 = Vector::Zero(1);
  spec.asset = 0;

  SimConfig cfg;
  cfg.step = 4e-3;
  cfg.horizon = 50.0;
  cfg.seed = derive_seed(seed, 7);

  const std::vector<LadderStat> ladder =
      asset_ladder(spec, n, {1.0, 5.0, 20.0, 50.0}, cfg);
  bool means_ok = true;
  for (const LadderStat& pt : ladder) {
    if (pt.t > 20.5) continue;
    if (std::abs(pt.mean - 1.0) > 3.0 * pt.std_error) means_ok = false;
    result.details.push_back("E[S_" + fmt(pt.t) + "] = " + fmt(pt.mean) +
                             " +- " + fmt(pt.std_error));
  }
  const double median50 = ladder.back().median;
  result.details.push_back("median S_50 = " + fmt(median50) +
                           " (need < 0.01)");

  const Verdict verdict = martingale_measure_check(spec, n, cfg);
  double aux_fraction = 1.0;
  for (const Evidence& e : verdict.evidence) {
    if (e.criterion.rfind("auxiliary explosion", 0) == 0)
      aux_fraction = e.value;
  }
  result.details.push_back("auxiliary explosion fraction " +
                           fmt(aux_fraction) + " (need <= 0.02), verdict " +
                           to_string(verdict.outcome));

  QuadratureConfig quad;
  const OneDimMartReport flat =
      one_dim_mart_criterion(make_profile([](double) { return 1.0; }), quad);
  const OneDimMartReport quadratic = one_dim_mart_criterion(
      make_profile([](double x) { return 1.0 + x * x; }), quad);
  result.details.push_back("1d criterion: a=1 -> " + to_string(flat.verdict) +
                           ", a=1+x^2 -> " + to_string(quadratic.verdict));

  result.passed = means_ok && median50 < 0.01 && aux_fraction <= 0.02 &&
                  verdict.outcome == Outcome::Singular &&
                  flat.verdict == OneDimMartingale::Martingale &&
                  quadratic.verdict == OneDimMartingale::StrictLocal;
  result.data = {{"median_s50", median50},
                 {"aux_fraction", aux_fraction},
                 {"verdict", to_string(verdict.outcome)},
                 {"one_dim_flat", to_string(flat.verdict)},
                 {"one_dim_quadratic", to_string(quadratic.verdict)},
                 {"n_paths", n}};
  return result;
}

// --- criterion 8: slow-growth counterexample ------------------------------

CriterionResult criterion_counterexample(const Scale& scale,
                                         std::uint64_t seed) {
  CriterionResult result{8, "slow-growth counterexample (rho = 1+t)"};
  const ScalarField rho = make_profile([](double t) { return 1.0 + t; });
  const Counterexample built = build_counterexample_g(rho, 3, 6);

  // (i) pointwise bound g >= (1+|x|^2)/rho(|x|) on a mixed probe grid
  GaussianStream stream(derive_seed(seed, 8), 0);
  std::size_t probed = 0, bound_failures = 0;
  auto check_point = [&](const Vector& x) {
    ++probed;
    const double lhs = built.g(x);
    const double rhs = (1.0 + x.squaredNorm()) / rho(x.norm());
    if (lhs < rhs * (1.0 - 1e-12)) ++bound_failures;
  };
  std::uint64_t draw = 0;
  for (std::size_t ball = 0; ball < built.spec.center_norms.size(); ++ball) {
    for (int k = 0; k < 1000; ++k) {
      stream.begin_step(draw++);
      Vector dir(3);
      for (int i = 0; i < 3; ++i) dir[i] = stream.next();
      if (dir.norm() < 1e-12) continue;
      const double u = 0.5 + 0.5 * std::erf(stream.next());  // in (0,1)
      dir *= built.spec.radii[ball] * std::cbrt(u) / dir.norm();
      Vector x = dir;
      x[0] += built.spec.center_norms[ball];
      check_point(x);
    }
  }
  const double r_max = 2.0 * built.spec.center_norms.back();
  for (int k = 0; k < 4000; ++k) {
    stream.begin_step(draw++);
    Vector dir(3);
    for (int i = 0; i < 3; ++i) dir[i] = stream.next();
    if (dir.norm() < 1e-12) continue;
    const double t = double(k) / 3999.0;
    const double radius = 1e-2 * std::pow(r_max / 1e-2, t);
    check_point(Vector(radius / dir.norm() * dir));
  }

  // (ii) explosion from the origin
  const std::size_t n = scale.n(2000, 200);
  SimConfig cfg;
  cfg.step = 4e-3;
  cfg.horizon = 50.0;
  cfg.seed = derive_seed(seed, 88);
  CoefficientField field;
  field.dim = 3;
  field.iso_diffusion = [g = built.g](const Vector& x) { return g(x); };
  const ExplosionEstimate est =
      estimate_explosion_prob(field, Vector::Zero(3), n, cfg);

  // (iii) the divergence lower bound grows without saturating
  const std::vector<double> sums = divergence_partial_sums(built.spec);
  bool monotone = true;
  for (std::size_t k = 2; k < 6; ++k) {
    if (!(sums[k] > sums[k - 1])) monotone = false;
  }
  const bool growing = sums[5] > 4.0 * sums[1];

  result.passed = bound_failures == 0 && est.p_hat >= 0.9 && monotone &&
                  growing && probed >= 10000;
  result.details = {
      "pointwise bound holds at " + std::to_string(probed - bound_failures) +
          "/" + std::to_string(probed) + " probe points",
      "explosion fraction from 0: " + fmt(est.p_hat) + " (need >= 0.9)",
      "divergence partial sums (n=2..6): " + fmt(sums[1]) + ", " +
          fmt(sums[2]) + ", " + fmt(sums[3]) + ", " + fmt(sums[4]) + ", " +
          fmt(sums[5])};
  result.data = {{"probe_points", probed},
                 {"bound_failures", bound_failures},
                 {"explosion_fraction", est.p_hat},
                 {"partial_sums", sums}};
  return result;
}

// --- criterion 9: determinism --------------------------------------------

CriterionResult criterion_determinism(std::uint64_t seed, std::ostream* log) {
  CriterionResult result{9, "quick-suite determinism"};
  const AcceptanceReport first = run_acceptance(true, seed, false, nullptr);
  const AcceptanceReport second = run_acceptance(true, seed, false, nullptr);
  if (log) *log << "  (quick suite executed twice for the comparison)\n";
  const std::string a = acceptance_json(first, false).dump();
  const std::string b = acceptance_json(second, false).dump();
  result.passed = a == b;
  result.details = {result.passed
                        ? "two quick runs from the same master seed are "
                          "byte-identical"
                        : "quick runs differ"};
  result.data = {{"identical", result.passed},
                 {"payload_bytes", a.size()}};
  return result;
}

}  // namespace

bool AcceptanceReport::all_passed() const {
  for (const CriterionResult& c : criteria)
    if (!c.passed) return false;
  return true;
}

AcceptanceReport run_acceptance(bool quick, std::uint64_t master_seed,
                                bool with_determinism, std::ostream* log) {
  AcceptanceReport report;
  report.quick = quick;
  report.master_seed = master_seed;
  const Scale scale{quick};
  const auto t_suite = Clockt::now();

  auto run = [&](auto&& fn, auto&&... args) {
    const auto t0 = Clockt::now();
    CriterionResult result = fn(std::forward<decltype(args)>(args)...);
    result.seconds = seconds_since(t0);
    if (log) {
      *log << (result.passed ? "[PASS] " : "[FAIL] ") << "criterion "
           << result.index << ": " << result.name << " ("
           << fmt(result.seconds) << " s)\n";
      for (const std::string& line : result.details)
        *log << "       " << line << "\n";
    }
    report.criteria.push_back(std::move(result));
  };

  run(criterion_time_change_law, scale, master_seed);
  run(criterion_clock_identities, scale, master_seed);
  run(criterion_radial, scale, master_seed);
  run(criterion_dichotomy_routes, scale, master_seed);
  run(criterion_power_law_table, scale, master_seed);
  run(criterion_feller_vs_mc, scale, master_seed);
  run(criterion_market, scale, master_seed);
  run(criterion_counterexample, scale, master_seed);
  if (with_determinism) run(criterion_determinism, master_seed, log);

  report.total_seconds = seconds_since(t_suite);
  if (log) {
    *log << (report.all_passed() ? "all criteria passed"
                                 : "SOME CRITERIA FAILED")
         << " in " << fmt(report.total_seconds) << " s\n";
  }
  return report;
}

nlohmann::ordered_json acceptance_json(const AcceptanceReport& report,
                                       bool include_volatile) {
  nlohmann::ordered_json criteria = nlohmann::ordered_json::array();
  for (const CriterionResult& c : report.criteria) {
    nlohmann::ordered_json entry{{"index", c.index},
                                 {"name", c.name},
                                 {"passed", c.passed},
                                 {"data", c.data}};
    if (include_volatile) entry["seconds"] = c.seconds;
    criteria.push_back(std::move(entry));
  }
  nlohmann::ordered_json out{{"quick", report.quick},
                             {"master_seed", report.master_seed},
                             {"criteria", std::move(criteria)},
                             {"all_passed", report.all_passed()}};
  if (include_volatile) out["total_seconds"] = report.total_seconds;
  return out;
}

}  // namespace perpetua
