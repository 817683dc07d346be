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

#include "perpetua/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "perpetua/acceptance.hpp"
#include "perpetua/counterexample.hpp"
#include "perpetua/harness.hpp"
#include "perpetua/market.hpp"
#include "perpetua/parallel.hpp"
#include "perpetua/rng.hpp"
#include "perpetua/zoo.hpp"

namespace perpetua {

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

Vector parse_point(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) values.push_back(std::stod(item));
  Vector x(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) x[i] = values[i];
  return x;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%FT%TZ", std::gmtime(&t));
  return buffer;
}

ordered_json evidence_json(const Verdict& verdict) {
  ordered_json rows = ordered_json::array();
  for (const Evidence& e : verdict.evidence) {
    rows.push_back({{"criterion", e.criterion},
                    {"value", e.value},
                    {"threshold", e.threshold},
                    {"note", e.note}});
  }
  return ordered_json{{"outcome", to_string(verdict.outcome)},
                      {"evidence", std::move(rows)}};
}

// Shared run bookkeeping: every command echoes its configuration and leaves
// config.json / results.json (and optional samples.csv) in the out dir.
struct RunWriter {
  std::string out_dir;
  std::string command;
  ordered_json config;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void write(ordered_json results, const std::string* samples_csv = nullptr) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const double runtime =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    {
      std::ofstream file(fs::path(out_dir) / "config.json");
      file << config.dump(2) << "\n";
    }
    ordered_json payload{{"schema", 1},
                         {"command", command},
                         {"config", config},
                         {"results", std::move(results)},
                         {"meta",
                          {{"timestamp", iso_timestamp()},
                           {"runtime_seconds", runtime}}}};
    {
      std::ofstream file(fs::path(out_dir) / "results.json");
      file << payload.dump(2) << "\n";
    }
    if (samples_csv) {
      std::ofstream file(fs::path(out_dir) / "samples.csv");
      file << *samples_csv;
    }
  }
};

struct SimFlags {
  std::string model = "bm3";
  std::string x0_text;
  std::size_t n_paths = 2000;
  double step = 4e-3;
  double horizon = 50.0;
  double explosion_radius = 1e3;
  double truncation_radius = 1e4;
  std::uint64_t seed = 0;
  std::string out_dir = "out";

  void attach(CLI::App* cmd, bool with_model = true) {
    if (with_model) cmd->add_option("--model", model, model_zoo_help());
    cmd->add_option("--x0", x0_text, "start point, comma separated");
    cmd->add_option("-n,--paths", n_paths, "number of Monte Carlo paths");
    cmd->add_option("--step", step, "base time step");
    cmd->add_option("--horizon", horizon, "time horizon");
    cmd->add_option("--r-exp", explosion_radius, "explosion radius");
    cmd->add_option("--r-trunc", truncation_radius, "truncation radius");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--out", out_dir, "output directory");
  }

  SimConfig sim_config() const {
    SimConfig cfg;
    cfg.step = step;
    cfg.horizon = horizon;
    cfg.explosion_radius = explosion_radius;
    cfg.truncation_radius = truncation_radius;
    cfg.seed = seed;
    return cfg;
  }

  ordered_json echo(const std::string& extra_key = "",
                    const ordered_json& extra = {}) const {
    ordered_json out{{"model", model},
                     {"x0", x0_text},
                     {"n_paths", n_paths},
                     {"step", step},
                     {"horizon", horizon},
                     {"explosion_radius", explosion_radius},
                     {"truncation_radius", truncation_radius},
                     {"seed", seed}};
    if (!extra_key.empty()) out[extra_key] = extra;
    return out;
  }

  ZooModel resolve_model() const {
    ZooModel model_obj = make_model(model);
    if (!x0_text.empty()) {
      Vector x0 = parse_point(x0_text);
      if (x0.size() != model_obj.field.dim)
        throw std::invalid_argument("--x0 dimension does not match the model");
      model_obj.x0 = x0;
    }
    return model_obj;
  }
};

int cmd_simulate(const SimFlags& flags, const std::string& clock_id,
                 int dump_paths) {
  RunWriter writer{flags.out_dir, "simulate",
                   flags.echo("clock", clock_id)};
  const ZooModel model = flags.resolve_model();
  const SimConfig cfg = flags.sim_config();
  ScalarField f = model.field.clock;
  if (!clock_id.empty()) f = make_clock(clock_id, model.field.dim);

  struct Row {
    PathStatus status;
    double theta_hat;
    double perpetual;
    ClockStatus clock_status;
  };
  std::vector<Row> rows(flags.n_paths);
  parallel_for(flags.n_paths, [&](std::size_t p) {
    if (f.valid()) {
      ClockAccumulator acc(f, cfg.horizon);
      StepHooks hooks;
      hooks.on_step = [&acc](double t, const Vector& x, double h,
                             const Vector& x_next, const Vector&) {
        acc.update(t, x, h, x_next);
      };
      const PathOutcome outcome =
          run_path(model.field, model.x0, cfg.with_path(p), hooks);
      rows[p] = {outcome.status, outcome.theta_hat, acc.value(),
                 acc.classify(outcome.status)};
    } else {
      const PathOutcome outcome =
          run_path(model.field, model.x0, cfg.with_path(p));
      rows[p] = {outcome.status, outcome.theta_hat,
                 std::numeric_limits<double>::quiet_NaN(),
                 ClockStatus::CensoredDivergent};
    }
  });

  std::size_t exploded = 0, truncated = 0, alive = 0;
  std::vector<double> thetas;
  for (const Row& row : rows) {
    if (row.status == PathStatus::Exploded) {
      ++exploded;
      thetas.push_back(row.theta_hat);
    }
    if (row.status == PathStatus::Truncated) ++truncated;
    if (row.status == PathStatus::Alive) ++alive;
  }

  std::ostringstream csv;
  csv << "path_index,status,theta_hat,perpetual_value\n";
  for (std::size_t p = 0; p < rows.size(); ++p) {
    csv << p << "," << to_string(rows[p].status) << ",";
    if (rows[p].status == PathStatus::Exploded) csv << rows[p].theta_hat;
    csv << ",";
    if (f.valid()) csv << rows[p].perpetual;
    csv << "\n";
  }
  const std::string csv_text = csv.str();

  for (int k = 0; k < dump_paths && k < int(flags.n_paths); ++k) {
    const PathSample path = simulate_path(
        model.field, model.x0, cfg.with_path(static_cast<std::uint64_t>(k)));
    std::ofstream file(std::filesystem::path(flags.out_dir) /
                       ("path_" + std::to_string(k) + ".csv"));
    file << "t";
    for (int i = 0; i < path.dim(); ++i) file << ",x" << (i + 1);
    file << "\n";
    for (std::size_t i = 0; i < path.size(); ++i) {
      file << path.times[i];
      for (int j = 0; j < path.dim(); ++j) file << "," << path.states(j, i);
      file << "\n";
    }
  }

  ordered_json results{
      {"counts",
       {{"exploded", exploded}, {"truncated", truncated}, {"alive", alive}}},
      {"explosion_fraction", double(exploded) / double(flags.n_paths)}};
  if (!thetas.empty()) {
    results["theta_hat"] = {{"mean",
                             [&thetas] {
                               double s = 0;
                               for (double t : thetas) s += t;
                               return s / double(thetas.size());
                             }()},
                            {"median", percentile(thetas, 0.5)}};
  }
  writer.write(std::move(results), &csv_text);
  return kExitOk;
}

int cmd_verify_timechange(const SimFlags& flags, const std::string& clock_id,
                          double step_direct) {
  RunWriter writer{flags.out_dir, "verify-timechange",
                   flags.echo("clock", clock_id)};
  const ZooModel model = flags.resolve_model();
  const ScalarField f = make_clock(clock_id, model.field.dim);
  const SimConfig cfg_base = flags.sim_config();
  SimConfig cfg_direct = cfg_base;
  if (step_direct > 0.0) cfg_direct.step = step_direct;

  const TimechangeLawReport report = verify_timechange_law(
      model.field, f, model.x0, flags.n_paths, cfg_base, cfg_direct);

  std::ostringstream csv;
  csv << "law,sample\n";
  for (double v : report.clock_law.samples) csv << "clock," << v << "\n";
  for (double v : report.direct_law.samples) csv << "direct," << v << "\n";
  const std::string csv_text = csv.str();

  ordered_json results{
      {"d_statistic", report.ks.d_statistic},
      {"critical_value_1pct", report.critical_value},
      {"mass_gap", report.ks.mass_gap},
      {"clock_mean", report.clock_mean},
      {"direct_mean", report.direct_mean},
      {"clock_divergent", report.clock_law.n_divergent},
      {"direct_divergent", report.direct_law.n_divergent},
      {"clock_censored_low", report.clock_law.n_censored_low},
      {"direct_censored_low", report.direct_law.n_censored_low},
      {"low_power", report.low_power}};
  writer.write(std::move(results), &csv_text);
  std::cout << "D = " << report.ks.d_statistic << " (1% critical "
            << report.critical_value << "), mass gap " << report.ks.mass_gap
            << "\n";
  return kExitOk;
}

IntegralTestSpec canned_envelope(const ZooModel& model, bool upper) {
  const std::string name = model.id.substr(0, model.id.find(':'));
  if (name == "fuchsian") {
    IntegralTestSpec spec;
    spec.A = make_profile(
        [](double u) { return 2.0 * u * (2.0 + 4.0 * u * u); }, 0.5);
    spec.B = make_profile([](double u) { return 3.0 / (2.0 * u); }, 0.5);
    spec.lo = 0.5;
    spec.c_ref = upper ? 1.0 : 0.5;
    return spec;
  }
  if (name == "pair-bm-drift1") {
    IntegralTestSpec spec;
    const double d = 1.0;
    spec.A = make_profile([](double u) { return 2.0 * u; }, 0.5);
    spec.B = make_profile([d](double u) { return d / (2.0 * u); }, 0.5);
    spec.lo = 0.5;
    spec.c_ref = upper ? 1.0 : 0.5;
    return spec;
  }
  throw std::invalid_argument("no canned envelope for model '" + model.id +
                              "'");
}

int cmd_test_khasminskii(const SimFlags& flags, double alpha, double beta,
                         double lo) {
  RunWriter writer{flags.out_dir, "test-khasminskii", flags.echo()};
  if (!std::isnan(alpha) && !std::isnan(beta)) {
    writer.config["alpha"] = alpha;
    writer.config["beta"] = beta;
    writer.config["lo"] = lo;
    const TailReport report =
        nested_integral_converges(power_law_spec(alpha, beta, lo));
    writer.write(ordered_json{{"converges", to_string(report.verdict)},
                              {"partial_value", report.value},
                              {"diagnostic", report.diagnostic}});
    std::cout << "nested integral: " << to_string(report.verdict) << "\n";
    return report.verdict == TriState::Undetermined ? kExitInconclusive
                                                    : kExitOk;
  }
  const ZooModel model = flags.resolve_model();
  const Verdict verdict = khasminskii_verdict(
      model.field, model.x0, canned_envelope(model, true),
      canned_envelope(model, false), {1.0, 2.0, 4.0, 8.0, 32.0, 128.0});
  writer.write(evidence_json(verdict));
  std::cout << "khasminskii verdict: " << to_string(verdict.outcome) << "\n";
  return verdict.outcome == Outcome::Inconclusive ? kExitInconclusive
                                                  : kExitOk;
}

int cmd_test_fuchsian(const SimFlags& flags, const std::string& g_id) {
  RunWriter writer{flags.out_dir, "test-fuchsian", flags.echo("g", g_id)};
  ScalarField g;
  g.dim = 3;
  if (g_id == "quartic") {
    g = make_clock("quartic", 3);
  } else if (g_id == "growth2") {
    g.eval = [](const Vector& x) {
      const double r = 1.0 + x.norm();
      return r * r;
    };
  } else if (g_id == "one") {
    g = constant_field(3, 1.0);
  } else {
    throw std::invalid_argument("unknown g '" + g_id +
                                "' (quartic|growth2|one)");
  }
  Vector x0 = Vector::Zero(3);
  if (!flags.x0_text.empty()) x0 = parse_point(flags.x0_text);
  QuadratureConfig quad;
  const FuchsianReport report = fuchsian_test(g, x0, 3, quad);
  writer.write(ordered_json{{"outcome", to_string(report.outcome)},
                            {"converges", to_string(report.converges)},
                            {"integral_value", report.value},
                            {"growth_floor", report.growth_floor},
                            {"diagnostic", report.diagnostic}});
  std::cout << "fuchsian test: " << to_string(report.outcome) << "\n";
  return report.outcome == Outcome::Inconclusive ? kExitInconclusive
                                                 : kExitOk;
}

int cmd_test_radial(const SimFlags& flags, double p, const std::string& s_id,
                    double x0_norm) {
  RunWriter writer{flags.out_dir, "test-radial", flags.echo()};
  writer.config["p"] = p;
  writer.config["s"] = s_id;
  writer.config["x0_norm"] = x0_norm;
  ScalarField s;
  if (!s_id.empty()) {
    if (s_id == "quartic") {
      s = make_profile([](double r) { return 2.0 + r * r * r * r; });
    } else {
      throw std::invalid_argument("unknown profile '" + s_id + "'");
    }
  } else {
    s = make_profile([p](double r) { return std::pow(1.0 + r, p); });
  }
  QuadratureConfig quad;
  const RadialReport report = radial_explosion_test(s, x0_norm, quad);
  writer.write(ordered_json{{"outcome", to_string(report.outcome)},
                            {"converges", to_string(report.converges)},
                            {"integral_value", report.value}});
  std::cout << "radial test: " << to_string(report.outcome) << "\n";
  return report.outcome == Outcome::Inconclusive ? kExitInconclusive
                                                 : kExitOk;
}

int cmd_test_feller(const SimFlags& flags) {
  RunWriter writer{flags.out_dir, "test-feller", flags.echo()};
  const ZooModel model = flags.resolve_model();
  if (model.field.dim != 1)
    throw std::invalid_argument("feller test needs a one-dimensional model");
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
  QuadratureConfig quad;
  const FellerReport report = feller_test_1d(a, b, model.x0[0], quad);
  writer.write(
      ordered_json{{"verdict", to_string(report.verdict)},
                   {"v_plus", to_string(report.plus.v_finite)},
                   {"v_minus", to_string(report.minus.v_finite)}});
  std::cout << "feller test: " << to_string(report.verdict) << "\n";
  return report.verdict == FellerVerdict::Undetermined ? kExitInconclusive
                                                       : kExitOk;
}

int cmd_dichotomy(const SimFlags& flags, const std::string& starts_text) {
  RunWriter writer{flags.out_dir, "dichotomy",
                   flags.echo("starts", starts_text)};
  const ZooModel model = flags.resolve_model();
  DichotomyConfig cfg;
  cfg.sim = flags.sim_config();

  if (!starts_text.empty()) {
    std::vector<Vector> starts;
    std::stringstream stream(starts_text);
    std::string item;
    while (std::getline(stream, item, ';')) starts.push_back(parse_point(item));
    const MultiStartReport report =
        multi_start_experiment(model.field, starts, flags.n_paths, cfg);
    ordered_json rows = ordered_json::array();
    bool any_inconclusive = false;
    for (const MultiStartRow& row : report.rows) {
      rows.push_back({{"start", format_point(row.start)},
                      {"verdict", evidence_json(row.verdict)}});
      any_inconclusive |= row.verdict.outcome == Outcome::Inconclusive;
      std::cout << format_point(row.start) << " -> "
                << to_string(row.verdict.outcome) << "\n";
    }
    writer.write(ordered_json{
        {"rows", std::move(rows)},
        {"all_agree", report.all_agree},
        {"ellipticity_probe", report.ellipticity_probe_passed}});
    return any_inconclusive || !report.all_agree ? kExitInconclusive : kExitOk;
  }

  const Verdict verdict =
      dichotomy_verdict(model.field, model.x0, flags.n_paths, cfg);
  writer.write(evidence_json(verdict));
  std::cout << "dichotomy verdict: " << to_string(verdict.outcome) << "\n";
  return verdict.outcome == Outcome::Inconclusive ? kExitInconclusive
                                                  : kExitOk;
}

int cmd_market(const SimFlags& flags, const std::string& vol,
               const std::string& ladder_text) {
  RunWriter writer{flags.out_dir, "market", flags.echo("vol", vol)};
  MarketSpec spec;
  spec.base.dim = 1;
  spec.asset = 0;
  if (vol == "unit") {
    spec.base.iso_diffusion = [](const Vector&) { return 1.0; };
  } else if (vol == "quad") {
    spec.base.iso_diffusion = [](const Vector& x) {
      return 1.0 + x[0] * x[0];
    };
  } else if (vol == "quartic") {
    spec.base.iso_diffusion = [](const Vector& x) {
      const double x2 = x[0] * x[0];
      return 1.0 + x2 * x2;
    };
  } else {
    throw std::invalid_argument("unknown volatility '" + vol +
                                "' (unit|quad|quartic)");
  }
  spec.x0 = Vector::Zero(1);
  if (!flags.x0_text.empty()) spec.x0 = parse_point(flags.x0_text);

  std::vector<double> ladder;
  {
    std::stringstream stream(ladder_text);
    std::string item;
    while (std::getline(stream, item, ',')) ladder.push_back(std::stod(item));
  }
  const SimConfig cfg = flags.sim_config();
  const std::vector<LadderStat> stats =
      asset_ladder(spec, flags.n_paths, ladder, cfg);
  const Verdict verdict = martingale_measure_check(spec, flags.n_paths, cfg);

  ScalarField a_profile;
  a_profile.dim = 1;
  a_profile.eval = [iso = spec.base.iso_diffusion](const Vector& x) {
    return iso(x);
  };
  QuadratureConfig quad;
  const OneDimMartReport one_dim = one_dim_mart_criterion(a_profile, quad);

  std::ostringstream csv;
  csv << "t,mean,std_error,median\n";
  for (const LadderStat& pt : stats)
    csv << pt.t << "," << pt.mean << "," << pt.std_error << "," << pt.median
        << "\n";
  const std::string csv_text = csv.str();
  {
    std::filesystem::create_directories(flags.out_dir);
    std::ofstream file(std::filesystem::path(flags.out_dir) / "ladder.csv");
    file << csv_text;
  }

  ordered_json ladder_json = ordered_json::array();
  for (const LadderStat& pt : stats)
    ladder_json.push_back({{"t", pt.t},
                           {"mean", pt.mean},
                           {"std_error", pt.std_error},
                           {"median", pt.median}});
  writer.write(ordered_json{
      {"verdict", evidence_json(verdict)},
      {"ladder", std::move(ladder_json)},
      {"one_dim_martingale", to_string(one_dim.verdict)}});
  std::cout << "market verdict: " << to_string(verdict.outcome)
            << ", one-dim criterion: " << to_string(one_dim.verdict) << "\n";
  return verdict.outcome == Outcome::Inconclusive ? kExitInconclusive
                                                  : kExitOk;
}

int cmd_counterexample(const SimFlags& flags, const std::string& rho_id,
                       int balls, int probe_points) {
  RunWriter writer{flags.out_dir, "counterexample", flags.echo("rho", rho_id)};
  writer.config["balls"] = balls;
  writer.config["probe_points"] = probe_points;
  const ZooModel model =
      make_model("counterexample:rho=" + rho_id +
                 ",balls=" + std::to_string(balls));
  const ScalarField rho =
      rho_id == "linear"
          ? make_profile([](double t) { return 1.0 + t; })
          : (rho_id == "quadratic"
                 ? make_profile([](double t) { return 1.0 + t * t; })
                 : make_profile([](double t) { return std::exp(t); }));
  const Counterexample built = build_counterexample_g(rho, 3, balls);

  GaussianStream stream(derive_seed(flags.seed, 0xCE), 0);
  std::size_t failures = 0;
  for (int k = 0; k < probe_points; ++k) {
    stream.begin_step(static_cast<std::uint64_t>(k));
    Vector dir(3);
    for (int i = 0; i < 3; ++i) dir[i] = stream.next();
    if (dir.norm() < 1e-12) continue;
    const double t = double(k) / std::max(1, probe_points - 1);
    const double radius =
        1e-2 * std::pow(2.0 * built.spec.center_norms.back() / 1e-2, t);
    const Vector x = radius / dir.norm() * dir;
    if (built.g(x) <
        (1.0 + x.squaredNorm()) / rho(x.norm()) * (1.0 - 1e-12))
      ++failures;
  }

  const SimConfig cfg = flags.sim_config();
  const ExplosionEstimate est = estimate_explosion_prob(
      model.field, Vector::Zero(3), flags.n_paths, cfg);
  const std::vector<double> sums = divergence_partial_sums(built.spec);
  bool monotone = true;
  for (std::size_t i = 1; i < sums.size(); ++i)
    if (!(sums[i] > sums[i - 1])) monotone = false;

  writer.write(ordered_json{{"pointwise_bound_failures", failures},
                            {"explosion_fraction", est.p_hat},
                            {"divergence_partial_sums", sums},
                            {"partial_sums_monotone", monotone}});
  std::cout << "counterexample: bound failures " << failures
            << ", explosion fraction " << est.p_hat << "\n";
  const bool conclusive = failures == 0 && est.p_hat >= 0.9 && monotone;
  return conclusive ? kExitOk : kExitInconclusive;
}

int cmd_accept(const std::string& out_dir, bool quick, std::uint64_t seed) {
  RunWriter writer{out_dir, "accept",
                   ordered_json{{"quick", quick}, {"seed", seed}}};
  const AcceptanceReport report = run_acceptance(quick, seed, true, &std::cout);
  writer.write(acceptance_json(report, true));
  return report.all_passed() ? kExitOk : kExitError;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"explosion, time change and absolute continuity of "
               "multidimensional diffusions"};
  app.require_subcommand(1);
  app.set_config("--config", "", "configuration file (key = value tables)");

  auto* simulate = app.add_subcommand("simulate", "simulate paths of a model");
  SimFlags sim_flags;
  sim_flags.n_paths = 100;
  sim_flags.attach(simulate);
  std::string sim_clock;
  int dump_paths = 0;
  simulate->add_option("--f", sim_clock,
                       "clock density id (one|const:k|inv-quartic|quartic)");
  simulate->add_option("--dump-paths", dump_paths,
                       "write the first k trajectories as CSV");

  auto* verify = app.add_subcommand(
      "verify-timechange", "compare the clock law with the changed problem");
  SimFlags verify_flags;
  verify_flags.attach(verify);
  std::string verify_clock = "inv-quartic";
  double step_direct = -1.0;
  verify->add_option("--f", verify_clock, "clock density id");
  verify->add_option("--step-direct", step_direct,
                     "step for the changed problem (default --step)");

  auto* test = app.add_subcommand("test", "analytic integral tests");
  test->require_subcommand(1);

  auto* kh = test->add_subcommand("khasminskii", "nested-integral test");
  SimFlags kh_flags;
  kh_flags.attach(kh);
  double kh_alpha = std::numeric_limits<double>::quiet_NaN();
  double kh_beta = std::numeric_limits<double>::quiet_NaN();
  double kh_lo = 0.5;
  kh->add_option("--alpha", kh_alpha, "A(u) = u^alpha");
  kh->add_option("--beta", kh_beta, "B(u) = beta/u");
  kh->add_option("--lo", kh_lo, "lower limit of the nested integral");

  auto* fuchs = test->add_subcommand("fuchsian", "Newtonian-kernel test");
  SimFlags fuchs_flags;
  fuchs_flags.attach(fuchs, false);
  std::string fuchs_g = "quartic";
  fuchs->add_option("--g", fuchs_g, "density id (quartic|growth2|one)");

  auto* radial = test->add_subcommand("radial", "radial profile test");
  SimFlags radial_flags;
  radial_flags.attach(radial, false);
  double radial_p = 3.0;
  std::string radial_s;
  double radial_x0 = 1.0;
  radial->add_option("--p", radial_p, "profile (1+r)^p");
  radial->add_option("--s", radial_s, "named profile (quartic)");
  radial->add_option("--x0norm", radial_x0, "lower integration limit");

  auto* feller = test->add_subcommand("feller", "one-dimensional test");
  SimFlags feller_flags;
  feller_flags.attach(feller);

  auto* dichotomy = app.add_subcommand(
      "dichotomy", "three-route absolute continuity/singularity verdict");
  SimFlags dich_flags;
  dich_flags.attach(dichotomy);
  std::string starts_text;
  dichotomy->add_option("--starts", starts_text,
                        "semicolon-separated start points");

  auto* market = app.add_subcommand("market", "martingale-measure check");
  SimFlags market_flags;
  market_flags.attach(market, false);
  std::string market_vol = "unit";
  std::string market_ladder = "1,5,20,50";
  market->add_option("--vol", market_vol, "volatility (unit|quad|quartic)");
  market->add_option("--ladder", market_ladder, "mean checkpoints");

  auto* counter = app.add_subcommand("counterexample",
                                     "slow-growth counterexample checks");
  SimFlags counter_flags;
  counter_flags.n_paths = 500;
  counter_flags.attach(counter, false);
  std::string counter_rho = "linear";
  int counter_balls = 6;
  int counter_probe = 10000;
  counter->add_option("--rho", counter_rho, "profile (linear|quadratic|exp)");
  counter->add_option("--balls", counter_balls, "number of generated balls");
  counter->add_option("--probe", counter_probe, "probe grid size");

  auto* accept = app.add_subcommand("accept", "run the acceptance suite");
  bool accept_quick = false;
  std::string accept_out = "out";
  std::uint64_t accept_seed = 0;
  accept->add_flag("--quick", accept_quick, "reduced path counts");
  accept->add_option("--out", accept_out, "output directory");
  accept->add_option("--seed", accept_seed, "master seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_flags, sim_clock, dump_paths);
    if (verify->parsed())
      return cmd_verify_timechange(verify_flags, verify_clock, step_direct);
    if (kh->parsed()) return cmd_test_khasminskii(kh_flags, kh_alpha, kh_beta, kh_lo);
    if (fuchs->parsed()) return cmd_test_fuchsian(fuchs_flags, fuchs_g);
    if (radial->parsed())
      return cmd_test_radial(radial_flags, radial_p, radial_s, radial_x0);
    if (feller->parsed()) return cmd_test_feller(feller_flags);
    if (dichotomy->parsed()) return cmd_dichotomy(dich_flags, starts_text);
    if (market->parsed())
      return cmd_market(market_flags, market_vol, market_ladder);
    if (counter->parsed())
      return cmd_counterexample(counter_flags, counter_rho, counter_balls,
                                counter_probe);
    if (accept->parsed())
      return cmd_accept(accept_out, accept_quick, accept_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace perpetua
