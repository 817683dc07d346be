#include <doctest.h>

#include <cmath>

#include "perpetua/girsanov.hpp"
#include "perpetua/zoo.hpp"

using namespace perpetua;

namespace {

// geometric pair: base drift a e_1 cancels against c = -e_1, so the target
// law is driftless and the density is exp(X^1 - x0^1 - t/2) for a = 1
CoefficientField geometric_pair() {
  CoefficientField field;
  field.dim = 1;
  field.iso_diffusion = [](const Vector&) { return 1.0; };
  field.drift = [](const Vector& x) {
    return Vector::Constant(x.size(), 1.0).eval();
  };
  field.girsanov = [](const Vector& x) {
    return Vector::Constant(x.size(), -1.0).eval();
  };
  return field;
}

}  // namespace

TEST_CASE("null direction gives the constant density") {
  CoefficientField field;
  field.dim = 2;
  field.iso_diffusion = [](const Vector&) { return 1.0; };
  field.girsanov = [](const Vector& x) {
    return Vector::Zero(x.size()).eval();
  };
  SimConfig cfg;
  cfg.step = 1e-2;
  cfg.horizon = 2.0;
  const DensityPath path = simulate_density(field, Vector::Zero(2), cfg);
  for (double z : path.z_values) CHECK(z == 1.0);
  CHECK(path.a_theta == 0.0);
}

TEST_CASE("density matches the exponential closed form along the path") {
  const CoefficientField pair = geometric_pair();
  SimConfig cfg;
  cfg.step = 1e-2;
  cfg.horizon = 3.0;
  cfg.seed = 5;
  const DensityPath density = simulate_density(pair, Vector::Zero(1), cfg);

  // the target law is plain Brownian motion; replay it with the same seed
  const ZooModel bm = make_model("bm1");
  SimConfig replay = cfg;
  const PathSample path = simulate_path(bm.field, bm.x0, replay);
  REQUIRE(path.size() == density.times.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double expect =
        std::exp(path.states(0, i) - 0.5 * path.times[i]);
    CHECK(density.z_values[i] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("density path is self-consistent and positive") {
  const CoefficientField pair = geometric_pair();
  SimConfig cfg;
  cfg.step = 1e-2;
  cfg.horizon = 3.0;
  for (std::uint64_t p = 0; p < 20; ++p) {
    const DensityPath path =
        simulate_density(pair, Vector::Zero(1), cfg.with_path(p));
    for (std::size_t i = 0; i < path.times.size(); ++i) {
      CHECK(path.z_values[i] > 0.0);
      CHECK(std::log(path.z_values[i]) + path.stochastic_integral[i] +
                0.5 * path.quadratic_part[i] ==
            doctest::Approx(0.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("stopped densities average to one") {
  const CoefficientField pair = geometric_pair();
  SimConfig cfg;
  cfg.step = 1e-2;
  cfg.horizon = 3.0;
  for (double level : {2.0, 4.0}) {
    const std::size_t n = 2000;
    double sum = 0.0, sum2 = 0.0;
    for (std::uint64_t p = 0; p < n; ++p) {
      const DensityPath path =
          simulate_density(pair, Vector::Zero(1), cfg.with_path(p), level);
      const double z = path.z_values.back();
      sum += z;
      sum2 += z * z;
    }
    const double mean = sum / double(n);
    const double se =
        std::sqrt((sum2 / double(n) - mean * mean) / double(n));
    INFO("stop level ", level);
    CHECK(std::abs(mean - 1.0) <= 3.0 * se);
  }
}

TEST_CASE("uniform integrability probe") {
  SimConfig cfg;
  cfg.step = 1e-2;

  SUBCASE("geometric density concentrates and is not UI") {
    cfg.horizon = 50.0;
    const UiReport report = ui_martingale_check(
        geometric_pair(), Vector::Zero(1), 1000, {1.0, 5.0, 20.0, 50.0}, cfg);
    CHECK(report.uniformly_integrable == TriState::No);
    CHECK(report.ladder.back().tail_share > 0.9);
  }
  SUBCASE("null direction is trivially UI") {
    CoefficientField field;
    field.dim = 1;
    field.iso_diffusion = [](const Vector&) { return 1.0; };
    field.girsanov = [](const Vector& x) {
      return Vector::Zero(x.size()).eval();
    };
    cfg.horizon = 5.0;
    const UiReport report = ui_martingale_check(field, Vector::Zero(1), 1000,
                                                {1.0, 2.0, 5.0}, cfg);
    CHECK(report.uniformly_integrable == TriState::Yes);
  }
  SUBCASE("integrable-energy pair looks UI") {
    const ZooModel model = make_model("fuchsian:g=quartic");
    cfg.horizon = 20.0;
    const UiReport report = ui_martingale_check(model.field, model.x0, 1000,
                                                {2.0, 5.0, 10.0, 20.0}, cfg);
    CHECK(report.uniformly_integrable == TriState::Yes);
  }
}

TEST_CASE("three-route dichotomy") {
  DichotomyConfig cfg;
  cfg.sim.step = 1e-2;
  cfg.sim.horizon = 30.0;

  SUBCASE("quartic pair is absolutely continuous") {
    const ZooModel model = make_model("fuchsian:g=quartic");
    const Verdict verdict =
        dichotomy_verdict(model.field, model.x0, 1000, cfg);
    CHECK(verdict.outcome == Outcome::AbsolutelyContinuous);
  }
  SUBCASE("unit drift change is singular") {
    const ZooModel model = make_model("pair-bm-drift1");
    const Verdict verdict =
        dichotomy_verdict(model.field, model.x0, 1000, cfg);
    CHECK(verdict.outcome == Outcome::Singular);
  }
  SUBCASE("degenerate direction is rejected by the probes") {
    CoefficientField field;
    field.dim = 1;
    field.iso_diffusion = [](const Vector&) { return 1.0; };
    field.girsanov = [](const Vector& x) {
      return Vector::Zero(x.size()).eval();
    };
    CHECK_THROWS_AS(dichotomy_verdict(field, Vector::Zero(1), 1000, cfg),
                    std::invalid_argument);
  }
}

TEST_CASE("verdicts survive a time change of the pair") {
  DichotomyConfig cfg;
  cfg.sim.step = 1e-2;
  cfg.sim.horizon = 30.0;

  auto oscillating = [](int dim) {
    ScalarField f;
    f.dim = dim;
    f.eval = [](const Vector& x) { return 2.0 + std::sin(x[0]); };
    return f;
  };

  SUBCASE("quartic pair under constant and oscillating clocks") {
    const ZooModel model = make_model("fuchsian:g=quartic");
    const Verdict before =
        dichotomy_verdict(model.field, model.x0, 1000, cfg);
    for (const ScalarField& f :
         {constant_field(3, 4.0), oscillating(3)}) {
      const CoefficientField changed = time_change_coeffs(model.field, f);
      const Verdict after = dichotomy_verdict(changed, model.x0, 1000, cfg);
      CHECK(before.outcome == after.outcome);
    }
  }
  SUBCASE("unit-drift pair under constant and oscillating clocks") {
    const ZooModel model = make_model("pair-bm-drift1");
    const Verdict before =
        dichotomy_verdict(model.field, model.x0, 1000, cfg);
    for (const ScalarField& f :
         {constant_field(1, 0.25), oscillating(1)}) {
      const CoefficientField changed = time_change_coeffs(model.field, f);
      const Verdict after = dichotomy_verdict(changed, model.x0, 1000, cfg);
      CHECK(before.outcome == after.outcome);
    }
  }
}
