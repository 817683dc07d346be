#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "perpetua/sim.hpp"
#include "perpetua/zoo.hpp"

using namespace perpetua;

TEST_CASE("zero diffusion reproduces the forward Euler solution") {
  CoefficientField field;
  field.dim = 1;
  field.iso_diffusion = [](const Vector&) { return 0.0; };
  field.drift = [](const Vector& x) {
    return Vector::Constant(x.size(), 1.0).eval();
  };
  SimConfig cfg;
  cfg.step = 1e-2;
  cfg.horizon = 1.0;
  const PathSample path = simulate_path(field, Vector::Zero(1), cfg);
  CHECK(path.status == PathStatus::Alive);
  for (std::size_t i = 0; i < path.size(); ++i)
    CHECK(path.states(0, i) == doctest::Approx(path.times[i]).epsilon(1e-13));
  CHECK(path.times.back() == doctest::Approx(1.0));
}

TEST_CASE("brownian motion does not explode") {
  const ZooModel model = make_model("bm3");
  SimConfig cfg;
  cfg.step = 1e-2;
  cfg.horizon = 5.0;
  const ExplosionEstimate est =
      estimate_explosion_prob(model.field, model.x0, 200, cfg);
  CHECK(est.n_exploded == 0);
  CHECK(est.n_truncated == 0);
}

TEST_CASE("superquadratic radial diffusion explodes, quadratic does not") {
  SimConfig cfg;
  cfg.step = 4e-3;
  cfg.horizon = 50.0;
  const ZooModel cubic = make_model("radial:p=3");
  const ExplosionEstimate est3 =
      estimate_explosion_prob(cubic.field, cubic.x0, 200, cfg);
  CHECK(est3.p_hat >= 0.95);

  const ZooModel square = make_model("radial:p=2");
  const ExplosionEstimate est2 =
      estimate_explosion_prob(square.field, square.x0, 200, cfg);
  CHECK(est2.p_hat <= 0.05);
  // runaway-but-slow paths pile up at the truncation radius instead
  CHECK(est2.n_truncated > 40);
  CHECK(est2.inconclusive);
}

TEST_CASE("paths are bit-identical regardless of worker count") {
  const ZooModel model = make_model("quartic3");
  SimConfig cfg;
  cfg.step = 4e-3;
  cfg.horizon = 20.0;
  cfg.seed = 77;

  const PathSample once = simulate_path(model.field, model.x0, cfg);
  const PathSample twice = simulate_path(model.field, model.x0, cfg);
  REQUIRE(once.size() == twice.size());
  CHECK(once.states == twice.states);
  CHECK(once.theta_hat == twice.theta_hat);

  const char* saved = std::getenv("PERPETUA_THREADS");
  const std::string saved_value = saved ? saved : "";
  ::setenv("PERPETUA_THREADS", "1", 1);
  const ExplosionEstimate serial =
      estimate_explosion_prob(model.field, model.x0, 150, cfg);
  ::setenv("PERPETUA_THREADS", "3", 1);
  const ExplosionEstimate threaded =
      estimate_explosion_prob(model.field, model.x0, 150, cfg);
  if (saved) {
    ::setenv("PERPETUA_THREADS", saved_value.c_str(), 1);
  } else {
    ::unsetenv("PERPETUA_THREADS");
  }
  CHECK(serial.n_exploded == threaded.n_exploded);
  CHECK(serial.p_hat == threaded.p_hat);
}

TEST_CASE("level hits are recorded in increasing order") {
  const ZooModel model = make_model("quartic3");
  SimConfig cfg;
  cfg.step = 4e-3;
  cfg.horizon = 20.0;
  for (std::uint64_t p = 0; p < 20; ++p) {
    const PathSample path =
        simulate_path(model.field, model.x0, cfg.with_path(p));
    for (std::size_t i = 1; i < path.level_hits.size(); ++i) {
      CHECK(path.level_hits[i].level > path.level_hits[i - 1].level);
      CHECK(path.level_hits[i].time >= path.level_hits[i - 1].time);
    }
    if (path.status == PathStatus::Exploded)
      CHECK(path.theta_hat <= cfg.horizon);
  }
}

TEST_CASE("martingale defect stays within four standard errors") {
  SimConfig cfg;
  cfg.step = 1e-2;
  cfg.horizon = 2.0;
  const std::vector<double> checkpoints{0.5, 1.0, 2.0};

  SUBCASE("coordinate function under brownian motion") {
    const ZooModel model = make_model("bm2");
    const auto defects = martingale_defect(model.field, model.x0,
                                           coordinate_function(0), 600,
                                           checkpoints, cfg);
    for (const DefectPoint& pt : defects)
      CHECK(std::abs(pt.mean) <= 4.0 * pt.std_error + 1e-12);
  }
  SUBCASE("squared norm under brownian motion") {
    const ZooModel model = make_model("bm3");
    const auto defects = martingale_defect(model.field, model.x0,
                                           squared_norm_function(), 600,
                                           checkpoints, cfg);
    for (const DefectPoint& pt : defects)
      CHECK(std::abs(pt.mean) <= 4.0 * pt.std_error + 1e-12);
  }
  SUBCASE("squared norm with linear drift") {
    CoefficientField field;
    field.dim = 1;
    field.iso_diffusion = [](const Vector&) { return 1.0; };
    field.drift = [](const Vector& x) { return x; };
    const auto defects =
        martingale_defect(field, Vector::Zero(1), squared_norm_function(),
                          600, checkpoints, cfg);
    for (const DefectPoint& pt : defects)
      CHECK(std::abs(pt.mean) <= 4.0 * pt.std_error + 1e-12);
  }
  SUBCASE("coordinate functions across the zoo") {
    for (const std::string& id : zoo_model_ids()) {
      const ZooModel model = make_model(id);
      const auto defects = martingale_defect(model.field, model.x0,
                                             coordinate_function(0), 300,
                                             checkpoints, cfg);
      for (const DefectPoint& pt : defects) {
        INFO(id);
        CHECK(std::abs(pt.mean) <= 4.0 * pt.std_error + 1e-12);
      }
    }
  }
}

TEST_CASE("indefinite diffusion matrices are rejected with the point") {
  CoefficientField field;
  field.dim = 2;
  field.diffusion = [](const Vector&) {
    Matrix a(2, 2);
    a << 1.0, 2.0, 2.0, 1.0;
    return a;
  };
  SimConfig cfg;
  cfg.horizon = 1.0;
  CHECK_THROWS_WITH_AS(simulate_path(field, Vector::Zero(2), cfg),
                       doctest::Contains("not PSD"), std::runtime_error);
}

TEST_CASE("start dimension must match the field") {
  const ZooModel model = make_model("bm2");
  SimConfig cfg;
  CHECK_THROWS_AS(simulate_path(model.field, Vector::Zero(3), cfg),
                  std::invalid_argument);
}

TEST_CASE("grid lands exactly on requested checkpoints") {
  const ZooModel model = make_model("bm1");
  SimConfig cfg;
  cfg.step = 3e-3;
  cfg.horizon = 1.0;
  std::vector<double> seen;
  StepHooks hooks;
  hooks.on_checkpoint = [&seen](double t, const Vector&) {
    seen.push_back(t);
  };
  run_path(model.field, model.x0, cfg, hooks, {0.25, 0.5, 0.75});
  REQUIRE(seen.size() == 3);
  CHECK(seen[0] == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(seen[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(seen[2] == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("config invariants are enforced") {
  SimConfig cfg;
  cfg.truncation_radius = cfg.explosion_radius;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SimConfig{};
  cfg.level_radii = {2.0, 4.0, 4096.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SimConfig{};
  cfg.level_radii = SimConfig::default_levels();
  CHECK_NOTHROW(cfg.validate());
}
