#include <doctest.h>

#include <cmath>

#include "perpetua/harness.hpp"
#include "perpetua/zoo.hpp"

using namespace perpetua;

TEST_CASE("identity clock reproduces the model exactly") {
  const ZooModel model = make_model("quartic3");
  SimConfig cfg;
  cfg.step = 4e-3;
  cfg.horizon = 30.0;
  const TimechangeLawReport report = verify_timechange_law(
      model.field, constant_field(3, 1.0), model.x0, 300, cfg, cfg);
  CHECK(report.ks.d_statistic == 0.0);
  CHECK(report.ks.mass_gap == 0.0);
  CHECK(report.clock_mean == doctest::Approx(report.direct_mean));
}

TEST_CASE("constant clock rescales the explosion law") {
  const ZooModel model = make_model("quartic3");
  SimConfig cfg;
  cfg.step = 4e-3;
  cfg.horizon = 30.0;
  const TimechangeLawReport report = verify_timechange_law(
      model.field, constant_field(3, 2.0), model.x0, 500, cfg, cfg);
  CHECK(report.ks.d_statistic < ks_critical_value(500, 500));
  CHECK(report.clock_mean ==
        doctest::Approx(report.direct_mean).epsilon(0.1));
}

TEST_CASE("quartic clock of brownian motion matches the changed problem") {
  const ZooModel model = make_model("bm3");
  SimConfig cfg_base;
  cfg_base.step = 1e-2;
  cfg_base.horizon = 600.0;
  SimConfig cfg_direct = cfg_base;
  cfg_direct.step = 4e-3;
  const TimechangeLawReport report =
      verify_timechange_law(model.field, make_clock("inv-quartic", 3),
                            model.x0, 500, cfg_base, cfg_direct);
  CHECK(report.ks.d_statistic < ks_critical_value(500, 500));
  CHECK(report.ks.mass_gap < 0.05);
  CHECK(report.clock_mean == doctest::Approx(1.1107207).epsilon(0.15));
  CHECK(report.direct_mean == doctest::Approx(1.1107207).epsilon(0.15));
  CHECK_FALSE(report.low_power);
}

TEST_CASE("multi-start agreement") {
  DichotomyConfig cfg;
  cfg.sim.step = 1e-2;
  cfg.sim.horizon = 30.0;

  SUBCASE("quartic pair from three starts") {
    const ZooModel model = make_model("fuchsian:g=quartic");
    std::vector<Vector> starts{Vector::Zero(3), Vector::Zero(3),
                               Vector::Zero(3)};
    starts[1][0] = 1.0;
    starts[2][0] = 3.0;
    const MultiStartReport report =
        multi_start_experiment(model.field, starts, 1000, cfg);
    CHECK(report.all_agree);
    CHECK(report.ellipticity_probe_passed);
    for (const MultiStartRow& row : report.rows)
      CHECK(row.verdict.outcome == Outcome::AbsolutelyContinuous);
  }
  SUBCASE("explosive radial model from two starts") {
    const ZooModel model = make_model("radial:p=3");
    std::vector<Vector> starts{Vector::Zero(3), Vector::Zero(3)};
    starts[0][0] = 1.0;
    starts[1][0] = 2.0;
    cfg.sim.step = 4e-3;
    cfg.sim.horizon = 50.0;
    const MultiStartReport report =
        multi_start_experiment(model.field, starts, 300, cfg);
    CHECK(report.all_agree);
    for (const MultiStartRow& row : report.rows)
      CHECK(row.verdict.outcome == Outcome::Explosive);
  }
  SUBCASE("a single start agrees trivially") {
    const ZooModel model = make_model("radial:p=3");
    std::vector<Vector> starts{model.x0};
    cfg.sim.step = 4e-3;
    cfg.sim.horizon = 50.0;
    const MultiStartReport report =
        multi_start_experiment(model.field, starts, 300, cfg);
    CHECK(report.all_agree);
  }
}
