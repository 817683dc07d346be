#include <doctest.h>

#include <cmath>

#include "perpetua/fields.hpp"
#include "perpetua/zoo.hpp"

using namespace perpetua;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector x(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) x[i++] = v;
  return x;
}

}  // namespace

TEST_CASE("probe constant coefficients") {
  CoefficientField field;
  field.dim = 1;
  field.iso_diffusion = [](const Vector&) { return 1.0; };
  const RegularityReport report = probe_regularity(field, {1.0, 2.0}, 8);
  CHECK(report.passed());
  for (const ShellStats& shell : report.shells) {
    CHECK(shell.sup_drift_norm == 0.0);
    CHECK(shell.sup_diffusion_opnorm == doctest::Approx(1.0));
    CHECK(shell.min_diffusion_eig == doctest::Approx(1.0));
  }
}

TEST_CASE("vanishing diffusion at the origin fails the positivity probe") {
  CoefficientField field;
  field.dim = 2;
  field.iso_diffusion = [](const Vector& x) { return x.norm(); };
  field.clock = ScalarField{2, [](const Vector& x) { return x.norm(); }, 0.0};
  const RegularityReport report = probe_regularity(field, {0.0, 1.0}, 8);
  CHECK_FALSE(report.clock_positive);
  CHECK(report.shells.front().min_diffusion_eig == doctest::Approx(0.0));
}

TEST_CASE("quartic pair has energy 1/3 on the unit sphere") {
  const ZooModel model = make_model("fuchsian:g=quartic");
  const RegularityReport report = probe_regularity(model.field, {1.0}, 32);
  CHECK(report.passed());
  CHECK(report.shells.front().inf_girsanov_energy ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(report.shells.front().sup_girsanov_energy ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("non-finite coefficients are reported with the point") {
  CoefficientField field;
  field.dim = 1;
  field.iso_diffusion = [](const Vector& x) {
    return x[0] >= 1.0 ? std::numeric_limits<double>::infinity() : 1.0;
  };
  const RegularityReport report = probe_regularity(field, {1.0}, 4);
  CHECK_FALSE(report.all_finite);
  REQUIRE_FALSE(report.diagnostics.empty());
  CHECK(report.diagnostics.front().find("non-finite") != std::string::npos);
}

TEST_CASE("time change rescales both coefficients") {
  CoefficientField field;
  field.dim = 2;
  field.iso_diffusion = [](const Vector&) { return 1.0; };

  SUBCASE("identity clock") {
    const CoefficientField changed =
        time_change_coeffs(field, constant_field(2, 1.0));
    const Vector x = vec({0.3, -1.2});
    CHECK(changed.diffusion_at(x).isApprox(field.diffusion_at(x)));
  }
  SUBCASE("quartic clock inflates the diffusion") {
    ScalarField f;
    f.dim = 2;
    f.eval = [](const Vector& x) {
      const double r2 = x.squaredNorm();
      return 1.0 / (2.0 + r2 * r2);
    };
    const CoefficientField changed = time_change_coeffs(field, f);
    const Vector x = vec({1.0, 0.0});
    CHECK(changed.diffusion_at(x)(0, 0) == doctest::Approx(3.0));
    CHECK(changed.drift_at(x).norm() == 0.0);
  }
  SUBCASE("constant clock scales by 1/k") {
    field.drift = [](const Vector& x) { return (2.0 * x).eval(); };
    const CoefficientField changed =
        time_change_coeffs(field, constant_field(2, 4.0));
    const Vector x = vec({1.0, 1.0});
    CHECK(changed.diffusion_at(x)(0, 0) == doctest::Approx(0.25));
    CHECK(changed.drift_at(x)[0] == doctest::Approx(0.5));
  }
  SUBCASE("nonpositive clock names the point") {
    ScalarField bad;
    bad.dim = 2;
    bad.eval = [](const Vector& x) { return x[0]; };
    const CoefficientField changed = time_change_coeffs(field, bad);
    CHECK_THROWS_WITH_AS(changed.diffusion_at(vec({-1.0, 0.0})),
                         doctest::Contains("(-1, 0)"), std::domain_error);
  }
}

TEST_CASE("time change by f then 1/f returns the field") {
  const ZooModel model = make_model("quartic3");
  ScalarField f;
  f.dim = 3;
  f.eval = [](const Vector& x) { return 1.0 / (1.0 + x.squaredNorm()); };
  ScalarField f_inv;
  f_inv.dim = 3;
  f_inv.eval = [](const Vector& x) { return 1.0 + x.squaredNorm(); };
  const CoefficientField round =
      time_change_coeffs(time_change_coeffs(model.field, f), f_inv);
  for (double r : {0.0, 0.7, 2.5, 10.0}) {
    const Vector x = vec({r, -r, 0.5 * r});
    const Matrix expect = model.field.diffusion_at(x);
    const Matrix got = round.diffusion_at(x);
    CHECK((got - expect).norm() <= 1e-12 * expect.norm());
  }
}

TEST_CASE("generator on test functions") {
  SUBCASE("squared norm under pure diffusion counts the dimension") {
    CoefficientField field;
    field.dim = 3;
    field.iso_diffusion = [](const Vector&) { return 1.0; };
    CHECK(generator_apply(field, squared_norm_function(), vec({1, 2, 3})) ==
          doctest::Approx(3.0));
  }
  SUBCASE("coordinate function reads off the drift") {
    CoefficientField field;
    field.dim = 2;
    field.iso_diffusion = [](const Vector& x) { return 1.0 + x.squaredNorm(); };
    field.drift = [](const Vector& x) { return (3.0 * x).eval(); };
    CHECK(generator_apply(field, coordinate_function(0), vec({2.0, -1.0})) ==
          doctest::Approx(6.0));
  }
  SUBCASE("linear drift doubles the squared norm") {
    CoefficientField field;
    field.dim = 2;
    field.iso_diffusion = [](const Vector&) { return 1.0; };
    field.drift = [](const Vector& x) { return x; };
    CHECK(generator_apply(field, squared_norm_function(), vec({1.0, 1.0})) ==
          doctest::Approx(6.0));
  }
}

TEST_CASE("radial fields") {
  SUBCASE("unit profile gives Brownian coefficients") {
    const CoefficientField field =
        make_radial_field(make_profile([](double) { return 1.0; }), 3);
    CHECK(field.diffusion_at(vec({1, 2, 2})).isIdentity(1e-14));
  }
  SUBCASE("cubic profile at radius one") {
    const CoefficientField field = make_radial_field(
        make_profile([](double r) { return std::pow(1.0 + r, 3.0); }), 3);
    CHECK(field.diffusion_at(vec({1, 0, 0}))(1, 1) == doctest::Approx(8.0));
  }
  SUBCASE("quartic profile reproduces the quartic pair diffusion") {
    const CoefficientField field = make_radial_field(
        make_profile([](double r) { return 2.0 + r * r * r * r; }), 3);
    const Vector x = vec({0.3, -0.4, 1.1});
    const double r2 = x.squaredNorm();
    CHECK(field.iso_diffusion(x) == doctest::Approx(2.0 + r2 * r2));
  }
}

TEST_CASE("zoo diffusions are exactly symmetric at probed points") {
  for (const std::string& id : zoo_model_ids()) {
    const ZooModel model = make_model(id);
    const RegularityReport report =
        probe_regularity(model.field, {0.5, 1.0, 3.0}, 16);
    for (const ShellStats& shell : report.shells) {
      CHECK(shell.max_asymmetry == 0.0);
    }
  }
}

TEST_CASE("psd square root rejects indefinite matrices") {
  Matrix bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(psd_sqrt(bad, Vector::Zero(2)), std::runtime_error);
  Matrix ok(2, 2);
  ok << 2.0, 1.0, 1.0, 2.0;
  const Matrix root = psd_sqrt(ok, Vector::Zero(2));
  CHECK((root * root - ok).norm() < 1e-12);
}
