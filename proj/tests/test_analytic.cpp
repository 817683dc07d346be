#include <doctest.h>

#include <cmath>

#include "perpetua/analytic.hpp"
#include "perpetua/zoo.hpp"

using namespace perpetua;

namespace {

// Closed-form convergence of the nested integral for A = u^alpha,
// B = beta/u: with C(z) ~ z^beta the inner integral grows like
// z^{beta-alpha+1} (log at the boundary), so the outer integrand decays
// like z^{1-alpha} when beta >= alpha-1 and like z^{-beta} otherwise.
bool power_law_converges(double alpha, double beta) {
  if (beta >= alpha - 1.0) return alpha > 2.0;
  return beta > 1.0;
}

}  // namespace

TEST_CASE("nested integral classifier on the worked examples") {
  SUBCASE("flat A and B diverge linearly") {
    const TailReport report = nested_integral_converges(power_law_spec(0, 0));
    CHECK(report.verdict == TriState::No);
  }
  SUBCASE("cubic A with logarithmic inner integral converges") {
    const TailReport report = nested_integral_converges(power_law_spec(3, 2));
    CHECK(report.verdict == TriState::Yes);
  }
  SUBCASE("quadratic A alone diverges") {
    const TailReport report = nested_integral_converges(power_law_spec(2, 0));
    CHECK(report.verdict == TriState::No);
  }
}

TEST_CASE("decided power-law verdicts always match the closed form") {
  for (double alpha : {1.5, 2.0, 2.5, 3.0}) {
    for (double beta : {0.0, 1.0, 2.0}) {
      const TailReport report =
          nested_integral_converges(power_law_spec(alpha, beta));
      const TriState expected =
          power_law_converges(alpha, beta) ? TriState::Yes : TriState::No;
      if (report.verdict != TriState::Undetermined) {
        INFO("alpha=", alpha, " beta=", beta);
        CHECK(report.verdict == expected);
      }
    }
  }
}

TEST_CASE("scaling A leaves the verdict alone") {
  for (double alpha : {1.5, 3.0}) {
    for (double beta : {0.0, 2.0}) {
      const TailReport base =
          nested_integral_converges(power_law_spec(alpha, beta));
      for (double k : {2.0, 10.0}) {
        IntegralTestSpec spec = power_law_spec(alpha, beta);
        spec.A = make_profile(
            [alpha, k](double u) { return k * std::pow(u, alpha); }, 0.5);
        const TailReport scaled = nested_integral_converges(spec);
        CHECK(scaled.verdict == base.verdict);
      }
    }
  }
}

TEST_CASE("newtonian kernel test on quartic density") {
  QuadratureConfig quad;
  const FuchsianReport report =
      fuchsian_test(make_clock("quartic", 3), Vector::Zero(3), 3, quad);
  CHECK(report.converges == TriState::Yes);
  CHECK(report.outcome == Outcome::Explosive);
  // 4 pi int r/(2+r^4) dr = pi^2 / sqrt(2)
  CHECK(report.value ==
        doctest::Approx(M_PI * M_PI / std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("quadratic growth densities are conservative") {
  QuadratureConfig quad;
  ScalarField growth;
  growth.dim = 3;
  growth.eval = [](const Vector& x) {
    const double r = 1.0 + x.norm();
    return r * r;
  };
  const FuchsianReport quadratic =
      fuchsian_test(growth, Vector::Zero(3), 3, quad);
  CHECK(quadratic.converges == TriState::No);
  CHECK(quadratic.outcome == Outcome::Conservative);

  const FuchsianReport flat =
      fuchsian_test(constant_field(3, 1.0), Vector::Zero(3), 3, quad);
  CHECK(flat.outcome == Outcome::Conservative);
}

TEST_CASE("radial test on the worked profiles") {
  QuadratureConfig quad;
  CHECK(radial_explosion_test(
            make_profile([](double r) { return std::pow(1.0 + r, 3.0); }),
            1.0, quad)
            .outcome == Outcome::Explosive);
  CHECK(radial_explosion_test(
            make_profile([](double r) { return std::pow(1.0 + r, 2.0); }),
            1.0, quad)
            .outcome == Outcome::Conservative);
  CHECK(radial_explosion_test(make_profile([](double) { return 1.0; }), 1.0,
                              quad)
            .outcome == Outcome::Conservative);
}

TEST_CASE("kernel and radial tests agree on radially symmetric densities") {
  QuadratureConfig quad;
  struct Profile {
    const char* name;
    std::function<double(double)> s;
  };
  const std::vector<Profile> profiles{
      {"quadratic", [](double r) { return std::pow(1.0 + r, 2.0); }},
      {"cubic", [](double r) { return std::pow(1.0 + r, 3.0); }},
      {"quartic", [](double r) { return 2.0 + r * r * r * r; }},
      {"flat", [](double) { return 1.0; }}};
  for (const Profile& profile : profiles) {
    INFO(profile.name);
    ScalarField g;
    g.dim = 3;
    g.eval = [s = profile.s](const Vector& x) { return s(x.norm()); };
    const FuchsianReport kernel = fuchsian_test(g, Vector::Zero(3), 3, quad);
    const RadialReport radial =
        radial_explosion_test(make_profile(profile.s), 0.0, quad);
    CHECK(kernel.outcome == radial.outcome);
  }
}

TEST_CASE("one-dimensional explosion test") {
  QuadratureConfig quad;
  const ScalarField one = make_profile([](double) { return 1.0; });

  SUBCASE("brownian motion is conservative") {
    const FellerReport report = feller_test_1d(one, ScalarField{}, 0.0, quad);
    CHECK(report.verdict == FellerVerdict::ConservativeAS);
  }
  SUBCASE("unit drift stays conservative") {
    const FellerReport report =
        feller_test_1d(one, make_profile([](double) { return 1.0; },
                                         -std::numeric_limits<double>::infinity()),
                       0.0, quad);
    CHECK(report.verdict == FellerVerdict::ConservativeAS);
  }
  SUBCASE("cubic drift explodes through both ends") {
    const FellerReport report = feller_test_1d(
        one, make_profile([](double x) { return x * x * x; },
                          -std::numeric_limits<double>::infinity()),
        0.0, quad);
    CHECK(report.plus.v_finite == TriState::Yes);
    CHECK(report.minus.v_finite == TriState::Yes);
    CHECK(report.verdict == FellerVerdict::ExplodesAS);
  }
  SUBCASE("superlinear volatility without drift stays conservative") {
    const ScalarField a = make_profile(
        [](double x) { return std::pow(1.0 + x * x, 1.5); },
        -std::numeric_limits<double>::infinity());
    const FellerReport report = feller_test_1d(a, ScalarField{}, 0.0, quad);
    CHECK(report.verdict == FellerVerdict::ConservativeAS);
  }
  SUBCASE("one-sided accessibility stays undetermined") {
    // drift pushes to +inf fast enough to reach it, -inf is inaccessible
    const FellerReport report = feller_test_1d(
        one, make_profile([](double x) { return 1.0 + x * x; },
                          -std::numeric_limits<double>::infinity()),
        0.0, quad);
    CHECK(report.plus.v_finite == TriState::Yes);
    CHECK(report.minus.v_finite == TriState::No);
    CHECK(report.verdict == FellerVerdict::Undetermined);
  }
}

namespace {

IntegralTestSpec quartic_envelope() {
  IntegralTestSpec spec;
  spec.A = make_profile(
      [](double u) { return 2.0 * u * (2.0 + 4.0 * u * u); }, 0.5);
  spec.B = make_profile([](double u) { return 3.0 / (2.0 * u); }, 0.5);
  return spec;
}

IntegralTestSpec flat_envelope(double dim) {
  IntegralTestSpec spec;
  spec.A = make_profile([](double u) { return 2.0 * u; }, 0.5);
  spec.B = make_profile([dim](double u) { return dim / (2.0 * u); }, 0.5);
  return spec;
}

}  // namespace

TEST_CASE("envelope verdicts") {
  const std::vector<double> shells{1.0, 2.0, 4.0, 16.0, 64.0};
  SUBCASE("quartic pair is absolutely continuous") {
    const ZooModel model = make_model("fuchsian:g=quartic");
    const Verdict verdict =
        khasminskii_verdict(model.field, model.x0, quartic_envelope(),
                            flat_envelope(3.0), shells);
    CHECK(verdict.outcome == Outcome::AbsolutelyContinuous);
  }
  SUBCASE("unit drift change is singular") {
    const ZooModel model = make_model("pair-bm-drift1");
    const Verdict verdict = khasminskii_verdict(
        model.field, model.x0, flat_envelope(1.0), flat_envelope(1.0), shells);
    CHECK(verdict.outcome == Outcome::Singular);
  }
  SUBCASE("degenerate direction is inconclusive with a named point") {
    CoefficientField field;
    field.dim = 2;
    field.iso_diffusion = [](const Vector&) { return 1.0; };
    field.girsanov = [](const Vector& x) {
      return Vector::Zero(x.size()).eval();
    };
    const Verdict verdict = khasminskii_verdict(
        field, Vector::Zero(2), flat_envelope(2.0), flat_envelope(2.0),
        shells);
    CHECK(verdict.outcome == Outcome::Inconclusive);
    bool found = false;
    for (const Evidence& e : verdict.evidence)
      if (e.note.find("not positive at") != std::string::npos) found = true;
    CHECK(found);
  }
}
