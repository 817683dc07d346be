#include <doctest.h>

#include <cmath>

#include "perpetua/market.hpp"

using namespace perpetua;

namespace {

MarketSpec flat_market() {
  MarketSpec spec;
  spec.base.dim = 1;
  spec.base.iso_diffusion = [](const Vector&) { return 1.0; };
  spec.x0 = Vector::Zero(1);
  spec.asset = 0;
  return spec;
}

}  // namespace

TEST_CASE("price path starts at one and stays positive") {
  const MarketSpec spec = flat_market();
  SimConfig cfg;
  cfg.step = 1e-2;
  cfg.horizon = 5.0;
  const AssetPath path = simulate_asset(spec, cfg);
  CHECK(path.s_values.front() == 1.0);
  for (double s : path.s_values) CHECK(s > 0.0);
}

TEST_CASE("flat volatility price equals the exponential of the state") {
  const MarketSpec spec = flat_market();
  SimConfig cfg;
  cfg.step = 1e-2;
  cfg.horizon = 5.0;
  cfg.seed = 3;
  const AssetPath asset = simulate_asset(spec, cfg);
  const PathSample path = simulate_path(spec.base, spec.x0, cfg);
  REQUIRE(asset.times.size() == path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double expect =
        std::exp(path.states(0, i) - 0.5 * path.times[i]);
    CHECK(asset.s_values[i] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("anisotropic second coordinate leaves the first asset alone") {
  MarketSpec spec;
  spec.base.dim = 2;
  spec.base.diffusion = [](const Vector& x) {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0 + 4.0 * x[1] * x[1];
    return a;
  };
  spec.x0 = Vector::Zero(2);
  spec.asset = 0;
  SimConfig cfg;
  cfg.step = 1e-2;
  cfg.horizon = 3.0;
  const AssetPath asset = simulate_asset(spec, cfg);
  const PathSample path = simulate_path(spec.base, spec.x0, cfg);
  REQUIRE(asset.times.size() == path.size());
  // a_11 = 1, so log S = X^1 - t/2 exactly along the grid
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double expect =
        std::exp(path.states(0, i) - 0.5 * path.times[i]);
    CHECK(asset.s_values[i] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("flat volatility mean ladder and long-run collapse") {
  const MarketSpec spec = flat_market();
  SimConfig cfg;
  cfg.step = 1e-2;
  cfg.horizon = 50.0;
  const std::vector<LadderStat> ladder =
      asset_ladder(spec, 1500, {1.0, 5.0, 50.0}, cfg);
  CHECK(std::abs(ladder[0].mean - 1.0) <= 3.0 * ladder[0].std_error);
  CHECK(std::abs(ladder[1].mean - 1.0) <= 3.0 * ladder[1].std_error);
  CHECK(ladder[2].median < 0.01);
}

TEST_CASE("flat volatility is not a martingale measure on infinite horizon") {
  const MarketSpec spec = flat_market();
  SimConfig cfg;
  cfg.step = 1e-2;
  cfg.horizon = 30.0;
  const Verdict verdict = martingale_measure_check(spec, 1000, cfg);
  CHECK(verdict.outcome == Outcome::Singular);
  for (const Evidence& e : verdict.evidence) {
    if (e.criterion.rfind("auxiliary explosion", 0) == 0)
      CHECK(e.value <= 0.02);
  }
}

TEST_CASE("runaway volatility refuses the conservativeness hypothesis") {
  MarketSpec spec;
  spec.base.dim = 1;
  spec.base.iso_diffusion = [](const Vector& x) {
    const double x2 = x[0] * x[0];
    return 1.0 + x2 * x2;
  };
  spec.x0 = Vector::Zero(1);
  spec.asset = 0;
  SimConfig cfg;
  cfg.step = 1e-2;
  cfg.horizon = 200.0;
  const Verdict verdict = martingale_measure_check(spec, 500, cfg);
  CHECK(verdict.outcome == Outcome::Inconclusive);
  bool refused = false;
  for (const Evidence& e : verdict.evidence)
    if (e.note.find("conservative") != std::string::npos) refused = true;
  CHECK(refused);
}

TEST_CASE("drifted bases are rejected") {
  MarketSpec spec = flat_market();
  spec.base.drift = [](const Vector& x) {
    return Vector::Constant(x.size(), 1.0).eval();
  };
  SimConfig cfg;
  CHECK_THROWS_AS(simulate_asset(spec, cfg), std::invalid_argument);
}

TEST_CASE("one-dimensional martingale criterion") {
  QuadratureConfig quad;
  CHECK(one_dim_mart_criterion(make_profile([](double) { return 1.0; },
                                            -1e300),
                               quad)
            .verdict == OneDimMartingale::Martingale);
  CHECK(one_dim_mart_criterion(
            make_profile([](double x) { return 1.0 + x * x; }, -1e300), quad)
            .verdict == OneDimMartingale::StrictLocal);
  const OneDimMartReport quartic = one_dim_mart_criterion(
      make_profile(
          [](double x) {
            const double x2 = x * x;
            return 1.0 + x2 * x2;
          },
          -1e300),
      quad);
  CHECK(quartic.verdict == OneDimMartingale::StrictLocal);
  CHECK(quartic.negative_tail_diverges == TriState::No);
}
