#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "perpetua/rng.hpp"
#include "perpetua/stats.hpp"

using namespace perpetua;

namespace {

EmpiricalLaw law_from(std::vector<double> samples) {
  EmpiricalLaw law;
  law.samples = std::move(samples);
  return law;
}

std::vector<double> exponential_sample(std::uint64_t seed, std::size_t n) {
  GaussianStream stream(seed, 0);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    stream.begin_step(i);
    // exponential via the Gaussian CDF of one draw
    const double u = 0.5 * std::erfc(-stream.next() / std::sqrt(2.0));
    out.push_back(-std::log(1.0 - u * (1.0 - 1e-12)));
  }
  return out;
}

}  // namespace

TEST_CASE("a law against itself has zero distance") {
  const EmpiricalLaw law = law_from(exponential_sample(7, 500));
  const KsResult result = ks_censored(law, law);
  CHECK(result.d_statistic == 0.0);
  CHECK(result.mass_gap == 0.0);
}

TEST_CASE("same distribution stays under the 1% critical value") {
  const EmpiricalLaw a = law_from(exponential_sample(1, 2000));
  const EmpiricalLaw b = law_from(exponential_sample(2, 2000));
  const KsResult result = ks_censored(a, b);
  const double critical = ks_critical_value(2000, 2000);
  CHECK(critical == doctest::Approx(0.0515).epsilon(0.01));
  CHECK(result.d_statistic < critical);
}

TEST_CASE("point masses at different locations are maximally separated") {
  const EmpiricalLaw a = law_from(std::vector<double>(300, 1.0));
  const EmpiricalLaw b = law_from(std::vector<double>(300, 2.0));
  const KsResult result = ks_censored(a, b);
  CHECK(result.d_statistic == doctest::Approx(1.0));
}

TEST_CASE("distance is symmetric and invariant under common rescaling") {
  std::vector<double> xs = exponential_sample(3, 400);
  std::vector<double> ys = exponential_sample(4, 400);
  const KsResult forward = ks_censored(law_from(xs), law_from(ys));
  const KsResult backward = ks_censored(law_from(ys), law_from(xs));
  CHECK(forward.d_statistic == doctest::Approx(backward.d_statistic));

  auto rescale = [](std::vector<double> v) {
    for (double& x : v) x = std::exp(2.0 * x) - 1.0;  // strictly increasing
    return v;
  };
  const KsResult scaled =
      ks_censored(law_from(rescale(xs)), law_from(rescale(ys)));
  CHECK(scaled.d_statistic == doctest::Approx(forward.d_statistic));
}

TEST_CASE("censored mass is split out of the jumps") {
  EmpiricalLaw a = law_from(exponential_sample(5, 400));
  EmpiricalLaw b = a;
  b.n_divergent = 100;  // same finite samples plus extra mass at infinity
  const KsResult result = ks_censored(a, b);
  CHECK(result.mass_gap == doctest::Approx(0.2));
  // sub-distributions differ by the denominator only
  CHECK(result.d_statistic ==
        doctest::Approx(1.0 - 400.0 / 500.0).epsilon(1e-9));
}

TEST_CASE("small laws are rejected") {
  const EmpiricalLaw tiny = law_from({1.0, 2.0});
  CHECK_THROWS_AS(ks_censored(tiny, tiny), std::invalid_argument);
}

TEST_CASE("wilson interval brackets the point estimate") {
  const WilsonInterval ci = wilson_ci(90, 100);
  CHECK(ci.lo < 0.9);
  CHECK(ci.hi > 0.9);
  CHECK(ci.lo > 0.8);
  CHECK(ci.hi < 0.97);
  const WilsonInterval zero = wilson_ci(0, 100);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi > 0.0);
}

TEST_CASE("percentile interpolates") {
  std::vector<double> values{4.0, 1.0, 3.0, 2.0};
  CHECK(percentile(values, 0.5) == doctest::Approx(2.5));
  CHECK(percentile(values, 0.0) == doctest::Approx(1.0));
  CHECK(percentile(values, 1.0) == doctest::Approx(4.0));
}
