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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "perpetua/fields.hpp"
#include "perpetua/quadrature.hpp"

namespace perpetua {

enum class Outcome {
  AbsolutelyContinuous,
  Singular,
  Explosive,
  Conservative,
  Inconclusive,
};

std::string to_string(Outcome outcome);

struct Evidence {
  std::string criterion;
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  std::vector<Evidence> evidence;
};

// Radial envelope test data: decides convergence of
//   int_lo^inf  (1/C(z)) int_lo^z C(u)/A(u) du dz,
// with C(z) = exp(int_{c_ref}^z B(u) du).  A must be strictly positive on
// [lo, inf); B may take either sign.
struct IntegralTestSpec {
  ScalarField A;
  ScalarField B;
  double lo = 0.5;
  double c_ref = 1.0;
  QuadratureConfig quad;
};

IntegralTestSpec power_law_spec(double alpha, double beta, double lo = 0.5,
                                double c_ref = 1.0);

// C(z) is accumulated in the log domain, so growing B cannot overflow the
// weight; an overflowing outer integrand still classifies as divergent.
TailReport nested_integral_converges(const IntegralTestSpec& spec);

struct ShellBoundCheck {
  bool satisfied = true;
  std::string violation;  // first violating point, when any
};

// Combines the sampled envelope inequalities with the nested integral
// dichotomy.  Bounds are verified on sampled shells only, so a decided
// verdict carries a "sampled-hypothesis" note in its evidence.
Verdict khasminskii_verdict(const CoefficientField& field, const Vector& x0,
                            const IntegralTestSpec& spec_eq,
                            const IntegralTestSpec& spec_noneq,
                            const std::vector<double>& shell_radii,
                            int samples_per_shell = 64);

struct FuchsianReport {
  TriState converges = TriState::Undetermined;
  Outcome outcome = Outcome::Inconclusive;
  double value = 0.0;  // integral of |x-x0|^{2-d} / g over the probed range
  double growth_floor = 0.0;  // sampled min of g / (1+|x|)^2
  bool growth_condition_plausible = true;
  double angular_spread = 0.0;
  std::string diagnostic;
};

// Newtonian-kernel test for the clock density g in dimension d >= 3:
// convergence of the integral means the time-changed Brownian motion
// explodes; divergence plus (sampled) quadratic growth of g means it does
// not.  Wild angular spread on a contributing shell refuses to decide.
FuchsianReport fuchsian_test(const ScalarField& g, const Vector& x0, int dim,
                             const QuadratureConfig& quad);

struct RadialReport {
  TriState converges = TriState::Undetermined;
  Outcome outcome = Outcome::Inconclusive;
  double value = 0.0;
  std::vector<double> contributions;
};

// One-dimensional dichotomy for radial clock densities g(x) = s(|x|):
// int r / s(r) dr converges iff the time-changed Brownian motion explodes.
RadialReport radial_explosion_test(const ScalarField& s, double x0_norm,
                                   const QuadratureConfig& quad);

enum class FellerVerdict { ExplodesAS, ConservativeAS, Undetermined };

std::string to_string(FellerVerdict verdict);

struct FellerSide {
  TriState v_finite = TriState::Undetermined;
  double value = 0.0;
  std::string diagnostic;
};

struct FellerReport {
  FellerSide plus;
  FellerSide minus;
  FellerVerdict verdict = FellerVerdict::Undetermined;
};

// Scale/speed explosion test for a one-dimensional diffusion with
// coefficients (a, b):
//   v(x) = int_{x0}^x exp(-beta(y)) int_{x0}^y exp(beta(z)) (2/a(z)) dz dy,
//   beta(y) = int_{x0}^y 2 b / a.
// The process explodes almost surely iff v is finite at both ends, and is
// conservative iff v is infinite at both; mixed ends stay Undetermined
// because the event is then not a zero-one one.
FellerReport feller_test_1d(const ScalarField& a, const ScalarField& b,
                            double x0, const QuadratureConfig& quad);

}  // namespace perpetua
