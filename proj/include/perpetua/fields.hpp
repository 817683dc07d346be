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

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace perpetua {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

std::string format_point(const Vector& x);

// Evaluable scalar field on R^dim.  One-dimensional radial profiles reuse
// the same type with dim = 1; domain_lo carries the lower end of the
// profile domain when the field is only meaningful on [domain_lo, inf).
struct ScalarField {
  int dim = 0;
  std::function<double(const Vector&)> eval;
  double domain_lo = -std::numeric_limits<double>::infinity();

  bool valid() const { return static_cast<bool>(eval); }
  double operator()(const Vector& x) const { return eval(x); }
  double operator()(double r) const {
    Vector x(1);
    x[0] = r;
    return eval(x);
  }
};

ScalarField make_profile(std::function<double(double)> f, double lo = 0.0);
ScalarField constant_field(int dim, double value);

// Coefficient tuple (d, b, a, c, f) of a martingale problem.  A null drift
// means b = 0.  When iso_diffusion is set, a(x) = iso_diffusion(x) * Id and
// the simulator takes a scalar fast path; otherwise `diffusion` must return
// a symmetric positive semi-definite matrix.
struct CoefficientField {
  int dim = 0;
  std::function<Vector(const Vector&)> drift;
  std::function<Matrix(const Vector&)> diffusion;
  std::function<double(const Vector&)> iso_diffusion;
  std::function<Vector(const Vector&)> girsanov;
  ScalarField clock;

  bool has_drift() const { return static_cast<bool>(drift); }
  bool has_girsanov() const { return static_cast<bool>(girsanov); }
  bool isotropic() const { return static_cast<bool>(iso_diffusion); }

  Vector drift_at(const Vector& x) const;
  Matrix diffusion_at(const Vector& x) const;
  // <c(x), a(x) c(x)>
  double girsanov_energy(const Vector& x) const;
};

Matrix symmetrized(const Matrix& a);

// Symmetric PSD square root via eigendecomposition.  Eigenvalues in
// [-1e-8, 1e-12] are clamped to zero; anything below -1e-8 throws with the
// offending point in the message.
Matrix psd_sqrt(const Matrix& a, const Vector& at_point);

// Value, gradient and Hessian of a C^2 test function.
struct TestFunction {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Matrix(const Vector&)> hessian;
};

TestFunction coordinate_function(int i);
TestFunction squared_norm_function();

// <grad f(x), b(x)> + (1/2) tr(hess f(x) a(x))
double generator_apply(const CoefficientField& field, const TestFunction& fn,
                       const Vector& x);

struct ShellStats {
  double radius = 0.0;
  double sup_drift_norm = 0.0;
  double sup_diffusion_opnorm = 0.0;
  double min_diffusion_eig = 0.0;
  double inf_girsanov_energy = 0.0;
  double sup_girsanov_energy = 0.0;
  double inf_clock = 0.0;
  double sup_clock = 0.0;
  double max_asymmetry = 0.0;
};

struct RegularityReport {
  std::vector<ShellStats> shells;
  bool all_finite = true;
  bool locally_bounded = true;
  bool diffusion_psd = true;
  // min over shells of inf <c,ac> resp. inf f stays strictly positive
  bool girsanov_energy_positive = true;
  bool clock_positive = true;
  std::vector<std::string> diagnostics;

  bool passed() const {
    return all_finite && locally_bounded && diffusion_psd &&
           girsanov_energy_positive && clock_positive;
  }
};

// Samples each sphere of the given radii (plus the axis points) and records
// per-shell extrema of |b|, |a|, <c,ac> and f.  This is a sampling probe of
// local boundedness, not a certificate.
RegularityReport probe_regularity(const CoefficientField& field,
                                  const std::vector<double>& radii,
                                  int samples_per_shell,
                                  std::uint64_t seed = 0x5eedu);

// Coefficients of the time-changed problem: (a, b) -> (a/f, b/f).
// Throws if f evaluates to a non-positive value, naming the point.
CoefficientField time_change_coeffs(const CoefficientField& field,
                                    const ScalarField& f);

// a(x) = s(|x|) Id, b = 0.
CoefficientField make_radial_field(const ScalarField& s, int dim);

}  // namespace perpetua
