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

#include "perpetua/fields.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "perpetua/rng.hpp"

namespace perpetua {

std::string format_point(const Vector& x) {
  std::ostringstream out;
  out << "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i > 0) out << ", ";
    out << x[i];
  }
  out << ")";
  return out.str();
}

ScalarField make_profile(std::function<double(double)> f, double lo) {
  ScalarField field;
  field.dim = 1;
  field.domain_lo = lo;
  field.eval = [fn = std::move(f)](const Vector& x) { return fn(x[0]); };
  return field;
}

ScalarField constant_field(int dim, double value) {
  ScalarField field;
  field.dim = dim;
  field.eval = [value](const Vector&) { return value; };
  return field;
}

Vector CoefficientField::drift_at(const Vector& x) const {
  if (!drift) return Vector::Zero(dim);
  return drift(x);
}

Matrix CoefficientField::diffusion_at(const Vector& x) const {
  if (iso_diffusion) return iso_diffusion(x) * Matrix::Identity(dim, dim);
  return diffusion(x);
}

double CoefficientField::girsanov_energy(const Vector& x) const {
  const Vector c = girsanov(x);
  if (iso_diffusion) return iso_diffusion(x) * c.squaredNorm();
  return c.dot(diffusion(x) * c);
}

Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

Matrix psd_sqrt(const Matrix& a, const Vector& at_point) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(a));
  Vector lambda = eig.eigenvalues();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < -1e-8) {
      throw std::runtime_error("diffusion matrix not PSD at " +
                               format_point(at_point) + ": eigenvalue " +
                               std::to_string(lambda[i]));
    }
    lambda[i] = lambda[i] < 1e-12 ? 0.0 : std::sqrt(lambda[i]);
  }
  return eig.eigenvectors() * lambda.asDiagonal() *
         eig.eigenvectors().transpose();
}

TestFunction coordinate_function(int i) {
  TestFunction fn;
  fn.value = [i](const Vector& x) { return x[i]; };
  fn.gradient = [i](const Vector& x) {
    Vector g = Vector::Zero(x.size());
    g[i] = 1.0;
    return g;
  };
  fn.hessian = [](const Vector& x) {
    return Matrix::Zero(x.size(), x.size()).eval();
  };
  return fn;
}

TestFunction squared_norm_function() {
  TestFunction fn;
  fn.value = [](const Vector& x) { return x.squaredNorm(); };
  fn.gradient = [](const Vector& x) { return (2.0 * x).eval(); };
  fn.hessian = [](const Vector& x) {
    return (2.0 * Matrix::Identity(x.size(), x.size())).eval();
  };
  return fn;
}

double generator_apply(const CoefficientField& field, const TestFunction& fn,
                       const Vector& x) {
  const double drift_part = fn.gradient(x).dot(field.drift_at(x));
  const double trace_part = (fn.hessian(x) * field.diffusion_at(x)).trace();
  return drift_part + 0.5 * trace_part;
}

namespace {

// Deterministic shell sample: the 2d axis points plus seeded uniform
// directions.  Radius zero degenerates to the origin alone.
std::vector<Vector> shell_points(int dim, double radius, int count,
                                 std::uint64_t seed) {
  std::vector<Vector> points;
  if (radius == 0.0) {
    points.push_back(Vector::Zero(dim));
    return points;
  }
  for (int i = 0; i < dim; ++i) {
    Vector e = Vector::Zero(dim);
    e[i] = radius;
    points.push_back(e);
    points.push_back(-e);
  }
  GaussianStream stream(seed, static_cast<std::uint64_t>(radius * 8192.0));
  for (int k = 0; k < count; ++k) {
    stream.begin_step(static_cast<std::uint64_t>(k));
    Vector g(dim);
    for (int i = 0; i < dim; ++i) g[i] = stream.next();
    const double norm = g.norm();
    if (norm < 1e-12) continue;
    points.push_back(radius / norm * g);
  }
  return points;
}

}  // namespace

RegularityReport probe_regularity(const CoefficientField& field,
                                  const std::vector<double>& radii,
                                  int samples_per_shell, std::uint64_t seed) {
  if (samples_per_shell < 1)
    throw std::invalid_argument("samples_per_shell must be >= 1");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (radii[i] <= radii[i - 1])
      throw std::invalid_argument("shell radii must be strictly increasing");
  }

  RegularityReport report;
  const double inf = std::numeric_limits<double>::infinity();
  for (double radius : radii) {
    ShellStats stats;
    stats.radius = radius;
    stats.min_diffusion_eig = inf;
    stats.inf_girsanov_energy = inf;
    stats.inf_clock = inf;
    bool have_girsanov = field.has_girsanov();
    bool have_clock = field.clock.valid();
    if (!have_girsanov) {
      stats.inf_girsanov_energy = 0.0;
      stats.sup_girsanov_energy = 0.0;
    }
    if (!have_clock) {
      stats.inf_clock = 0.0;
      stats.sup_clock = 0.0;
    }
    for (const Vector& x : shell_points(field.dim, radius, samples_per_shell,
                                        seed)) {
      const Vector b = field.drift_at(x);
      const Matrix a_raw = field.diffusion_at(x);
      const Matrix a = symmetrized(a_raw);
      if (!b.allFinite() || !a.allFinite()) {
        report.all_finite = false;
        report.diagnostics.push_back("non-finite coefficient at " +
                                     format_point(x));
        continue;
      }
      stats.max_asymmetry = std::max(
          stats.max_asymmetry,
          (a_raw - a_raw.transpose()).cwiseAbs().maxCoeff());
      Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
      const double lo = eig.eigenvalues().minCoeff();
      const double hi = eig.eigenvalues().maxCoeff();
      if (lo < -1e-10) {
        report.diffusion_psd = false;
        report.diagnostics.push_back("negative diffusion eigenvalue " +
                                     std::to_string(lo) + " at " +
                                     format_point(x));
      }
      stats.sup_drift_norm = std::max(stats.sup_drift_norm, b.norm());
      stats.sup_diffusion_opnorm = std::max(stats.sup_diffusion_opnorm, hi);
      stats.min_diffusion_eig = std::min(stats.min_diffusion_eig, lo);
      if (have_girsanov) {
        const double energy = field.girsanov_energy(x);
        if (!std::isfinite(energy)) {
          report.all_finite = false;
          report.diagnostics.push_back("non-finite <c,ac> at " +
                                       format_point(x));
        } else {
          stats.inf_girsanov_energy =
              std::min(stats.inf_girsanov_energy, energy);
          stats.sup_girsanov_energy =
              std::max(stats.sup_girsanov_energy, energy);
        }
      }
      if (have_clock) {
        const double f = field.clock(x);
        if (!std::isfinite(f)) {
          report.all_finite = false;
          report.diagnostics.push_back("non-finite clock value at " +
                                       format_point(x));
        } else {
          stats.inf_clock = std::min(stats.inf_clock, f);
          stats.sup_clock = std::max(stats.sup_clock, f);
        }
      }
    }
    if (!std::isfinite(stats.sup_drift_norm) ||
        !std::isfinite(stats.sup_diffusion_opnorm)) {
      report.locally_bounded = false;
    }
    if (have_girsanov && stats.inf_girsanov_energy <= 0.0) {
      report.girsanov_energy_positive = false;
      report.diagnostics.push_back(
          "inf <c,ac> <= 0 on shell radius " + std::to_string(radius));
    }
    if (have_clock && stats.inf_clock <= 0.0) {
      report.clock_positive = false;
      report.diagnostics.push_back("inf clock <= 0 on shell radius " +
                                   std::to_string(radius));
    }
    report.shells.push_back(stats);
  }
  return report;
}

CoefficientField time_change_coeffs(const CoefficientField& field,
                                    const ScalarField& f) {
  if (!f.valid()) throw std::invalid_argument("time change needs a clock");
  auto checked = [f](const Vector& x) {
    const double value = f(x);
    if (!(value > 0.0)) {
      throw std::domain_error("clock density not positive at " +
                              format_point(x) + ": f = " +
                              std::to_string(value));
    }
    return value;
  };

  CoefficientField changed;
  changed.dim = field.dim;
  if (field.drift) {
    changed.drift = [drift = field.drift, checked](const Vector& x) {
      return (drift(x) / checked(x)).eval();
    };
  }
  if (field.iso_diffusion) {
    changed.iso_diffusion = [iso = field.iso_diffusion,
                             checked](const Vector& x) {
      return iso(x) / checked(x);
    };
  } else {
    changed.diffusion = [diffusion = field.diffusion,
                         checked](const Vector& x) {
      return (diffusion(x) / checked(x)).eval();
    };
  }
  // The Girsanov direction is shared by the original and the time-changed
  // pair.  An attached clock tracks <c, a c>, so it rescales with a.
  changed.girsanov = field.girsanov;
  if (field.clock.valid()) {
    ScalarField scaled;
    scaled.dim = field.clock.dim;
    scaled.domain_lo = field.clock.domain_lo;
    scaled.eval = [clock = field.clock, checked](const Vector& x) {
      return clock(x) / checked(x);
    };
    changed.clock = scaled;
  }
  return changed;
}

CoefficientField make_radial_field(const ScalarField& s, int dim) {
  CoefficientField field;
  field.dim = dim;
  field.iso_diffusion = [s](const Vector& x) { return s(x.norm()); };
  return field;
}

}  // namespace perpetua
