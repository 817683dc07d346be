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

#include "perpetua/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "perpetua/rng.hpp"

namespace perpetua {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logsumexp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// log of int over a segment of length du for an integrand with endpoint
// logs la, lb.  Fitting an exponential through the endpoints keeps the
// piece exact for e^{lambda z} integrands; a trapezoid would overshoot by
// the segment length once lambda du is large, which geometric ladders hit
// immediately under linearly growing exponents.
double log_segment_integral(double la, double lb, double du) {
  if (la == -kInf && lb == -kInf) return -kInf;
  const double gap = lb - la;
  if (std::abs(gap) < 1e-6 || la == -kInf || lb == -kInf) {
    return logsumexp(la, lb) + std::log(0.5 * du);
  }
  // (e^{lb} - e^{la}) / lambda with lambda = gap / du
  const double hi = std::max(la, lb);
  return hi + std::log1p(-std::exp(-std::abs(gap))) + std::log(du) -
         std::log(std::abs(gap));
}

double guarded_exp(double arg) {
  if (arg > 700.0) return kInf;
  return std::exp(arg);
}

}  // namespace

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::AbsolutelyContinuous: return "absolutely-continuous";
    case Outcome::Singular: return "singular";
    case Outcome::Explosive: return "explosive";
    case Outcome::Conservative: return "conservative";
    default: return "inconclusive";
  }
}

std::string to_string(FellerVerdict verdict) {
  switch (verdict) {
    case FellerVerdict::ExplodesAS: return "explodes-as";
    case FellerVerdict::ConservativeAS: return "conservative-as";
    default: return "undetermined";
  }
}

IntegralTestSpec power_law_spec(double alpha, double beta, double lo,
                                double c_ref) {
  IntegralTestSpec spec;
  spec.A = make_profile([alpha](double u) { return std::pow(u, alpha); }, lo);
  spec.B = make_profile([beta](double u) { return beta / u; }, lo);
  spec.lo = lo;
  spec.c_ref = c_ref;
  return spec;
}

TailReport nested_integral_converges(const IntegralTestSpec& spec) {
  spec.quad.validate();
  if (!spec.A.valid() || !spec.B.valid())
    throw std::invalid_argument("integral test needs A and B");
  if (!(spec.lo > 0.0))
    throw std::invalid_argument("integral test needs lo > 0");

  // log C at the ladder origin; the reference point only rescales C.
  double log_c = -adaptive_simpson(
      [&spec](double u) { return spec.B(u); }, spec.lo, spec.c_ref, 1e-10);

  double z = spec.lo;
  double fz = 0.0;                 // outer integrand at the current node
  double inner_log = -kInf;        // log of int_lo^z C/A
  std::vector<double> contributions;
  contributions.reserve(spec.quad.doubling_max);
  const int segs = spec.quad.nodes_per_octave;
  for (int k = 0; k < spec.quad.doubling_max; ++k) {
    const double step_factor = std::pow(2.0, 1.0 / segs);
    double octave = 0.0;
    for (int i = 0; i < segs; ++i) {
      const double z_next = z * step_factor;
      const double dz = z_next - z;
      const double b_mid =
          0.5 * (spec.B(z) + spec.B(z_next));  // trapezoid for log C
      const double log_c_next = log_c + b_mid * dz;
      const double az = spec.A(z);
      const double az_next = spec.A(z_next);
      if (!(az > 0.0) || !(az_next > 0.0))
        throw std::invalid_argument("A must be strictly positive on [lo,inf)");
      const double piece = log_segment_integral(
          log_c - std::log(az), log_c_next - std::log(az_next), dz);
      inner_log = logsumexp(inner_log, piece);
      const double f_next = guarded_exp(inner_log - log_c_next);
      octave += 0.5 * dz * (fz + f_next);
      fz = f_next;
      z = z_next;
      log_c = log_c_next;
    }
    contributions.push_back(octave);
  }
  return classify_contributions(contributions, 0.0, spec.quad);
}

namespace {

struct BoundProbe {
  bool ok = true;
  std::string violation;
};

// Envelope inequalities on sampled shells.  direction = +1 checks the
// upper-bound form (A <= ratio, q B <= tr a + 2<x,b>), -1 the reversed one.
BoundProbe probe_envelope_bounds(const CoefficientField& field,
                                 const IntegralTestSpec& spec,
                                 double min_radius, int direction,
                                 const std::vector<double>& shell_radii,
                                 int samples_per_shell) {
  BoundProbe probe;
  GaussianStream stream(0xB0 | static_cast<std::uint64_t>(direction + 2), 17);
  std::uint64_t draw = 0;
  for (double radius : shell_radii) {
    if (radius < min_radius) continue;
    for (int s = 0; s < samples_per_shell && probe.ok; ++s) {
      stream.begin_step(draw++);
      Vector x(field.dim);
      for (int i = 0; i < field.dim; ++i) x[i] = stream.next();
      if (x.norm() < 1e-12) continue;
      x *= radius / x.norm();
      const Matrix a = field.diffusion_at(x);
      const double q = x.dot(a * x);
      const double energy = field.girsanov_energy(x);
      if (!(energy > 0.0)) {
        probe.ok = false;
        probe.violation = "<c,ac> not positive at " + format_point(x);
        break;
      }
      const double u = 0.5 * x.squaredNorm();
      const double ratio = q / energy;
      const double lhs_a = spec.A(u);
      const double rhs_b = a.trace() + 2.0 * x.dot(field.drift_at(x));
      const double lhs_b = q * spec.B(u);
      const double slack_a = 1e-9 * std::abs(ratio) + 1e-12;
      const double slack_b = 1e-9 * (std::abs(rhs_b) + std::abs(lhs_b)) + 1e-12;
      const bool ok_a = direction > 0 ? lhs_a <= ratio + slack_a
                                      : lhs_a >= ratio - slack_a;
      const bool ok_b = direction > 0 ? lhs_b <= rhs_b + slack_b
                                      : lhs_b >= rhs_b - slack_b;
      if (!ok_a || !ok_b) {
        probe.ok = false;
        probe.violation = std::string(!ok_a ? "A-bound" : "B-bound") +
                          " fails at " + format_point(x);
      }
    }
  }
  return probe;
}

}  // namespace

Verdict khasminskii_verdict(const CoefficientField& field, const Vector& x0,
                            const IntegralTestSpec& spec_eq,
                            const IntegralTestSpec& spec_noneq,
                            const std::vector<double>& shell_radii,
                            int samples_per_shell) {
  if (!field.has_girsanov())
    throw std::invalid_argument("khasminskii verdict needs a Girsanov direction");
  Verdict verdict;
  verdict.evidence.push_back(
      {"start", x0.size() ? x0.norm() : 0.0, 0.0, format_point(x0)});

  const BoundProbe eq_bounds = probe_envelope_bounds(
      field, spec_eq, 1.0, +1, shell_radii, samples_per_shell);
  verdict.evidence.push_back({"upper-envelope bounds (sampled-hypothesis)",
                              eq_bounds.ok ? 1.0 : 0.0, 1.0,
                              eq_bounds.violation});
  if (eq_bounds.ok) {
    const TailReport nested = nested_integral_converges(spec_eq);
    verdict.evidence.push_back({"upper-envelope nested integral",
                                nested.value, 0.0, to_string(nested.verdict)});
    if (nested.verdict == TriState::Yes) {
      verdict.outcome = Outcome::AbsolutelyContinuous;
      return verdict;
    }
  }

  const double min_radius_noneq = std::sqrt(2.0 * spec_noneq.lo);
  const BoundProbe noneq_bounds = probe_envelope_bounds(
      field, spec_noneq, min_radius_noneq, -1, shell_radii, samples_per_shell);
  verdict.evidence.push_back({"lower-envelope bounds (sampled-hypothesis)",
                              noneq_bounds.ok ? 1.0 : 0.0, 1.0,
                              noneq_bounds.violation});
  if (noneq_bounds.ok) {
    const TailReport nested = nested_integral_converges(spec_noneq);
    verdict.evidence.push_back({"lower-envelope nested integral",
                                nested.value, 0.0, to_string(nested.verdict)});
    if (nested.verdict == TriState::No) {
      verdict.outcome = Outcome::Singular;
      return verdict;
    }
  }
  verdict.outcome = Outcome::Inconclusive;
  return verdict;
}

FuchsianReport fuchsian_test(const ScalarField& g, const Vector& x0, int dim,
                             const QuadratureConfig& quad) {
  quad.validate();
  if (dim < 3) throw std::invalid_argument("fuchsian test needs dim >= 3");
  FuchsianReport report;
  const SphereRule rule = sphere_rule(dim, quad.angular_nodes);

  // Shell mean of 1/g around x0 together with the spread of the node
  // values and the sampled range of the growth ratio g / (1+|x|)^2.
  double growth_floor = kInf;
  double shell_growth_cap = 0.0;
  auto shell_mean = [&](double r, double* spread) {
    double total = 0.0;
    double weight = 0.0;
    double lo = kInf, hi = 0.0;
    shell_growth_cap = 0.0;
    Vector x(dim);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      for (int i = 0; i < dim; ++i) x[i] = x0[i] + r * rule.nodes[j][i];
      const double gx = g(x);
      if (!(gx > 0.0))
        throw std::domain_error("g not positive at " + format_point(x));
      const double norm1 = 1.0 + x.norm();
      growth_floor = std::min(growth_floor, gx / (norm1 * norm1));
      shell_growth_cap = std::max(shell_growth_cap, gx / (norm1 * norm1));
      const double v = 1.0 / gx;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      total += rule.weights[j] * v;
      weight += rule.weights[j];
    }
    const double mean = total / weight;
    if (spread) *spread = mean > 0.0 ? (hi - lo) / mean : 0.0;
    return mean;
  };

  // Radial integrand r^{d-1} * r^{2-d} * mean(1/g) = r * mean(1/g), scaled
  // by the sphere area.  Head piece covers [0, z0].
  const double area = sphere_area(dim);
  const double z0 = quad.doubling_start;
  double head = 0.0;
  {
    const int n = quad.nodes_per_octave;
    double prev = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double r = z0 * i / n;
      const double value = area * r * shell_mean(r, nullptr);
      head += 0.5 * (prev + value) * (z0 / n);
      prev = value;
    }
  }

  std::vector<double> contributions;
  std::vector<double> spreads;
  std::vector<double> octave_growth_caps;
  double left = z0;
  for (int k = 0; k < quad.doubling_max; ++k) {
    double spread_here = 0.0;
    double cap_here = 0.0;
    const int segs = quad.nodes_per_octave;
    const double factor = std::pow(2.0, 1.0 / segs);
    double r = left;
    double fr = area * r * shell_mean(r, &spread_here);
    cap_here = shell_growth_cap;
    double octave = 0.0;
    for (int i = 0; i < segs; ++i) {
      const double r_next = r * factor;
      double spread_next = 0.0;
      const double f_next = area * r_next * shell_mean(r_next, &spread_next);
      spread_here = std::max(spread_here, spread_next);
      cap_here = std::max(cap_here, shell_growth_cap);
      octave += 0.5 * (fr + f_next) * (r_next - r);
      r = r_next;
      fr = f_next;
    }
    contributions.push_back(octave);
    spreads.push_back(spread_here);
    octave_growth_caps.push_back(cap_here);
    left *= 2.0;
  }

  const TailReport tail = classify_contributions(contributions, head, quad);
  report.converges = tail.verdict;
  report.value = tail.value;
  report.growth_floor = growth_floor;

  double total = head;
  for (double c : contributions)
    if (std::isfinite(c)) total += c;
  for (std::size_t k = 0; k < contributions.size(); ++k) {
    if (contributions[k] > 0.01 * total)
      report.angular_spread = std::max(report.angular_spread, spreads[k]);
  }
  if (report.angular_spread > std::max(100.0 * quad.rel_tol, 10.0)) {
    report.outcome = Outcome::Inconclusive;
    report.diagnostic = "angular spread too large for shell quadrature";
    report.converges = TriState::Undetermined;
    return report;
  }

  // Growth heuristics on the probed shells.  A density growing at least
  // quadratically keeps g / (1+|x|)^2 bounded below, making the divergent
  // kernel integral a non-explosion certificate; a density growing at most
  // quadratically keeps the ratio bounded above and is conservative by the
  // usual linear-growth bound regardless of the integral.
  report.growth_condition_plausible = growth_floor > 1e-4;
  bool at_most_quadratic = true;
  for (std::size_t k = octave_growth_caps.size() >= 4
                           ? octave_growth_caps.size() - 4
                           : 0;
       k < octave_growth_caps.size(); ++k) {
    if (k > 0 &&
        octave_growth_caps[k] > octave_growth_caps[k - 1] * (1.0 + 1e-9))
      at_most_quadratic = false;
  }
  if (report.converges == TriState::Yes) {
    report.outcome = Outcome::Explosive;
  } else if (report.converges == TriState::No) {
    if (report.growth_condition_plausible || at_most_quadratic) {
      report.outcome = Outcome::Conservative;
    } else {
      report.outcome = Outcome::Inconclusive;
      report.diagnostic = "kernel integral diverges but the growth of g is "
                          "neither clearly sub-quadratic nor clearly "
                          "super-quadratic on the probed shells";
    }
  }
  return report;
}

RadialReport radial_explosion_test(const ScalarField& s, double x0_norm,
                                   const QuadratureConfig& quad) {
  RadialReport report;
  const double start = std::max(x0_norm, 1e-3);
  const TailReport tail = classify_improper_integral(
      [&s](double r) {
        const double value = s(r);
        if (!(value > 0.0))
          throw std::domain_error("radial profile not positive at r = " +
                                  std::to_string(r));
        return r / value;
      },
      start, quad);
  report.converges = tail.verdict;
  report.value = tail.value;
  report.contributions = tail.contributions;
  if (tail.verdict == TriState::Yes) report.outcome = Outcome::Explosive;
  if (tail.verdict == TriState::No) report.outcome = Outcome::Conservative;
  return report;
}

namespace {

FellerSide feller_side(const std::function<double(double)>& a,
                       const std::function<double(double)>& b,
                       const QuadratureConfig& quad) {
  FellerSide side;
  double beta = 0.0;       // int_0^u 2 b / a
  double inner = -kInf;    // log int_0^u exp(beta) 2/a
  double u = 0.0;
  double fu = 0.0;
  double head = 0.0;

  auto advance = [&](double u_next) {
    const double du = u_next - u;
    if (!(a(u) > 0.0) || !(a(u_next) > 0.0))
      throw std::domain_error("diffusion coefficient must stay positive");
    const double drift_u = 2.0 * b(u) / a(u);
    const double drift_next = 2.0 * b(u_next) / a(u_next);
    const double beta_next = beta + 0.5 * (drift_u + drift_next) * du;
    const double piece =
        log_segment_integral(beta + std::log(2.0 / a(u)),
                             beta_next + std::log(2.0 / a(u_next)), du);
    inner = logsumexp(inner, piece);
    const double f_next = guarded_exp(inner - beta_next);
    const double slab = 0.5 * du * (fu + f_next);
    u = u_next;
    beta = beta_next;
    fu = f_next;
    return slab;
  };

  const double z0 = quad.doubling_start;
  const int segs = quad.nodes_per_octave;
  for (int i = 1; i <= segs; ++i) head += advance(z0 * i / segs);

  std::vector<double> contributions;
  double left = z0;
  for (int k = 0; k < quad.doubling_max; ++k) {
    const double factor = std::pow(2.0, 1.0 / segs);
    double octave = 0.0;
    double node = left;
    for (int i = 0; i < segs; ++i) {
      node *= factor;
      octave += advance(node);
    }
    contributions.push_back(octave);
    left *= 2.0;
  }
  const TailReport tail = classify_contributions(contributions, head, quad);
  side.v_finite = tail.verdict;
  side.value = tail.value;
  side.diagnostic = tail.diagnostic;
  return side;
}

}  // namespace

FellerReport feller_test_1d(const ScalarField& a, const ScalarField& b,
                            double x0, const QuadratureConfig& quad) {
  quad.validate();
  if (!a.valid()) throw std::invalid_argument("feller test needs a > 0");
  auto a_at = [&a](double y) { return a(y); };
  auto b_at = [&b](double y) { return b.valid() ? b(y) : 0.0; };

  FellerReport report;
  report.plus = feller_side([&](double u) { return a_at(x0 + u); },
                            [&](double u) { return b_at(x0 + u); }, quad);
  report.minus = feller_side([&](double u) { return a_at(x0 - u); },
                             [&](double u) { return -b_at(x0 - u); }, quad);

  const TriState p = report.plus.v_finite;
  const TriState m = report.minus.v_finite;
  if (p == TriState::Yes && m == TriState::Yes) {
    report.verdict = FellerVerdict::ExplodesAS;
  } else if (p == TriState::No && m == TriState::No) {
    report.verdict = FellerVerdict::ConservativeAS;
  } else {
    report.verdict = FellerVerdict::Undetermined;
  }
  return report;
}

}  // namespace perpetua
