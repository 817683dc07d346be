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

#include "perpetua/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace perpetua {

std::string to_string(TriState state) {
  switch (state) {
    case TriState::Yes: return "yes";
    case TriState::No: return "no";
    default: return "undetermined";
  }
}

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw std::invalid_argument("quadrature tolerances must be positive");
  if (doubling_max < 8)
    throw std::invalid_argument("doubling_max must be >= 8");
  if (!(decay_ratio_threshold > 0.0) || !(decay_ratio_threshold < 1.0))
    throw std::invalid_argument("decay ratio threshold must lie in (0,1)");
  if (nodes_per_octave < 2 || nodes_per_octave % 2 != 0)
    throw std::invalid_argument("nodes_per_octave must be even and >= 2");
}

TailReport classify_contributions(const std::vector<double>& contributions,
                                  double head_value,
                                  const QuadratureConfig& cfg) {
  cfg.validate();
  TailReport report;
  report.contributions = contributions;
  report.value = head_value;
  bool overflowed = false;
  for (double c : contributions) {
    if (std::isnan(c)) {
      report.diagnostic = "NaN tail contribution";
      return report;
    }
    if (std::isinf(c)) overflowed = true;
    report.value += c;
  }

  const int m = cfg.consecutive_doublings;
  const int n = static_cast<int>(contributions.size());
  if (n < m + 1) {
    report.diagnostic = "too few tail intervals";
    return report;
  }

  if (overflowed) {
    report.verdict = TriState::No;
    report.diagnostic = "tail contribution overflow; integral diverges";
    return report;
  }

  // Decaying tail: all of the final ratios at or below the threshold and
  // the implied geometric remainder negligible.
  bool decaying = true;
  double worst_ratio = 0.0;
  for (int i = n - m; i < n; ++i) {
    const double prev = contributions[i - 1];
    const double next = contributions[i];
    double ratio;
    if (prev <= 0.0) {
      ratio = next <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
      ratio = next / prev;
    }
    worst_ratio = std::max(worst_ratio, ratio);
    if (!(ratio <= cfg.decay_ratio_threshold)) decaying = false;
  }
  if (decaying) {
    const double last = contributions[n - 1];
    const double tail_bound =
        worst_ratio > 0.0 ? last * worst_ratio / (1.0 - worst_ratio) : 0.0;
    if (tail_bound < cfg.abs_tol) {
      report.verdict = TriState::Yes;
      report.value += tail_bound;
      return report;
    }
    report.diagnostic = "tail decaying but geometric bound above abs_tol";
    return report;
  }

  // Non-decreasing tail (tiny slack absorbs quadrature round-off).
  bool nondecreasing = contributions[n - 1] > 0.0;
  for (int i = n - m; i < n && nondecreasing; ++i) {
    if (contributions[i] < contributions[i - 1] * (1.0 - 1e-9))
      nondecreasing = false;
  }
  if (nondecreasing) {
    report.verdict = TriState::No;
    return report;
  }
  report.diagnostic = "tail neither decaying nor non-decreasing";
  return report;
}

namespace {

// Composite Simpson of phi over [a, b] in the log variable; assumes b = 2a.
double octave_integral(const std::function<double(double)>& phi, double a,
                       int intervals) {
  const double du = std::log(2.0) / intervals;
  double sum = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double z = a * std::exp(i * du);
    const double weight = (i == 0 || i == intervals) ? 1.0
                          : (i % 2 == 1)             ? 4.0
                                                     : 2.0;
    sum += weight * phi(z) * z;
  }
  return sum * du / 3.0;
}

}  // namespace

TailReport classify_improper_integral(
    const std::function<double(double)>& phi, double z0,
    const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(z0 > 0.0)) throw std::invalid_argument("ladder start must be > 0");
  std::vector<double> contributions;
  contributions.reserve(cfg.doubling_max);
  double left = z0;
  for (int k = 0; k < cfg.doubling_max; ++k) {
    contributions.push_back(octave_integral(phi, left, cfg.nodes_per_octave));
    left *= 2.0;
  }
  return classify_contributions(contributions, 0.0, cfg);
}

namespace {

double simpson_slice(double fa, double fm, double fb, double h) {
  return (fa + 4.0 * fm + fb) * h / 6.0;
}

double simpson_recurse(const std::function<double(double)>& f, double a,
                       double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double fl = f(0.5 * (a + m));
  const double fr = f(0.5 * (m + b));
  const double left = simpson_slice(fa, fl, fm, m - a);
  const double right = simpson_slice(fm, fr, fb, b - m);
  const double err = (left + right - whole) / 15.0;
  if (depth <= 0 || std::abs(err) <= tol) return left + right + err;
  return simpson_recurse(f, a, m, fa, fl, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, fr, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = simpson_slice(fa, fm, fb, b - a);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double sphere_area(int dim) {
  return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

namespace {

void push_node(SphereRule& rule, std::vector<double> node, double weight) {
  rule.nodes.push_back(std::move(node));
  rule.weights.push_back(weight);
}

SphereRule lebedev26() {
  SphereRule rule;
  const double area = 4.0 * M_PI;
  const double w1 = area / 21.0;
  const double w2 = area * 4.0 / 105.0;
  const double w3 = area * 27.0 / 840.0;
  for (int axis = 0; axis < 3; ++axis) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> node(3, 0.0);
      node[axis] = sign;
      push_node(rule, node, w1);
    }
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      for (double sa : {1.0, -1.0}) {
        for (double sb : {1.0, -1.0}) {
          std::vector<double> node(3, 0.0);
          node[a] = sa * inv_sqrt2;
          node[b] = sb * inv_sqrt2;
          push_node(rule, node, w2);
        }
      }
    }
  }
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  for (double sx : {1.0, -1.0}) {
    for (double sy : {1.0, -1.0}) {
      for (double sz : {1.0, -1.0}) {
        push_node(rule, {sx * inv_sqrt3, sy * inv_sqrt3, sz * inv_sqrt3}, w3);
      }
    }
  }
  return rule;
}

// Gauss-Legendre nodes on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

// Product rule built recursively from x = (cos t, sin t * y), y on S^{d-2},
// with Gauss-Legendre in the polar angles.
SphereRule product_rule(int dim, int polar_nodes) {
  if (dim == 1) {
    SphereRule rule;
    push_node(rule, {1.0}, 1.0);
    push_node(rule, {-1.0}, 1.0);
    return rule;
  }
  if (dim == 2) {
    SphereRule rule;
    const int n = std::max(8, 4 * polar_nodes);
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * M_PI * i / n;
      push_node(rule, {std::cos(t), std::sin(t)}, 2.0 * M_PI / n);
    }
    return rule;
  }
  const SphereRule inner = product_rule(dim - 1, polar_nodes);
  std::vector<double> gl_nodes, gl_weights;
  gauss_legendre(polar_nodes, gl_nodes, gl_weights);
  SphereRule rule;
  for (int i = 0; i < polar_nodes; ++i) {
    const double cos_t = gl_nodes[i];
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    const double jac = std::pow(sin_t, dim - 3);  // sin^{d-2} dt = sin^{d-3} dcos
    for (std::size_t j = 0; j < inner.nodes.size(); ++j) {
      std::vector<double> node(dim);
      node[0] = cos_t;
      for (int k = 1; k < dim; ++k) node[k] = sin_t * inner.nodes[j][k - 1];
      push_node(rule, std::move(node), gl_weights[i] * jac * inner.weights[j]);
    }
  }
  return rule;
}

}  // namespace

SphereRule sphere_rule(int dim, int nodes_hint) {
  if (dim < 1) throw std::invalid_argument("sphere rule needs dim >= 1");
  if (dim == 3 && nodes_hint <= 26) return lebedev26();
  const int polar = std::max(4, static_cast<int>(std::cbrt(nodes_hint)) + 4);
  return product_rule(dim, polar);
}

}  // namespace perpetua
