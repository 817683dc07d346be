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

#include "perpetua/zoo.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "perpetua/counterexample.hpp"

namespace perpetua {

namespace {

struct ParsedId {
  std::string name;
  std::map<std::string, std::string> args;
};

ParsedId parse_id(const std::string& id) {
  ParsedId parsed;
  const auto colon = id.find(':');
  parsed.name = id.substr(0, colon);
  if (colon == std::string::npos) return parsed;
  std::stringstream rest(id.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("malformed model argument '" + item + "'");
    parsed.args[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return parsed;
}

double arg_num(const ParsedId& id, const std::string& key, double fallback) {
  const auto it = id.args.find(key);
  return it == id.args.end() ? fallback : std::stod(it->second);
}

std::string arg_str(const ParsedId& id, const std::string& key,
                    const std::string& fallback) {
  const auto it = id.args.find(key);
  return it == id.args.end() ? fallback : it->second;
}

CoefficientField brownian(int dim) {
  CoefficientField field;
  field.dim = dim;
  field.iso_diffusion = [](const Vector&) { return 1.0; };
  return field;
}

ScalarField quartic_density(int dim) {
  ScalarField g;
  g.dim = dim;
  g.eval = [](const Vector& x) {
    const double r2 = x.squaredNorm();
    return 2.0 + r2 * r2;
  };
  return g;
}

ScalarField parse_rho(const std::string& name) {
  if (name == "linear") return make_profile([](double t) { return 1.0 + t; });
  if (name == "quadratic")
    return make_profile([](double t) { return 1.0 + t * t; });
  if (name == "exp") return make_profile([](double t) { return std::exp(t); });
  throw std::invalid_argument("unknown rho profile '" + name + "'");
}

}  // namespace

ScalarField make_clock(const std::string& id, int dim) {
  const ParsedId parsed = parse_id(id);
  if (parsed.name == "one") return constant_field(dim, 1.0);
  if (parsed.name == "const")
    return constant_field(dim, arg_num(parsed, "k", 4.0));
  if (parsed.name == "inv-quartic") {
    ScalarField f;
    f.dim = dim;
    f.eval = [](const Vector& x) {
      const double r2 = x.squaredNorm();
      return 1.0 / (2.0 + r2 * r2);
    };
    return f;
  }
  if (parsed.name == "quartic") return quartic_density(dim);
  throw std::invalid_argument("unknown clock '" + id + "'");
}

ZooModel make_model(const std::string& id) {
  const ParsedId parsed = parse_id(id);
  ZooModel model;
  model.id = id;

  if (parsed.name == "bm" || parsed.name == "bm1" || parsed.name == "bm2" ||
      parsed.name == "bm3") {
    int dim = static_cast<int>(arg_num(parsed, "d", 3));
    if (parsed.name == "bm1") dim = 1;
    if (parsed.name == "bm2") dim = 2;
    if (parsed.name == "bm3") dim = 3;
    model.field = brownian(dim);
    model.x0 = Vector::Zero(dim);
    return model;
  }
  if (parsed.name == "drift-bm1") {
    model.field = brownian(1);
    model.field.drift = [](const Vector& x) {
      return Vector::Constant(x.size(), 1.0).eval();
    };
    model.x0 = Vector::Zero(1);
    return model;
  }
  if (parsed.name == "cubic-drift1") {
    model.field = brownian(1);
    model.field.drift = [](const Vector& x) {
      Vector b(1);
      b[0] = x[0] * x[0] * x[0];
      return b;
    };
    model.x0 = Vector::Zero(1);
    return model;
  }
  if (parsed.name == "poly-drift1") {
    model.field = brownian(1);
    model.field.drift = [](const Vector& x) {
      Vector b(1);
      b[0] = x[0] * (1.0 + x[0] * x[0]);
      return b;
    };
    model.x0 = Vector::Zero(1);
    return model;
  }
  if (parsed.name == "pol15-1") {
    CoefficientField field;
    field.dim = 1;
    field.iso_diffusion = [](const Vector& x) {
      return std::pow(1.0 + x[0] * x[0], 1.5);
    };
    model.field = field;
    model.x0 = Vector::Zero(1);
    return model;
  }
  if (parsed.name == "radial") {
    const int dim = static_cast<int>(arg_num(parsed, "d", 3));
    const double p = arg_num(parsed, "p", 3.0);
    const ScalarField s =
        make_profile([p](double r) { return std::pow(1.0 + r, p); });
    model.field = make_radial_field(s, dim);
    model.x0 = Vector::Zero(dim);
    model.x0[0] = 1.0;
    return model;
  }
  if (parsed.name == "quartic3") {
    const ScalarField s =
        make_profile([](double r) { return 2.0 + r * r * r * r; });
    model.field = make_radial_field(s, 3);
    model.x0 = Vector::Zero(3);
    return model;
  }
  if (parsed.name == "fuchsian") {
    const std::string g_name = arg_str(parsed, "g", "quartic");
    if (g_name != "quartic")
      throw std::invalid_argument("unknown fuchsian density '" + g_name + "'");
    const int dim = 3;
    ScalarField g = quartic_density(dim);
    CoefficientField field = brownian(dim);
    field.girsanov = [g](const Vector& x) {
      Vector c = Vector::Zero(x.size());
      c[0] = 1.0 / std::sqrt(g(x));
      return c;
    };
    ScalarField clock;
    clock.dim = dim;
    clock.eval = [g](const Vector& x) { return 1.0 / g(x); };
    field.clock = clock;
    model.field = field;
    model.x0 = Vector::Zero(dim);
    return model;
  }
  if (parsed.name == "pair-bm-drift1") {
    CoefficientField field = brownian(1);
    field.girsanov = [](const Vector&) {
      return Vector::Constant(1, 1.0).eval();
    };
    field.clock = constant_field(1, 1.0);
    model.field = field;
    model.x0 = Vector::Zero(1);
    return model;
  }
  if (parsed.name == "counterexample") {
    const ScalarField rho = parse_rho(arg_str(parsed, "rho", "linear"));
    const int balls = static_cast<int>(arg_num(parsed, "balls", 3));
    const int dim = static_cast<int>(arg_num(parsed, "d", 3));
    const Counterexample built = build_counterexample_g(rho, dim, balls);
    CoefficientField field;
    field.dim = dim;
    field.iso_diffusion = [g = built.g](const Vector& x) { return g(x); };
    model.field = field;
    model.x0 = Vector::Zero(dim);
    return model;
  }
  throw std::invalid_argument("unknown model '" + id + "'; " +
                              model_zoo_help());
}

std::vector<std::string> zoo_model_ids() {
  return {"bm1",
          "bm2",
          "bm3",
          "drift-bm1",
          "cubic-drift1",
          "poly-drift1",
          "pol15-1",
          "radial:p=2",
          "radial:p=3",
          "quartic3",
          "fuchsian:g=quartic",
          "pair-bm-drift1",
          "counterexample:rho=linear,balls=2"};
}

std::vector<std::string> zoo_1d_ids() {
  return {"bm1", "drift-bm1", "cubic-drift1", "poly-drift1", "pol15-1"};
}

std::string model_zoo_help() {
  return "known models: bm[d], bm1, bm2, bm3, drift-bm1, cubic-drift1, "
         "poly-drift1, pol15-1, radial:p=<p>[,d=<d>], quartic3, "
         "fuchsian[:g=quartic], pair-bm-drift1, "
         "counterexample:rho=<linear|quadratic|exp>[,balls=<n>]";
}

}  // namespace perpetua
