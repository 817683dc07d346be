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

#include <string>
#include <vector>

#include "perpetua/fields.hpp"

namespace perpetua {

// Named coefficient model addressable from the CLI.  Identifiers follow
// "name" or "name:key=value,key=value"; see model_zoo_help().
struct ZooModel {
  std::string id;
  CoefficientField field;
  Vector x0;
  bool one_dimensional() const { return field.dim == 1; }
};

ZooModel make_model(const std::string& id);

// The standard models exercised by the pathwise property suites.
std::vector<std::string> zoo_model_ids();

// The one-dimensional sub-zoo used to cross-check the explosion oracle.
std::vector<std::string> zoo_1d_ids();

std::string model_zoo_help();

// Named scalar clock densities ("one", "const:k", "inv-quartic", "quartic").
ScalarField make_clock(const std::string& id, int dim);

}  // namespace perpetua
