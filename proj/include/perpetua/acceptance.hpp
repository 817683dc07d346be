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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace perpetua {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::vector<std::string> details;
  nlohmann::ordered_json data;
};

struct AcceptanceReport {
  bool quick = false;
  std::uint64_t master_seed = 0;
  std::vector<CriterionResult> criteria;
  double total_seconds = 0.0;

  bool all_passed() const;
};

// One pass/fail line per criterion on `log` (when given).  The quick mode
// runs the same checks at reduced path counts and correspondingly wider
// statistical thresholds.  `with_determinism` reruns the quick suite twice
// and byte-compares the reports; it is switched off inside that rerun.
AcceptanceReport run_acceptance(bool quick, std::uint64_t master_seed,
                                bool with_determinism, std::ostream* log);

// Serialization used both for results.json and for the determinism
// comparison; volatile fields (timings) are only attached when asked for.
nlohmann::ordered_json acceptance_json(const AcceptanceReport& report,
                                       bool include_volatile);

}  // namespace perpetua
