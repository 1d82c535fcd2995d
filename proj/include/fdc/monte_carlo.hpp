// Copyright 2026 The fdc Authors
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

#include "fdc/plantlab.hpp"
#include "fdc/predictive.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fdc {

/// Run i collects a closed-loop dataset with seed `base_seed + i`, so two
/// studies with the same base seed share phases and noise draws.
struct MonteCarloConfig {
  Index runs = 100;
  std::uint64_t base_seed = 0;
  unsigned threads = 1;
  ClosedLoopDatasetConfig dataset;  // seed is overridden per run
  RecedingHorizonConfig loop;
};

struct MonteCarloRun {
  std::uint64_t seed = 0;
  bool ok = false;
  double cost = 0.0;
  std::string error;
};

struct MonteCarloSummary {
  std::vector<MonteCarloRun> runs;  // ordered by run index
  Index failures = 0;
  double mean_cost = 0.0;  // over successful runs
  double cost_variance = 0.0;
};

/// FreePC closed-loop cost over independently collected datasets.
MonteCarloSummary freepc_monte_carlo(const StateSpaceModel& plant, const TransferMatrix& controller,
                                     const PredictiveProblem& problem, const MonteCarloConfig& config);

}  // namespace fdc
