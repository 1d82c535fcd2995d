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

#include "fdc/behavior.hpp"
#include "fdc/plantlab.hpp"
#include "fdc/predictive.hpp"

namespace fdc::presets {

/// Unstable batch reactor sampled at 0.5 s. With `full_state` the output is
/// the state (C = I), otherwise two measured outputs.
StateSpaceModel batch_reactor(bool full_state = false);

/// 1/(1.84 (z - 1)) [0, 2z - 1; -5z + 1, 0], stabilizing the batch reactor under
/// u = d - C(z) y. The transposed placement of the two entries does not stabilize.
TransferMatrix batch_reactor_controller();

/// (0.1164 z + 0.1071) / (z^2 - 1.891 z + 0.7788), unstable SISO plant.
TransferFunction unstable_siso_plant();

/// (6 z - 5.135) / (z - 0.1353), stabilizing the SISO plant.
TransferFunction unstable_siso_controller();

/// Measured true response of the batch reactor over k = -2..3 (2 x 6).
RealMatrix batch_reactor_reference_outputs();

/// Inputs over k = -2..3 that reproduce the reference outputs from x_{-2} = 0.
/// CB is invertible, so u_k follows from y_{k+1}; the last input is set to 0.
Trajectory batch_reactor_reference_inputs();

/// Query with L0 = 2 past samples and L = 4 future inputs from the reference data.
BehaviorQuery batch_reactor_query();

/// Closed-loop batch reactor data: M = 10, a = 10, averaged spectra.
ClosedLoopDatasetConfig batch_reactor_dataset(Index periods, std::uint64_t seed);

/// Closed-loop SISO data: M = 20, a = 1, FRF ratio estimate.
ClosedLoopDatasetConfig unstable_siso_dataset(Index periods, std::uint64_t seed);

/// T = 10, T_bar = 6, Q = 1, R = 0.01, u in [-3, 0.5], y in [-0.5, 1.2].
PredictiveProblem unstable_siso_problem();

/// Initial state in the realization `tf_to_state_space(unstable_siso_plant())`,
/// matching y_0 = 1.05699287442452, u_0 = -3, y_1 = 1.14787829157727.
RealVector unstable_siso_initial_state();

}  // namespace fdc::presets
