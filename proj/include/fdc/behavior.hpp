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

#include "fdc/core.hpp"

#include <optional>

namespace fdc {

/// Coefficients G = (G0, G1, conj G1) of a conjugate-structured combination
/// of data columns.
struct GVector {
  RealVector g0;     // E
  ComplexVector g1;  // E (M - 1)

  static GVector from_real(const RealVector& g, Index grid_size, Index experiments);
  ComplexVector full() const;
  RealVector real() const;  // (G0, 2 Re G1, -2 Im G1)
};

struct BehaviorOptions {
  /// Consistency gate, relative to max(1, ||rhs||).
  double tolerance = 1e-6;
  std::optional<double> rank_tolerance;
  /// Upper bound on n_x used in the excitation check; 0 when unknown.
  Index state_order_bound = 0;
};

struct MembershipResult {
  bool member = false;
  GVector g;
  double residual = 0.0;
  double threshold = 0.0;
  bool weak_data = false;
};

/// Is (u, y), both of length L, a trajectory of the system behind the data?
MembershipResult is_trajectory(const SpectraCollection& data, const Trajectory& u,
                               const Trajectory& y, const BehaviorOptions& options = {});

/// Past window u, y over [-L0, -1] and future inputs over [0, L-1].
struct BehaviorQuery {
  Trajectory past_inputs;
  Trajectory past_outputs;
  Trajectory future_inputs;

  BehaviorQuery(Trajectory past_u, Trajectory past_y, Trajectory future_u);
  Index past_length() const { return past_inputs.length(); }
  Index future_length() const { return future_inputs.length(); }
};

struct SimulationResult {
  Trajectory future_outputs;  // y over [0, L-1]
  Trajectory all_outputs;     // y over [-L0, L-1]
  GVector g;
  double residual = 0.0;
  bool weak_data = false;
};

/// Throws InconsistentPast when the past window is not explained by the data.
SimulationResult dd_simulate(const SpectraCollection& data, const BehaviorQuery& query,
                             const BehaviorOptions& options = {});

struct FrequencyResponseResult {
  ComplexVector y;
  double residual = 0.0;
  bool weak_data = false;
};

/// Y_z for input direction U_z at a complex frequency z. Throws
/// EvaluationFailed if the system is inconsistent or Y_z is not unique
/// (z an eigenvalue of A, or L0 too small for the data).
FrequencyResponseResult freq_response_eval(const SpectraCollection& data, Complex z,
                                           const ComplexVector& u_z, Index past_length,
                                           const BehaviorOptions& options = {});

/// H(z), one column per unit input direction.
ComplexMatrix transfer_matrix_at(const SpectraCollection& data, Complex z, Index past_length,
                                 const BehaviorOptions& options = {});

}  // namespace fdc
