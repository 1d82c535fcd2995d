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

#include "fdc/linalg.hpp"

#include <vector>

namespace fdc {

/// One linear matrix inequality  C - sum_i y_i A_i >= 0.
struct LmiBlock {
  RealMatrix constant;
  std::vector<RealMatrix> coefficients;
};

/// max b'y subject to every block being positive semidefinite.
struct SdpProblem {
  RealVector objective;
  std::vector<LmiBlock> blocks;

  Index variables() const { return objective.size(); }
  void validate() const;
};

enum class SdpStatus { Solved, Infeasible, MaxIterations, NumericalFailure };

const char* to_string(SdpStatus status);

struct SdpSettings {
  double tolerance = 1e-10;
  int max_iterations = 100;
  /// Restrict each block to the joint range of its data first. Needed when
  /// the blocks have no interior, as in the LQR inequality.
  bool facial_reduction = true;
};

struct SdpResult {
  SdpStatus status = SdpStatus::MaxIterations;
  RealVector y;
  double objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  std::vector<double> min_eigenvalues;  // of each full-size block at y
  int iterations = 0;
};

SdpResult sdp_solve(const SdpProblem& problem, const SdpSettings& settings = {});

/// Basis of n x n symmetric matrices over the upper triangle in row-major
/// order: E_ii on the diagonal, E_ij + E_ji off it.
std::vector<RealMatrix> symmetric_basis(Index n);

/// sum_i y_i E_i for the basis above.
RealMatrix symmetric_from_coordinates(const RealVector& y, Index n);

/// max trace(P) s.t. S0 + sum_i y_i S_i >= 0 and P >= 0, where P = sum_i y_i E_i
/// and S_i is S evaluated on the basis element E_i minus S0.
SdpProblem trace_max_problem(const RealMatrix& s0, const std::vector<RealMatrix>& s_coeffs,
                             Index n);

}  // namespace fdc
