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

namespace fdc {

/// min 1/2 x'Hx + f'x  s.t.  A x = b,  l <= C x <= u  (infinite bounds allowed).
struct QpProblem {
  RealMatrix hessian;
  RealVector linear;
  RealMatrix eq_matrix;
  RealVector eq_rhs;
  RealMatrix ineq_matrix;
  RealVector ineq_lower;
  RealVector ineq_upper;

  Index variables() const { return linear.size(); }
  /// Dimension and symmetry checks; PSD check when `check_psd`. Throws InvalidInput.
  void validate(bool check_psd = true) const;
};

enum class QpStatus { Solved, Infeasible, MaxIterations };

const char* to_string(QpStatus status);

struct QpSettings {
  double tolerance = 1e-9;
  int max_iterations = 100;
  bool check_psd = true;
};

/// Infinity norms at the returned point.
struct KktResiduals {
  double primal_equality = 0.0;
  double inequality_violation = 0.0;
  double stationarity = 0.0;
  double complementarity = 0.0;

  double max() const;
};

struct QpResult {
  QpStatus status = QpStatus::MaxIterations;
  RealVector x;
  double objective = 0.0;
  RealVector eq_multipliers;    // y in  Hx + f + A'y + C'lambda = 0
  RealVector ineq_multipliers;  // lambda, > 0 at an active upper bound, < 0 at a lower one
  KktResiduals residuals;
  int iterations = 0;
};

/// Primal-dual interior point method with Mehrotra predictor-corrector.
QpResult qp_solve(const QpProblem& problem, const QpSettings& settings = {});

/// KKT residuals of (x, y, lambda) for the problem.
KktResiduals kkt_residuals(const QpProblem& problem, const RealVector& x, const RealVector& y,
                           const RealVector& lambda);

}  // namespace fdc
