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
#include "fdc/plantlab.hpp"
#include "fdc/qp.hpp"

#include <limits>
#include <string>

namespace fdc {

/// Receding-horizon problem: stage cost y'Qy + u'Ru over T steps after a
/// past window of T_bar samples.
struct PredictiveProblem {
  Index horizon = 10;
  Index past_length = 6;
  RealMatrix output_weight;  // n_y x n_y, PSD
  RealMatrix input_weight;   // n_u x n_u, PD
  RealVector u_lower, u_upper;
  RealVector y_lower, y_upper;
  /// Weight on ||sigma||_1; infinity pins the past-output slack to zero.
  double lambda_sigma = 1e5;
  /// Weight on the 1-norm of the real coordinates g.
  double lambda_g = 0.1;

  Index inputs() const { return input_weight.rows(); }
  Index outputs() const { return output_weight.rows(); }
  void validate() const;
};

/// Prediction model rows acting on g: [U_p; U_f; Y_p; Y_f] g = (u_past, u, y_past, y).
struct DataPredictor {
  RealMatrix up, uf, yp, yf;

  Index columns() const { return up.cols(); }
};

/// Real form of the depth-(T_bar + T) frequency data matrices.
DataPredictor freepc_predictor(const SpectraCollection& data, Index past_length, Index horizon);

/// Block-Hankel matrices of depth T_bar + T from one time-domain record.
DataPredictor deepc_predictor(const Trajectory& u, const Trajectory& y, Index past_length,
                              Index horizon);

enum class PredictorKind { FreePC, DeePC, ModelMPC };

const char* to_string(PredictorKind kind);

struct Predictor {
  PredictorKind kind = PredictorKind::FreePC;
  DataPredictor data;     // FreePC / DeePC
  StateSpaceModel model;  // ModelMPC

  static Predictor freepc(const SpectraCollection& spectra, const PredictiveProblem& problem);
  static Predictor deepc(const Trajectory& u, const Trajectory& y, const PredictiveProblem& problem);
  static Predictor model_based(StateSpaceModel model);
};

/// QP with variable layout [u (n_u T) | y (n_y T) | g | sigma | t_g | t_sigma];
/// absent blocks have zero length.
struct PredictiveQp {
  QpProblem qp;
  Index nu = 0, ny = 0, horizon = 0;
  Index g_offset = 0, g_size = 0;
  Index sigma_offset = 0, sigma_size = 0;
};

PredictiveQp build_predictive_qp(const Predictor& predictor, const PredictiveProblem& problem,
                                 const Trajectory& past_u, const Trajectory& past_y);

struct PredictiveSolution {
  QpResult qp;
  RealMatrix u;  // n_u x T
  RealMatrix y;  // n_y x T
  RealVector g;
  RealVector sigma;
  double stage_cost = 0.0;  // sum of y'Qy + u'Ru over the horizon
};

/// Throws ControlFailure when the QP does not reach Solved.
PredictiveSolution solve_predictive(const PredictiveQp& qp, const QpSettings& settings = {});

/// Least-squares estimate of x_0 from the past window using the true model.
RealVector estimate_state(const StateSpaceModel& model, const Trajectory& past_u,
                          const Trajectory& past_y);

enum class PastWindow {
  /// Zero-input response of the plant ending in the initial state.
  FreeResponse,
  /// Zeros for u and y, consistent only with a zero initial state.
  Zero,
};

struct RecedingHorizonConfig {
  Index steps = 50;
  RealVector initial_state;  // empty means zero
  PastWindow past_window = PastWindow::FreeResponse;
  QpSettings qp;
};

struct ClosedLoopResult {
  Trajectory u;
  Trajectory y;
  RealVector cumulative_cost;
  double cost = 0.0;
};

/// Applies the first optimal input at each step to the noise-free plant.
ClosedLoopResult receding_horizon_run(const Predictor& predictor, const PredictiveProblem& problem,
                                      const StateSpaceModel& plant,
                                      const RecedingHorizonConfig& config);

/// k, u..., y..., J_cumulative with 17 significant digits.
std::string closed_loop_csv(const ClosedLoopResult& run);

struct EquivalenceReport {
  double freepc_objective = 0.0;
  double deepc_objective = 0.0;
  double objective_relative_difference = 0.0;
  RealVector freepc_first_input;
  RealVector deepc_first_input;
  double first_input_difference = 0.0;
  bool equivalent = false;
};

/// Solves both problems with lambda_g = 0 and sigma pinned to zero and
/// compares optimal values and first inputs.
EquivalenceReport equivalence_check(const Predictor& freepc, const Predictor& deepc,
                                    PredictiveProblem problem, const Trajectory& past_u,
                                    const Trajectory& past_y, double tolerance = 1e-6,
                                    const QpSettings& settings = {});

}  // namespace fdc
