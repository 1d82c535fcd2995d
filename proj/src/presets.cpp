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

#include "fdc/presets.hpp"

namespace fdc::presets {

StateSpaceModel batch_reactor(bool full_state) {
  RealMatrix a(4, 4);
  a << 2.622, 0.320, 1.834, -1.066,
      -0.238, 0.187, -0.136, 0.202,
       0.161, 0.789, 0.286, 0.606,
      -0.104, 0.764, 0.089, 0.736;
  RealMatrix b(4, 2);
  b << 0.465, -1.550,
       1.314, 0.085,
       2.055, -0.673,
       2.023, -0.160;
  RealMatrix c;
  if (full_state) {
    c = RealMatrix::Identity(4, 4);
  } else {
    c.resize(2, 4);
    c << 1, 0, 1, -1,
         0, 1, 0, 0;
  }
  return StateSpaceModel(a, b, c, RealMatrix::Zero(c.rows(), 2));
}

TransferMatrix batch_reactor_controller() {
  const std::vector<double> den{1.84, -1.84};
  return TransferMatrix(2, 2,
                        {TransferFunction({0.0}, den), TransferFunction({2.0, -1.0}, den),
                         TransferFunction({-5.0, 1.0}, den), TransferFunction({0.0}, den)});
}

TransferFunction unstable_siso_plant() {
  return TransferFunction({0.1164, 0.1071}, {1.0, -1.891, 0.7788});
}

TransferFunction unstable_siso_controller() { return TransferFunction({6.0, -5.135}, {1.0, -0.1353}); }

RealMatrix batch_reactor_reference_outputs() {
  RealMatrix y(2, 6);
  y << 0.0, 0.0796062850142301, -4.23015965635392, -13.2866806372036, -35.2997814361602,
      -92.3748185416057,
      0.0, -2.41633334520667, 1.00779892811992, 1.46232091821327, 4.88089401540998,
      12.5200312646187;
  return y;
}

Trajectory batch_reactor_reference_inputs() {
  const StateSpaceModel sys = batch_reactor();
  const RealMatrix y = batch_reactor_reference_outputs();
  const Eigen::PartialPivLU<RealMatrix> cb(sys.c * sys.b);
  RealMatrix u = RealMatrix::Zero(2, 6);
  RealVector x = RealVector::Zero(4);
  for (Index k = 0; k + 1 < u.cols(); ++k) {
    u.col(k) = cb.solve(y.col(k + 1) - sys.c * sys.a * x);
    x = sys.a * x + sys.b * u.col(k);
  }
  return Trajectory(u, -2);
}

BehaviorQuery batch_reactor_query() {
  const RealMatrix u = batch_reactor_reference_inputs().samples();
  const RealMatrix y = batch_reactor_reference_outputs();
  return BehaviorQuery(Trajectory(u.leftCols(2), -2), Trajectory(y.leftCols(2), -2),
                       Trajectory(u.rightCols(4)));
}

ClosedLoopDatasetConfig batch_reactor_dataset(Index periods, std::uint64_t seed) {
  ClosedLoopDatasetConfig c;
  c.amplitude = 10.0;
  c.grid_size = 10;
  c.periods = periods;
  c.seed = seed;
  c.mode = DatasetMode::AveragedSpectra;
  return c;
}

ClosedLoopDatasetConfig unstable_siso_dataset(Index periods, std::uint64_t seed) {
  ClosedLoopDatasetConfig c;
  c.amplitude = 1.0;
  c.grid_size = 20;
  c.periods = periods;
  c.seed = seed;
  c.mode = DatasetMode::FrfRatio;
  return c;
}

PredictiveProblem unstable_siso_problem() {
  PredictiveProblem p;
  p.horizon = 10;
  p.past_length = 6;
  p.output_weight = RealMatrix::Identity(1, 1);
  p.input_weight = RealMatrix::Constant(1, 1, 0.01);
  p.u_lower = RealVector::Constant(1, -3.0);
  p.u_upper = RealVector::Constant(1, 0.5);
  p.y_lower = RealVector::Constant(1, -0.5);
  p.y_upper = RealVector::Constant(1, 1.2);
  return p;
}

RealVector unstable_siso_initial_state() {
  const StateSpaceModel sys = tf_to_state_space(unstable_siso_plant());
  const double y0 = 1.05699287442452;
  const double u0 = -2.99999999454487;
  const double y1 = 1.14787829157727;
  RealVector rhs(2);
  rhs << y0, y1 - (sys.c * sys.b)(0, 0) * u0;
  return observability_matrix(sys, 2).partialPivLu().solve(rhs);
}

}  // namespace fdc::presets
