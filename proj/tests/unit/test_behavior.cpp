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


#include "fdc/behavior.hpp"
#include "fdc/error.hpp"
#include "fdc/presets.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace fdc;

namespace {

const SpectraCollection& reactor_data() {
  static const SpectraCollection data =
      unit_direction_dataset(presets::batch_reactor(), FrequencyGrid(10), false);
  return data;
}

struct Window {
  Trajectory u, y;
};

Window random_window(std::mt19937_64& rng, Index length) {
  const StateSpaceModel sys = presets::batch_reactor();
  const RealVector x0 = oracle::random_matrix(rng, 4, 1).col(0);
  const Trajectory u(oracle::random_matrix(rng, 2, length));
  return {u, simulate(sys, x0, u).outputs};
}

}  // namespace

TEST_CASE("GVector round trip") {
  std::mt19937_64 rng(41);
  const RealVector g = oracle::random_matrix(rng, 2 * 19, 1).col(0);
  const GVector v = GVector::from_real(g, 10, 2);
  CHECK((v.real() - g).norm() <= 1e-12);
  CHECK((v.full() - t_re_transform(10, 2) * g.cast<Complex>()).norm() <= 1e-12);
}

TEST_CASE("membership of simulated and perturbed trajectories") {
  const auto zero = is_trajectory(reactor_data(), Trajectory(RealMatrix::Zero(2, 4)),
                                  Trajectory(RealMatrix::Zero(2, 4)));
  CHECK(zero.member);
  CHECK(zero.residual == 0.0);
  CHECK(zero.g.real().norm() == 0.0);

  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const Window w = random_window(rng, 4);
    const auto ok = is_trajectory(reactor_data(), w.u, w.y);
    CHECK(ok.member);
    CHECK(ok.residual <= 1e-9 * std::max(1.0, w.y.samples().norm()));

    RealMatrix bad = w.y.samples();
    bad(trial % 2, trial % 4) += 1.0;
    CHECK_FALSE(is_trajectory(reactor_data(), w.u, Trajectory(bad)).member);
  }
}

TEST_CASE("data-driven simulation of the reference experiment") {
  const BehaviorQuery q = presets::batch_reactor_query();
  const SimulationResult r = dd_simulate(reactor_data(), q);
  const RealMatrix truth = presets::batch_reactor_reference_outputs().rightCols(4);
  const double rel = (r.future_outputs.samples() - truth).norm() / truth.norm();
  CHECK(rel <= 1e-8);
  CHECK_FALSE(r.weak_data);
  CHECK(r.all_outputs.first_index() == -2);
  CHECK((r.all_outputs.samples().leftCols(2) - q.past_outputs.samples()).norm() <= 1e-9);
}

TEST_CASE("zero query predicts zero") {
  const BehaviorQuery q(Trajectory(RealMatrix::Zero(2, 2), -2), Trajectory(RealMatrix::Zero(2, 2), -2),
                        Trajectory(RealMatrix::Zero(2, 4)));
  CHECK(dd_simulate(reactor_data(), q).future_outputs.samples().norm() == 0.0);
}

TEST_CASE("simulation is independent of the chosen solution") {
  // With L0 = 2 >= lag, adding kernel directions of the past/future-input
  // rows to g does not change the predicted outputs.
  std::mt19937_64 rng(43);
  const Window w = random_window(rng, 6);
  const BehaviorQuery q(w.u.window(0, 2), w.y.window(0, 2), w.u.window(2, 4));
  const SimulationResult r = dd_simulate(reactor_data(), q);
  CHECK((r.future_outputs.samples() - w.y.samples().rightCols(4)).norm() <=
        1e-9 * std::max(1.0, w.y.samples().norm()));

  const std::vector<SignalRole> in{SignalRole::Input};
  const std::vector<SignalRole> out{SignalRole::Output};
  const RealMatrix lhs_u = build_data_matrix(6, reactor_data(), in).real_form;
  const RealMatrix y_rows = build_data_matrix(6, reactor_data(), out).real_form;
  RealMatrix lhs(lhs_u.rows() + 4, lhs_u.cols());
  lhs << lhs_u, y_rows.topRows(4);
  const RealMatrix ker = kernel_basis(lhs);
  REQUIRE(ker.cols() > 0);
  for (int trial = 0; trial < 5; ++trial) {
    const RealVector g2 = r.g.real() + ker * oracle::random_matrix(rng, ker.cols(), 1).col(0);
    const RealVector y2 = y_rows * g2;
    CHECK((y2.tail(8) - r.future_outputs.vectorized()).norm() <= 1e-9 * std::max(1.0, y2.norm()));
  }
}

TEST_CASE("inconsistent past window is rejected") {
  std::mt19937_64 rng(44);
  const Window w = random_window(rng, 6);
  // Three past samples over-determine the four states; two would not.
  RealMatrix past_y = w.y.samples().leftCols(3);
  past_y(0, 0) += 1.0;
  const BehaviorQuery q(w.u.window(0, 3), Trajectory(past_y), w.u.window(3, 3));
  try {
    dd_simulate(reactor_data(), q);
    FAIL("expected InconsistentPast");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InconsistentPast);
  }
}

TEST_CASE("frequency response evaluation") {
  const StateSpaceModel sys = presets::batch_reactor();
  const FrequencyGrid& grid = reactor_data().grid();

  const Experiment& first = reactor_data().experiments()[0];
  const auto on_grid = freq_response_eval(reactor_data(), grid.unit_power(3), first.input.sample(3), 2);
  CHECK((on_grid.y - first.output.sample(3)).norm() <= 1e-8);

  ComplexVector e1 = ComplexVector::Zero(2);
  e1(0) = 1.0;
  const Complex z(0.3, 0.2);
  const auto off = freq_response_eval(reactor_data(), z, e1, 2);
  const ComplexVector expected = transfer_eval(sys, z) * e1;
  CHECK((off.y - expected).norm() <= 1e-7 * (1 + expected.norm()));

  CHECK(freq_response_eval(reactor_data(), z, ComplexVector::Zero(2), 2).y.norm() == 0.0);

  CHECK((transfer_matrix_at(reactor_data(), 1.5, 2) - transfer_eval(sys, 1.5)).norm() <= 1e-7);
}

TEST_CASE("frequency response is linear in the input direction") {
  std::mt19937_64 rng(45);
  const Complex z(-0.4, 0.7);
  const ComplexVector a = oracle::random_matrix(rng, 2, 1).col(0).cast<Complex>();
  const ComplexVector b = Complex(0, 1) * oracle::random_matrix(rng, 2, 1).col(0).cast<Complex>();
  const Complex alpha(0.3, -1.2);
  const Complex beta(2.0, 0.5);
  const ComplexVector lhs = freq_response_eval(reactor_data(), z, alpha * a + beta * b, 2).y;
  const ComplexVector rhs = alpha * freq_response_eval(reactor_data(), z, a, 2).y +
                            beta * freq_response_eval(reactor_data(), z, b, 2).y;
  CHECK((lhs - rhs).norm() <= 1e-9 * std::max(1.0, rhs.norm()));
}

TEST_CASE("evaluation at an eigenvalue fails") {
  const Eigen::EigenSolver<RealMatrix> es(presets::batch_reactor().a, false);
  for (Index i = 0; i < 4; ++i) {
    try {
      transfer_matrix_at(reactor_data(), es.eigenvalues()(i), 2);
      FAIL("expected EvaluationFailed");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EvaluationFailed);
    }
  }
}
