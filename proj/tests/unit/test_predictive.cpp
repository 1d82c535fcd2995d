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


#include "fdc/error.hpp"
#include "fdc/predictive.hpp"
#include "fdc/presets.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <limits>
#include <random>

using namespace fdc;

namespace {

const StateSpaceModel& siso() {
  static const StateSpaceModel m = tf_to_state_space(presets::unstable_siso_plant());
  return m;
}

const SpectraCollection& siso_data() {
  static const SpectraCollection d = unit_direction_dataset(siso(), FrequencyGrid(20), false);
  return d;
}

struct TimeRecord {
  Trajectory u, y;
};

// Recorded in the stabilized loop; open-loop data of the unstable plant grows like 1.28^k.
TimeRecord time_record(std::uint64_t seed, Index length) {
  Rng rng(seed);
  const Trajectory d(RealMatrix(rng.normal_vector(length).transpose()));
  const ClosedLoopSetup setup{siso(), TransferMatrix::siso(presets::unstable_siso_controller()), 0, 1};
  const LoopRecord rec = closed_loop_collect(setup, {d}, NoiseConfig{RealVector::Zero(1), 0}).front();
  return {rec.u, rec.y};
}

struct Past {
  Trajectory u, y;
};

Past random_past(std::mt19937_64& rng, Index length) {
  const RealVector x0 = 0.1 * oracle::random_matrix(rng, 2, 1).col(0);
  const Trajectory u(0.1 * oracle::random_matrix(rng, 1, length), -length);
  Trajectory y = simulate(siso(), x0, u).outputs;
  return {u, Trajectory(y.samples(), -length)};
}

}  // namespace

TEST_CASE("case-study problem builds and solves") {
  const PredictiveProblem pr = presets::unstable_siso_problem();
  const Predictor fp = Predictor::freepc(siso_data(), pr);
  const PredictiveQp qp = build_predictive_qp(fp, pr, Trajectory(RealMatrix::Zero(1, 6), -6),
                                              Trajectory(RealMatrix::Zero(1, 6), -6));
  CHECK(qp.g_size == 39);
  const PredictiveSolution s = solve_predictive(qp);
  CHECK(s.qp.status == QpStatus::Solved);
  CHECK(s.u.cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("prediction rows are real") {
  const DataPredictor d = freepc_predictor(siso_data(), 6, 10);
  CHECK(d.columns() == 39);
  const std::vector<SignalRole> roles{SignalRole::Input, SignalRole::Output};
  const DataMatrix full = build_data_matrix(16, siso_data(), roles);
  std::mt19937_64 rng(81);
  const RealVector g = oracle::random_matrix(rng, 39, 1).col(0);
  const ComplexVector big = conjugate_coordinates(g, 20, 1);
  const ComplexVector prod = full.complex_form * big;
  CHECK(prod.imag().cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, prod.norm()));
  CHECK((prod.real() - full.real_form * g).norm() <= 1e-10 * std::max(1.0, prod.norm()));
}

TEST_CASE("feasible set equals the plant trajectories") {
  PredictiveProblem pr = presets::unstable_siso_problem();
  pr.horizon = 5;
  pr.past_length = 4;
  pr.lambda_g = 0.0;
  pr.lambda_sigma = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(82);
  const Past past = random_past(rng, 4);
  const PredictiveQp qp = build_predictive_qp(Predictor::freepc(siso_data(), pr), pr, past.u, past.y);
  const RealVector x0 = estimate_state(siso(), past.u, past.y);

  const Index n = qp.qp.variables();
  const RealMatrix& a = qp.qp.eq_matrix;
  const RealVector xp = least_squares(a, qp.qp.eq_rhs).x;
  const RealMatrix ker = kernel_basis(a);
  for (int trial = 0; trial < 5; ++trial) {
    const RealVector z = xp + ker * oracle::random_matrix(rng, ker.cols(), 1).col(0);
    REQUIRE(z.size() == n);
    const Trajectory u(z.head(5).transpose());
    const RealVector y_sim = simulate(siso(), x0, u).outputs.vectorized();
    CHECK((z.segment(5, 5) - y_sim).norm() <= 1e-7 * std::max(1.0, y_sim.norm()));
  }
}

TEST_CASE("single-step problem with input cost only") {
  PredictiveProblem pr = presets::unstable_siso_problem();
  pr.horizon = 1;
  pr.past_length = 4;
  pr.output_weight = RealMatrix::Zero(1, 1);
  pr.y_lower = RealVector::Constant(1, -1e6);
  pr.y_upper = RealVector::Constant(1, 1e6);
  std::mt19937_64 rng(83);
  const Past past = random_past(rng, 4);
  const auto s = solve_predictive(build_predictive_qp(Predictor::model_based(siso()), pr, past.u, past.y));
  CHECK(std::abs(s.u(0, 0)) <= 1e-7);
}

TEST_CASE("FreePC and DeePC agree on noise-free data") {
  PredictiveProblem pr = presets::unstable_siso_problem();
  pr.horizon = 5;
  pr.past_length = 4;
  const TimeRecord rec = time_record(5, 80);
  const Predictor fp = Predictor::freepc(siso_data(), pr);
  const Predictor dp = Predictor::deepc(rec.u, rec.y, pr);
  std::mt19937_64 rng(84);
  for (int trial = 0; trial < 5; ++trial) {
    const Past past = random_past(rng, 4);
    const EquivalenceReport r = equivalence_check(fp, dp, pr, past.u, past.y);
    CHECK(r.equivalent);
    CHECK(r.objective_relative_difference <= 1e-6);
    CHECK(r.first_input_difference <= 1e-6);
  }
}

TEST_CASE("different plants are not equivalent") {
  PredictiveProblem pr = presets::unstable_siso_problem();
  pr.horizon = 5;
  pr.past_length = 4;
  pr.y_lower = RealVector::Constant(1, -1e3);
  pr.y_upper = RealVector::Constant(1, 1e3);
  const StateSpaceModel other = tf_to_state_space(TransferFunction({0.2, 0.05}, {1.0, -1.5, 0.6}));
  Rng rng(6);
  const Trajectory u(RealMatrix(rng.normal_vector(80).transpose()));
  const Trajectory y = simulate(other, RealVector::Zero(2), u).outputs;

  // A past window both plants can produce: y = O1 x1 + T1 u = O2 x2 + T2 u.
  auto response = [](const StateSpaceModel& m) {
    RealMatrix map(4, 6);
    for (Index j = 0; j < 6; ++j) {
      RealVector x = RealVector::Zero(2);
      RealMatrix uj = RealMatrix::Zero(1, 4);
      if (j < 2) x(j) = 1.0; else uj(0, j - 2) = 1.0;
      map.col(j) = simulate(m, x, Trajectory(uj)).outputs.vectorized();
    }
    return map;
  };
  const RealMatrix m1 = response(siso());
  const RealMatrix m2 = response(other);
  RealMatrix joint(4, 8);
  joint << m1.leftCols(2), -m2.leftCols(2), m1.rightCols(4) - m2.rightCols(4);
  const RealMatrix ker = kernel_basis(joint);
  REQUIRE(ker.cols() > 0);
  std::mt19937_64 prng(85);
  RealVector v = ker * oracle::random_matrix(prng, ker.cols(), 1).col(0);
  v *= 0.1 / v.lpNorm<Eigen::Infinity>();
  const RealVector past_u = v.tail(4);
  const RealVector past_y = m1 * (RealVector(6) << v.head(2), past_u).finished();
  REQUIRE((past_y - m2 * (RealVector(6) << v.segment(2, 2), past_u).finished()).norm() <= 1e-12);

  const EquivalenceReport r = equivalence_check(
      Predictor::freepc(siso_data(), pr), Predictor::deepc(u, y, pr), pr,
      Trajectory(RealMatrix(past_u.transpose()), -4), Trajectory(RealMatrix(past_y.transpose()), -4));
  CHECK_FALSE(r.equivalent);
}

TEST_CASE("model benchmark on the case study") {
  const PredictiveProblem pr = presets::unstable_siso_problem();
  RecedingHorizonConfig cfg;
  cfg.initial_state = presets::unstable_siso_initial_state();
  const ClosedLoopResult r = receding_horizon_run(Predictor::model_based(siso()), pr, siso(), cfg);
  CHECK(r.u.length() == 50);
  CHECK(r.y.samples()(0, 0) == doctest::Approx(1.05699287442452).epsilon(1e-10));
  CHECK(r.u.samples()(0, 0) == doctest::Approx(-3.0).epsilon(1e-6));
  CHECK(r.cost > 3.0);
  CHECK(r.cost < 3.4);
  CHECK(r.cumulative_cost(49) == doctest::Approx(r.cost));
}

TEST_CASE("FreePC on exact data tracks the model benchmark") {
  PredictiveProblem pr = presets::unstable_siso_problem();
  pr.lambda_g = 0.0;
  RecedingHorizonConfig cfg;
  cfg.steps = 15;
  cfg.initial_state = presets::unstable_siso_initial_state();
  const ClosedLoopResult a = receding_horizon_run(Predictor::model_based(siso()), pr, siso(), cfg);
  const ClosedLoopResult b = receding_horizon_run(Predictor::freepc(siso_data(), pr), pr, siso(), cfg);
  CHECK((a.u.samples() - b.u.samples()).cwiseAbs().maxCoeff() <= 1e-5);
  CHECK((a.y.samples() - b.y.samples()).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("zero state stays at rest") {
  const PredictiveProblem pr = presets::unstable_siso_problem();
  RecedingHorizonConfig cfg;
  cfg.steps = 10;
  cfg.past_window = PastWindow::Zero;
  const ClosedLoopResult r = receding_horizon_run(Predictor::freepc(siso_data(), pr), pr, siso(), cfg);
  CHECK(r.cost <= 1e-12);
  CHECK(r.u.samples().cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("closed-loop runs are deterministic") {
  const PredictiveProblem pr = presets::unstable_siso_problem();
  RecedingHorizonConfig cfg;
  cfg.steps = 8;
  cfg.initial_state = presets::unstable_siso_initial_state();
  const auto ds = collect_closed_loop_dataset(siso(), TransferMatrix::siso(presets::unstable_siso_controller()),
                                              presets::unstable_siso_dataset(5, 7));
  const std::string a = closed_loop_csv(receding_horizon_run(Predictor::freepc(ds.data, pr), pr, siso(), cfg));
  const std::string b = closed_loop_csv(receding_horizon_run(Predictor::freepc(ds.data, pr), pr, siso(), cfg));
  CHECK(a == b);
  CHECK(a.rfind("k,u1,y1,J_cumulative\n", 0) == 0);
}

TEST_CASE("problem validation") {
  PredictiveProblem pr = presets::unstable_siso_problem();
  pr.input_weight = RealMatrix::Zero(1, 1);
  CHECK_THROWS_AS(pr.validate(), Error);
  pr = presets::unstable_siso_problem();
  pr.u_lower(0) = 1.0;
  CHECK_THROWS_AS(pr.validate(), Error);
}
