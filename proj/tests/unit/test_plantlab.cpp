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
#include "fdc/plantlab.hpp"
#include "fdc/presets.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

#include <numbers>
#include <random>

using namespace fdc;

namespace {

StateSpaceModel scalar(double a) {
  return StateSpaceModel(RealMatrix::Constant(1, 1, a), RealMatrix::Ones(1, 1),
                         RealMatrix::Ones(1, 1), RealMatrix::Zero(1, 1));
}

}  // namespace

TEST_CASE("simulate by hand") {
  RealMatrix u(1, 3);
  u << 1, 0, 0;
  const auto r = simulate(scalar(0.5), RealVector::Zero(1), Trajectory(u));
  RealMatrix y(1, 3);
  y << 0, 1, 0.5;
  CHECK(r.outputs.samples() == y);
  CHECK(r.final_state(0) == 0.25);

  const auto z = simulate(presets::batch_reactor(), RealVector::Zero(4),
                          Trajectory(RealMatrix::Zero(2, 5)));
  CHECK(z.outputs.samples().norm() == 0.0);
}

TEST_CASE("simulate matches the block response oracle") {
  const StateSpaceModel sys = presets::batch_reactor();
  std::mt19937_64 rng(31);
  const RealVector x0 = oracle::random_matrix(rng, 4, 1).col(0);
  const RealMatrix u = oracle::random_matrix(rng, 2, 6);
  const auto r = simulate(sys, x0, Trajectory(u));
  const RealVector expected = oracle::block_response(sys.a, sys.b, sys.c, sys.d, x0, u);
  CHECK((r.outputs.vectorized() - expected).norm() <= 1e-10 * expected.norm());
  CHECK((observability_matrix(sys, 6) * x0 + toeplitz_matrix(sys, 6) * Trajectory(u).vectorized() -
         expected).norm() <= 1e-10 * expected.norm());
}

TEST_CASE("transfer evaluation") {
  const StateSpaceModel d_only(RealMatrix::Zero(1, 1), RealMatrix::Zero(1, 1),
                               RealMatrix::Zero(1, 1), RealMatrix::Constant(1, 1, 3.0));
  CHECK(std::abs(transfer_eval(d_only, Complex(0.3, 0.1))(0, 0) - 3.0) <= 1e-15);
  CHECK(std::abs(transfer_eval(scalar(0.5), 1.0)(0, 0) - 2.0) <= 1e-15);
  CHECK_THROWS_AS(transfer_eval(scalar(0.5), 0.5), Error);

  const TransferFunction tf = presets::unstable_siso_plant();
  const Complex z = std::polar(1.0, std::numbers::pi / 4);
  const Complex expected = oracle::rational(tf.numerator, tf.denominator, z);
  CHECK(std::abs(transfer_eval(tf_to_state_space(tf), z)(0, 0) - expected) <= 1e-12);
  CHECK(std::abs(tf(z) - expected) <= 1e-12);
}

TEST_CASE("realization of transfer functions") {
  const StateSpaceModel first = tf_to_state_space(TransferFunction({1.0}, {1.0, -0.5}));
  CHECK(first.a(0, 0) == 0.5);
  CHECK(first.b(0, 0) * first.c(0, 0) == 1.0);
  CHECK(first.d(0, 0) == 0.0);

  const StateSpaceModel gain = tf_to_state_space(TransferFunction({2.0}, {1.0}));
  CHECK(gain.states() == 0);
  CHECK(gain.d(0, 0) == 2.0);

  const StateSpaceModel ctrl = realize(presets::batch_reactor_controller());
  const TransferMatrix tm = presets::batch_reactor_controller();
  for (const Complex z : {Complex(0.3, 0.4), Complex(-2.0, 0.1), Complex(0.0, 1.0)})
    CHECK((transfer_eval(ctrl, z) - tm(z)).norm() <= 1e-12);
}

TEST_CASE("steady-state spectra satisfy the state equations") {
  const StateSpaceModel sys = presets::batch_reactor();
  const FrequencyGrid grid(10);
  std::mt19937_64 rng(32);
  ComplexMatrix dirs = oracle::random_matrix(rng, 2, 10).cast<Complex>() +
                       Complex(0, 1) * oracle::random_matrix(rng, 2, 10).cast<Complex>();
  dirs.col(0) = dirs.col(0).real().cast<Complex>();
  const Experiment ex = steady_state_spectrum(sys, grid, dirs);
  REQUIRE(ex.state.has_value());
  for (Index k = 0; k < 10; ++k) {
    const Complex z = grid.unit_power(k);
    const ComplexVector x = ex.state->sample(k);
    const ComplexVector u = ex.input.sample(k);
    CHECK((z * x - sys.a.cast<Complex>() * x - sys.b.cast<Complex>() * u).norm() <= 1e-10);
    CHECK((ex.output.sample(k) - sys.c.cast<Complex>() * x).norm() <= 1e-10);
    CHECK((ex.output.sample(k) - transfer_eval(sys, z) * u).norm() <= 1e-10);
  }

  const Experiment zero = steady_state_spectrum(sys, grid, ComplexMatrix::Zero(2, 10));
  CHECK(zero.output.samples().norm() == 0.0);
  CHECK(zero.state->samples().norm() == 0.0);

  const StateSpaceModel siso = tf_to_state_space(presets::unstable_siso_plant());
  const Experiment one = steady_state_spectrum(siso, grid, ComplexMatrix::Ones(1, 10));
  for (Index k = 0; k < 10; ++k)
    CHECK(std::abs(one.output.samples()(0, k) - transfer_eval(siso, grid.unit_power(k))(0, 0)) <= 1e-12);
}

TEST_CASE("multisine") {
  const Trajectory c = multisine(1.0, FrequencyGrid(1), RealVector::Zero(1), 5);
  CHECK(c.samples() == RealMatrix::Ones(1, 5));

  const Trajectory two = multisine(1.0, FrequencyGrid(2), RealVector::Zero(2), 8);
  for (Index k = 0; k < 8; ++k) {
    CHECK(two.samples()(0, k) ==
          doctest::Approx(1.0 + std::cos(std::numbers::pi * static_cast<double>(k) / 2)));
    if (k >= 4) CHECK(std::abs(two.samples()(0, k) - two.samples()(0, k - 4)) <= 1e-12);
  }

  Rng rng(5);
  RealVector phases(10);
  for (Index i = 0; i < 10; ++i) phases(i) = rng.uniform(0.0, 2 * std::numbers::pi);
  const Trajectory d = multisine(10.0, FrequencyGrid(10), phases, 60);
  for (Index k = 20; k < 60; ++k)
    CHECK(std::abs(d.samples()(0, k) - d.samples()(0, k - 20)) <= 1e-12);
}

TEST_CASE("per-period DFT") {
  const FrequencyGrid grid(4);
  const auto ones = per_period_dft(Trajectory(RealMatrix::Ones(1, 8)), grid);
  REQUIRE(ones.size() == 1);
  CHECK(std::abs(ones[0](0, 0) - 8.0) <= 1e-12);
  for (Index k = 1; k < 4; ++k) CHECK(std::abs(ones[0](0, k)) <= 1e-12);

  RealMatrix cosine(1, 8);
  for (Index n = 0; n < 8; ++n) cosine(0, n) = std::cos(grid.frequency(1) * static_cast<double>(n));
  const auto c = per_period_dft(Trajectory(cosine), grid);
  CHECK(std::abs(c[0](0, 1) - 4.0) <= 1e-12);
  CHECK(std::abs(c[0](0, 2)) <= 1e-12);

  std::mt19937_64 rng(33);
  const RealMatrix v = oracle::random_matrix(rng, 1, 24);
  const auto spectra = per_period_dft(Trajectory(v), FrequencyGrid(6));
  REQUIRE(spectra.size() == 2);
  for (int p = 0; p < 2; ++p) {
    std::vector<double> period(12);
    for (int n = 0; n < 12; ++n) period[static_cast<std::size_t>(n)] = v(0, 12 * p + n);
    for (int k = 0; k < 6; ++k)
      CHECK(std::abs(spectra[static_cast<std::size_t>(p)](0, k) - oracle::direct_dft(period, k, 6)) <= 1e-10);
    CHECK(spectra[static_cast<std::size_t>(p)](0, 0).imag() == 0.0);
  }
}

TEST_CASE("closed-loop collection") {
  const StateSpaceModel plant = tf_to_state_space(presets::unstable_siso_plant());
  ClosedLoopSetup setup{plant, TransferMatrix::siso(presets::unstable_siso_controller()), 20, 3};
  const FrequencyGrid grid(20);
  const NoiseConfig silent{RealVector::Zero(1), 0};

  const auto quiet = closed_loop_collect(setup, {Trajectory(RealMatrix::Zero(1, 40))}, silent);
  CHECK(quiet[0].y.samples().norm() == 0.0);
  CHECK(quiet[0].u.samples().norm() == 0.0);

  Rng rng(6);
  RealVector phases(20);
  for (Index i = 0; i < 20; ++i) phases(i) = rng.uniform(0.0, 2 * std::numbers::pi);
  const auto rec = closed_loop_collect(setup, {multisine(1.0, grid, phases, 40)}, silent);
  REQUIRE(rec.size() == 1);
  CHECK(rec[0].y.length() == 120);
  CHECK(rec[0].y.samples().allFinite());
  const RealMatrix y = rec[0].y.samples();
  CHECK((y.middleCols(40, 40) - y.leftCols(40)).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK((y.rightCols(40) - y.middleCols(40, 40)).cwiseAbs().maxCoeff() <= 1e-6);

  // Without feedback the unstable plant diverges.
  ClosedLoopSetup open{plant, TransferMatrix::siso(TransferFunction({0.0}, {1.0})), 200, 1};
  CHECK_THROWS_AS(closed_loop_collect(open, {multisine(1.0, grid, phases, 40)}, silent), Error);
}

TEST_CASE("algebraic loop is rejected") {
  const StateSpaceModel plant(RealMatrix::Constant(1, 1, 0.5), RealMatrix::Ones(1, 1),
                              RealMatrix::Ones(1, 1), RealMatrix::Ones(1, 1));
  ClosedLoopSetup setup{plant, TransferMatrix::siso(TransferFunction({-1.0}, {1.0})), 1, 1};
  try {
    closed_loop_collect(setup, {Trajectory(RealMatrix::Ones(1, 2))}, NoiseConfig{RealVector::Zero(1), 0});
    FAIL("expected IllPosedLoop");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IllPosedLoop);
  }
}

TEST_CASE("FRF estimate from a noise-free loop") {
  const StateSpaceModel plant = tf_to_state_space(presets::unstable_siso_plant());
  ClosedLoopDatasetConfig cfg = presets::unstable_siso_dataset(4, 12);
  cfg.noise_standard_deviation = 0.0;
  const ClosedLoopDataset ds =
      collect_closed_loop_dataset(plant, TransferMatrix::siso(presets::unstable_siso_controller()), cfg);
  REQUIRE(ds.frf.has_value());
  for (Index k = 0; k < 20; ++k) {
    const Complex h = transfer_eval(plant, ds.frf->grid.unit_power(k))(0, 0);
    CHECK(std::abs(ds.frf->mean[static_cast<std::size_t>(k)](0, 0) - h) <= 1e-6);
    CHECK(ds.frf->variance[static_cast<std::size_t>(k)](0, 0) <= 1e-16 * std::max(1.0, std::norm(h)));
  }
}

TEST_CASE("identical periods give zero variance") {
  const FrequencyGrid grid(3);
  PeriodSpectra ps;
  ComplexMatrix d = ComplexMatrix::Ones(1, 3);
  ComplexMatrix u = 2.0 * d;
  ComplexMatrix y = Complex(0.5, 1.0) * d;
  y(0, 0) = 0.5;
  for (int p = 0; p < 2; ++p) {
    ps.d.push_back(d);
    ps.u.push_back(u);
    ps.y.push_back(y);
  }
  const FrfEstimate e = estimate_frf({ps}, grid);
  for (Index k = 0; k < 3; ++k) {
    CHECK(e.variance[static_cast<std::size_t>(k)](0, 0) == 0.0);
    const Complex expected = k == 0 ? Complex(0.25, 0.0) : Complex(0.25, 0.5);
    CHECK(std::abs(e.mean[static_cast<std::size_t>(k)](0, 0) - expected) <= 1e-15);
  }
}

TEST_CASE("variance shrinks with more periods") {
  // Ratio estimates are heavy tailed when D at a bin is small, so bins are
  // compared through medians over seeds.
  const StateSpaceModel plant = tf_to_state_space(presets::unstable_siso_plant());
  const auto ctrl = TransferMatrix::siso(presets::unstable_siso_controller());
  constexpr std::size_t kBins = 10;
  constexpr std::uint64_t kSeeds = 11;
  std::vector<std::vector<double>> few(kBins), many(kBins);
  int wins = 0;
  int trials = 0;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const auto a = collect_closed_loop_dataset(plant, ctrl, presets::unstable_siso_dataset(2, seed));
    const auto b = collect_closed_loop_dataset(plant, ctrl, presets::unstable_siso_dataset(50, seed));
    for (std::size_t k = 0; k < kBins; ++k) {
      few[k].push_back(a.frf->variance[k](0, 0));
      many[k].push_back(b.frf->variance[k](0, 0));
      ++trials;
      if (many[k].back() < few[k].back()) ++wins;
    }
  }
  auto median = [](std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2), v.end());
    return v[v.size() / 2];
  };
  for (std::size_t k = 0; k < kBins; ++k) CHECK(median(many[k]) < median(few[k]));
  CHECK(4 * wins > 3 * trials);
}

TEST_CASE("Gaussian generator is centred") {
  Rng rng(2024);
  const RealVector v = rng.normal_vector(100000);
  CHECK(std::abs(v.mean()) <= 5.0 / std::sqrt(1e5));
  const double var = (v.array() - v.mean()).square().mean();
  CHECK(std::abs(var - 1.0) <= 0.02);
  Rng again(2024);
  CHECK(again.normal_vector(10) == v.head(10));
}

TEST_CASE("closed-loop datasets are reproducible") {
  const StateSpaceModel plant = tf_to_state_space(presets::unstable_siso_plant());
  const auto ctrl = TransferMatrix::siso(presets::unstable_siso_controller());
  const auto a = collect_closed_loop_dataset(plant, ctrl, presets::unstable_siso_dataset(5, 99));
  const auto b = collect_closed_loop_dataset(plant, ctrl, presets::unstable_siso_dataset(5, 99));
  CHECK(a.data.experiments()[0].output.samples() == b.data.experiments()[0].output.samples());

  const auto mimo = collect_closed_loop_dataset(presets::batch_reactor(), presets::batch_reactor_controller(),
                                                presets::batch_reactor_dataset(5, 3));
  CHECK(mimo.data.experiment_count() == 2);
  CHECK_FALSE(mimo.frf.has_value());
  CHECK(mimo.data.grid().size() == 10);
}
