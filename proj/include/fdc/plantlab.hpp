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

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace fdc {

/// x_{k+1} = A x_k + B u_k,  y_k = C x_k + D u_k.
struct StateSpaceModel {
  RealMatrix a, b, c, d;

  StateSpaceModel() = default;
  StateSpaceModel(RealMatrix a, RealMatrix b, RealMatrix c, RealMatrix d);

  Index states() const { return a.rows(); }
  Index inputs() const { return b.cols(); }
  Index outputs() const { return c.rows(); }
};

/// SISO rational function, coefficients in descending powers of z.
struct TransferFunction {
  std::vector<double> numerator;
  std::vector<double> denominator;

  TransferFunction() = default;
  TransferFunction(std::vector<double> num, std::vector<double> den);

  Complex operator()(Complex z) const;
  Index order() const { return static_cast<Index>(denominator.size()) - 1; }
};

/// Matrix of SISO entries, row-major.
struct TransferMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<TransferFunction> entries;

  TransferMatrix() = default;
  TransferMatrix(Index rows, Index cols, std::vector<TransferFunction> entries);
  static TransferMatrix siso(TransferFunction tf) { return TransferMatrix(1, 1, {std::move(tf)}); }

  const TransferFunction& at(Index i, Index j) const {
    return entries[static_cast<std::size_t>(i * cols + j)];
  }
  ComplexMatrix operator()(Complex z) const;
};

struct NoiseConfig {
  RealVector standard_deviation;  // per output channel, >= 0
  std::uint64_t seed = 0;
};

/// Seeded generator used by every stochastic routine. Uniforms come from the
/// top 53 bits of std::mt19937_64; normals use the Box-Muller transform, so
/// streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // in (0, 1)
  double normal();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Raw 64-bit draw, used to seed derived streams.
  std::uint64_t next_seed() { return engine_(); }
  RealVector normal_vector(Index n);
  RealMatrix uniform_matrix(Index rows, Index cols, double lo, double hi);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct SimulationRecord {
  Trajectory states;   // x_0 .. x_{N-1}
  Trajectory outputs;  // y_0 .. y_{N-1}
  RealVector final_state;  // x_N
};

SimulationRecord simulate(const StateSpaceModel& model, const RealVector& x0,
                          const Trajectory& inputs);

/// H(z) = C (zI - A)^{-1} B + D. Throws EigenvalueHit when zI - A is singular.
ComplexMatrix transfer_eval(const StateSpaceModel& model, Complex z);

/// Steady-state (U_k, X_k, Y_k) for the given input directions (n_u x M).
Experiment steady_state_spectrum(const StateSpaceModel& model, const FrequencyGrid& grid,
                                 const ComplexMatrix& input_directions);

/// Controllable canonical realization of a proper SISO transfer function.
StateSpaceModel tf_to_state_space(const TransferFunction& tf);

/// Realizes each entry separately and concatenates the blocks (not minimal).
/// Identically zero entries contribute no states.
StateSpaceModel realize(const TransferMatrix& tm);

/// d_k = amplitude * sum_m cos(w_m k + phase_m) for k = 0..length-1.
Trajectory multisine(double amplitude, const FrequencyGrid& grid, const RealVector& phases,
                     Index length);

/// Feedback loop u = d - C(z) y around the plant, y = plant output + noise.
struct ClosedLoopSetup {
  StateSpaceModel plant;
  TransferMatrix controller;  // n_u x n_y
  Index warmup_periods = 20;
  Index recorded_periods = 50;
};

struct LoopRecord {
  Trajectory d, u, y;
};

/// One record per injection signal. Each injection holds exactly one period
/// (n_u channels); it is repeated for warmup + recorded periods and only the
/// recorded periods are returned. The loop starts from rest.
std::vector<LoopRecord> closed_loop_collect(const ClosedLoopSetup& setup,
                                            const std::vector<Trajectory>& injections,
                                            const NoiseConfig& noise);

/// Per-period DFT V_rho(w_k) = sum_{n<2M} v_n e^{-j w_k n}; one n_v x M
/// matrix per period.
std::vector<ComplexMatrix> per_period_dft(const Trajectory& signal, const FrequencyGrid& grid);

/// Per-period spectra of one closed-loop experiment.
struct PeriodSpectra {
  std::vector<ComplexMatrix> d, u, y;
};

PeriodSpectra period_spectra(const LoopRecord& record, const FrequencyGrid& grid);

struct FrfEstimate {
  FrequencyGrid grid;
  std::vector<ComplexMatrix> mean;   // per bin, n_y x n_u
  std::vector<RealMatrix> variance;  // per bin, variance of the mean, entrywise
  Index periods = 0;
};

/// H_rho = Y_rho D_rho^H (U_rho D_rho^H)^{-1} per period and bin (the SISO
/// case is Y D* / (U D*)), averaged over periods. Needs one experiment per
/// input channel and at least two periods.
FrfEstimate estimate_frf(const std::vector<PeriodSpectra>& experiments, const FrequencyGrid& grid);

/// Period-averaged input/output spectra of one experiment.
Experiment average_spectra(const PeriodSpectra& spectra, const FrequencyGrid& grid);

/// FRF as data: one experiment per input channel with U_k = e_i, Y_k = H_k e_i.
SpectraCollection frf_dataset(const FrfEstimate& frf);

/// Unit-direction dataset from a known model, one experiment per input.
SpectraCollection unit_direction_dataset(const StateSpaceModel& model, const FrequencyGrid& grid,
                                         bool with_state);

enum class DatasetMode {
  /// One experiment per input with U_k = e_i and Y_k = H_k e_i.
  FrfRatio,
  /// Period-averaged measured input and output spectra of each experiment.
  AveragedSpectra,
};

struct ClosedLoopDatasetConfig {
  double amplitude = 10.0;
  Index grid_size = 20;
  double noise_standard_deviation = 0.1;
  Index warmup_periods = 20;
  Index periods = 50;
  std::uint64_t seed = 0;
  DatasetMode mode = DatasetMode::FrfRatio;
};

struct ClosedLoopDataset {
  SpectraCollection data;
  std::optional<FrfEstimate> frf;  // FrfRatio mode only
  std::vector<RealVector> phases;  // per experiment
  std::vector<LoopRecord> records;  // retained periods, per experiment
};

/// Experiment e injects a multisine with uniform random phases into input e
/// only. Phases come first from the seeded stream, then the noise seed.
ClosedLoopDataset collect_closed_loop_dataset(const StateSpaceModel& plant,
                                              const TransferMatrix& controller,
                                              const ClosedLoopDatasetConfig& config);

/// Stacked [C; CA; ...; CA^{L-1}].
RealMatrix observability_matrix(const StateSpaceModel& model, Index depth);

/// Block lower-triangular Toeplitz map from u_[0,L-1] to y_[0,L-1] at x_0 = 0.
RealMatrix toeplitz_matrix(const StateSpaceModel& model, Index depth);

}  // namespace fdc
