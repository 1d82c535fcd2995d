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

#include <optional>
#include <span>
#include <vector>

namespace fdc {

/// Real vector-valued sequence v_r, ..., v_s stored column-wise
/// (column j holds v_{first_index + j}).
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(RealMatrix samples, long first_index = 0);

  /// Builds a trajectory from the stacked vector (v_r; v_{r+1}; ...).
  static Trajectory from_vectorized(const RealVector& stacked, Index channels, long first_index = 0);

  Index channels() const { return samples_.rows(); }
  Index length() const { return samples_.cols(); }
  long first_index() const { return first_index_; }
  const RealMatrix& samples() const { return samples_; }
  auto sample(Index j) const { return samples_.col(j); }

  RealVector vectorized() const;
  /// Sub-window [offset, offset + count) in local sample positions.
  Trajectory window(Index offset, Index count) const;

 private:
  RealMatrix samples_;
  long first_index_ = 0;
};

/// Equidistant grid w_k = pi k / M, k = 0..M-1. Angles are kept as the exact
/// rational k/M and only turned into floating point when evaluated.
class FrequencyGrid {
 public:
  FrequencyGrid() = default;
  explicit FrequencyGrid(Index m);

  Index size() const { return m_; }
  double frequency(Index k) const;
  std::vector<double> frequencies() const;
  /// e^{j w_k n}, with k*n reduced modulo 2M before the trig call.
  Complex unit_power(Index k, long n = 1) const;

  bool operator==(const FrequencyGrid&) const = default;

 private:
  Index m_ = 1;
};

/// Complex samples V_k of a spectrum on a grid; column k holds V_k.
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(FrequencyGrid grid, ComplexMatrix samples);

  const FrequencyGrid& grid() const { return grid_; }
  Index channels() const { return samples_.rows(); }
  const ComplexMatrix& samples() const { return samples_; }
  auto sample(Index k) const { return samples_.col(k); }

 private:
  FrequencyGrid grid_;
  ComplexMatrix samples_;
};

enum class SignalRole { Input, State, Output };

struct Experiment {
  Spectrum input;
  Spectrum output;
  std::optional<Spectrum> state;
};

/// E experiments sharing one grid and per-role channel counts.
class SpectraCollection {
 public:
  SpectraCollection() = default;
  SpectraCollection(FrequencyGrid grid, std::vector<Experiment> experiments);

  const FrequencyGrid& grid() const { return grid_; }
  Index experiment_count() const { return static_cast<Index>(experiments_.size()); }
  const std::vector<Experiment>& experiments() const { return experiments_; }
  bool has_state() const;
  Index input_channels() const;
  Index output_channels() const;
  Index state_channels() const;

  std::vector<Spectrum> spectra(SignalRole role) const;

 private:
  FrequencyGrid grid_;
  std::vector<Experiment> experiments_;
};

/// Stacked frequency-domain data matrix in complex and real coordinates.
/// Columns: E columns per frequency for k = 0..M-1, then E per conjugate
/// frequency for k = 1..M-1. Real form = complex form * T_Re.
struct DataMatrix {
  ComplexMatrix complex_form;
  RealMatrix real_form;
  Index depth = 0;
  std::vector<SignalRole> roles;
  Index experiments = 0;
  Index grid_size = 0;
};

RealMatrix hankel(Index depth, const Trajectory& traj);

ComplexVector vandermonde_column(Index length, Complex z);

/// Columns W_L(e^{j w_k}) (x) V_k for k = start..M-1.
ComplexMatrix f_matrix(Index depth, const Spectrum& spectrum, Index start_index);

/// Multi-experiment variant, one block of E columns per frequency.
ComplexMatrix cal_f_matrix(Index depth, std::span<const Spectrum> spectra, Index start_index);

/// [F(k=0..M-1) | conj F(k=1..M-1)] for one role, plus its real form.
DataMatrix build_data_matrix(Index depth, std::span<const Spectrum> spectra);

/// Stacks one block per role (same depth) in the given order.
DataMatrix build_data_matrix(Index depth, const SpectraCollection& data,
                             std::span<const SignalRole> roles);

/// Real form [Re F(k=0..M-1) | Im F(k=1..M-1)] without forming the conjugate block.
RealMatrix real_data_matrix(Index depth, std::span<const Spectrum> spectra);

/// T_Re for E experiments: G = T_Re g with g = (G0, 2 Re G1, -2 Im G1).
ComplexMatrix t_re_transform(Index grid_size, Index experiments);

/// g -> G = (G0, G1, conj G1).
ComplexVector conjugate_coordinates(const RealVector& g, Index grid_size, Index experiments);

/// G -> g = (G0, 2 Re G1, -2 Im G1). Uses the G0 and G1 blocks only.
RealVector real_coordinates(const ComplexVector& big_g, Index grid_size, Index experiments);

RealMatrix vstack(std::span<const RealMatrix> blocks);

}  // namespace fdc
