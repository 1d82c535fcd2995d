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

#include "fdc/core.hpp"

#include "fdc/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fdc {

Trajectory::Trajectory(RealMatrix samples, long first_index)
    : samples_(std::move(samples)), first_index_(first_index) {
  require(samples_.rows() > 0 && samples_.cols() > 0, ErrorCode::InvalidInput,
          "trajectory: empty channel or index range");
  require_finite(samples_, "trajectory");
}

Trajectory Trajectory::from_vectorized(const RealVector& stacked, Index channels,
                                       long first_index) {
  require(channels > 0 && stacked.size() % channels == 0, ErrorCode::InvalidInput,
          "trajectory: stacked length is not a multiple of the channel count");
  RealMatrix samples = stacked.reshaped(channels, stacked.size() / channels);
  return Trajectory(std::move(samples), first_index);
}

RealVector Trajectory::vectorized() const { return samples_.reshaped(); }

Trajectory Trajectory::window(Index offset, Index count) const {
  require(offset >= 0 && count > 0 && offset + count <= length(), ErrorCode::InvalidInput,
          "trajectory: window out of range");
  return Trajectory(samples_.middleCols(offset, count), first_index_ + static_cast<long>(offset));
}

FrequencyGrid::FrequencyGrid(Index m) : m_(m) {
  require(m >= 1, ErrorCode::InvalidInput, "frequency grid: M must be at least 1");
}

double FrequencyGrid::frequency(Index k) const {
  return std::numbers::pi * static_cast<double>(k) / static_cast<double>(m_);
}

std::vector<double> FrequencyGrid::frequencies() const {
  std::vector<double> out(static_cast<std::size_t>(m_));
  for (Index k = 0; k < m_; ++k) out[static_cast<std::size_t>(k)] = frequency(k);
  return out;
}

Complex FrequencyGrid::unit_power(Index k, long n) const {
  const long period = 2 * static_cast<long>(m_);
  long r = (static_cast<long>(k) * n) % period;
  if (r < 0) r += period;
  if (r == 0) return {1.0, 0.0};
  if (2 * r == period) return {-1.0, 0.0};
  const double angle = std::numbers::pi * static_cast<double>(r) / static_cast<double>(m_);
  return {std::cos(angle), std::sin(angle)};
}

Spectrum::Spectrum(FrequencyGrid grid, ComplexMatrix samples)
    : grid_(grid), samples_(std::move(samples)) {
  require(samples_.rows() > 0, ErrorCode::InvalidInput, "spectrum: no channels");
  require(samples_.cols() == grid_.size(), ErrorCode::InvalidInput,
          "spectrum: expected " + std::to_string(grid_.size()) + " samples, got " +
              std::to_string(samples_.cols()));
  require_finite(samples_, "spectrum");
  for (Index i = 0; i < samples_.rows(); ++i) {
    const Complex v = samples_(i, 0);
    require(std::abs(v.imag()) <= 1e-12 * std::abs(v), ErrorCode::InvalidInput,
            "spectrum: sample at frequency 0 must be real");
  }
}

SpectraCollection::SpectraCollection(FrequencyGrid grid, std::vector<Experiment> experiments)
    : grid_(grid), experiments_(std::move(experiments)) {
  require(!experiments_.empty(), ErrorCode::InvalidInput, "spectra: no experiments");
  const auto& first = experiments_.front();
  for (const auto& e : experiments_) {
    require(e.input.grid() == grid_ && e.output.grid() == grid_, ErrorCode::InvalidInput,
            "spectra: grid mismatch between experiments");
    require(e.input.channels() == first.input.channels() &&
                e.output.channels() == first.output.channels(),
            ErrorCode::InvalidInput, "spectra: channel count mismatch between experiments");
    require(e.state.has_value() == first.state.has_value(), ErrorCode::InvalidInput,
            "spectra: state spectra must be given for all experiments or none");
    if (e.state) {
      require(e.state->grid() == grid_ && e.state->channels() == first.state->channels(),
              ErrorCode::InvalidInput, "spectra: state spectrum mismatch");
    }
  }
}

bool SpectraCollection::has_state() const { return experiments_.front().state.has_value(); }
Index SpectraCollection::input_channels() const { return experiments_.front().input.channels(); }
Index SpectraCollection::output_channels() const { return experiments_.front().output.channels(); }
Index SpectraCollection::state_channels() const {
  return has_state() ? experiments_.front().state->channels() : 0;
}

std::vector<Spectrum> SpectraCollection::spectra(SignalRole role) const {
  std::vector<Spectrum> out;
  out.reserve(experiments_.size());
  for (const auto& e : experiments_) {
    switch (role) {
      case SignalRole::Input: out.push_back(e.input); break;
      case SignalRole::Output: out.push_back(e.output); break;
      case SignalRole::State:
        require(e.state.has_value(), ErrorCode::InvalidInput, "spectra: no state spectrum");
        out.push_back(*e.state);
        break;
    }
  }
  return out;
}

RealMatrix hankel(Index depth, const Trajectory& traj) {
  const Index n = traj.length();
  require(depth >= 1 && depth <= n, ErrorCode::InvalidInput,
          "hankel: depth " + std::to_string(depth) + " outside [1, " + std::to_string(n) + "]");
  const Index nv = traj.channels();
  const Index cols = n - depth + 1;
  RealMatrix h(nv * depth, cols);
  for (Index i = 0; i < depth; ++i) h.middleRows(i * nv, nv) = traj.samples().middleCols(i, cols);
  return h;
}

ComplexVector vandermonde_column(Index length, Complex z) {
  require(length >= 1, ErrorCode::InvalidInput, "vandermonde_column: length must be >= 1");
  ComplexVector w(length);
  Complex p{1.0, 0.0};
  for (Index i = 0; i < length; ++i) {
    w(i) = p;
    p *= z;
  }
  return w;
}

ComplexMatrix cal_f_matrix(Index depth, std::span<const Spectrum> spectra, Index start_index) {
  require(!spectra.empty(), ErrorCode::InvalidInput, "F matrix: no spectra");
  require(depth >= 1, ErrorCode::InvalidInput, "F matrix: depth must be >= 1");
  const FrequencyGrid& grid = spectra.front().grid();
  const Index nv = spectra.front().channels();
  for (const auto& s : spectra) {
    require(s.grid() == grid, ErrorCode::InvalidInput, "F matrix: grid mismatch");
    require(s.channels() == nv, ErrorCode::InvalidInput, "F matrix: channel mismatch");
  }
  require(start_index == 0 || start_index == 1, ErrorCode::InvalidInput,
          "F matrix: start index must be 0 or 1");
  const Index m = grid.size();
  require(start_index < m, ErrorCode::InvalidInput, "F matrix: empty frequency range");
  const Index e_count = static_cast<Index>(spectra.size());
  ComplexMatrix f(nv * depth, (m - start_index) * e_count);
  for (Index k = start_index; k < m; ++k) {
    for (Index i = 0; i < depth; ++i) {
      const Complex zi = grid.unit_power(k, static_cast<long>(i));
      for (Index e = 0; e < e_count; ++e) {
        f.block(i * nv, (k - start_index) * e_count + e, nv, 1) =
            zi * spectra[static_cast<std::size_t>(e)].sample(k);
      }
    }
  }
  return f;
}

ComplexMatrix f_matrix(Index depth, const Spectrum& spectrum, Index start_index) {
  return cal_f_matrix(depth, std::span<const Spectrum>(&spectrum, 1), start_index);
}

RealMatrix real_data_matrix(Index depth, std::span<const Spectrum> spectra) {
  const ComplexMatrix full = cal_f_matrix(depth, spectra, 0);
  const Index e_count = static_cast<Index>(spectra.size());
  const Index positive = full.cols() - e_count;
  RealMatrix out(full.rows(), full.cols() + positive);
  out.leftCols(full.cols()) = full.real();
  out.rightCols(positive) = full.rightCols(positive).imag();
  return out;
}

DataMatrix build_data_matrix(Index depth, std::span<const Spectrum> spectra) {
  const ComplexMatrix full = cal_f_matrix(depth, spectra, 0);
  const Index e_count = static_cast<Index>(spectra.size());
  const Index positive = full.cols() - e_count;
  DataMatrix dm;
  dm.depth = depth;
  dm.experiments = e_count;
  dm.grid_size = spectra.front().grid().size();
  dm.complex_form.resize(full.rows(), full.cols() + positive);
  dm.complex_form.leftCols(full.cols()) = full;
  dm.complex_form.rightCols(positive) = full.rightCols(positive).conjugate();
  dm.real_form = real_data_matrix(depth, spectra);
  return dm;
}

DataMatrix build_data_matrix(Index depth, const SpectraCollection& data,
                             std::span<const SignalRole> roles) {
  require(!roles.empty(), ErrorCode::InvalidInput, "data matrix: no roles requested");
  std::vector<DataMatrix> parts;
  Index rows = 0;
  for (SignalRole role : roles) {
    if (role == SignalRole::State) {
      require(data.has_state(), ErrorCode::InvalidInput, "data matrix: state role missing");
    }
    const auto spectra = data.spectra(role);
    parts.push_back(build_data_matrix(depth, spectra));
    rows += parts.back().complex_form.rows();
  }
  DataMatrix dm;
  dm.depth = depth;
  dm.roles.assign(roles.begin(), roles.end());
  dm.experiments = data.experiment_count();
  dm.grid_size = data.grid().size();
  const Index cols = parts.front().complex_form.cols();
  dm.complex_form.resize(rows, cols);
  dm.real_form.resize(rows, cols);
  Index r = 0;
  for (const auto& p : parts) {
    dm.complex_form.middleRows(r, p.complex_form.rows()) = p.complex_form;
    dm.real_form.middleRows(r, p.real_form.rows()) = p.real_form;
    r += p.complex_form.rows();
  }
  return dm;
}

ComplexMatrix t_re_transform(Index grid_size, Index experiments) {
  require(grid_size >= 1 && experiments >= 1, ErrorCode::InvalidInput,
          "T_Re: grid size and experiment count must be positive");
  const Index e = experiments;
  const Index h = e * (grid_size - 1);
  const Index n = e + 2 * h;
  ComplexMatrix t = ComplexMatrix::Zero(n, n);
  t.topLeftCorner(e, e).setIdentity();
  const Complex j{0.0, 1.0};
  for (Index i = 0; i < h; ++i) {
    t(e + i, e + i) = 0.5;
    t(e + i, e + h + i) = -0.5 * j;
    t(e + h + i, e + i) = 0.5;
    t(e + h + i, e + h + i) = 0.5 * j;
  }
  return t;
}

ComplexVector conjugate_coordinates(const RealVector& g, Index grid_size, Index experiments) {
  const Index e = experiments;
  const Index h = e * (grid_size - 1);
  require(g.size() == e + 2 * h, ErrorCode::InvalidInput, "conjugate_coordinates: size mismatch");
  ComplexVector big_g(g.size());
  big_g.head(e) = g.head(e).cast<Complex>();
  for (Index i = 0; i < h; ++i) {
    const Complex g1{0.5 * g(e + i), -0.5 * g(e + h + i)};
    big_g(e + i) = g1;
    big_g(e + h + i) = std::conj(g1);
  }
  return big_g;
}

RealVector real_coordinates(const ComplexVector& big_g, Index grid_size, Index experiments) {
  const Index e = experiments;
  const Index h = e * (grid_size - 1);
  require(big_g.size() == e + 2 * h, ErrorCode::InvalidInput, "real_coordinates: size mismatch");
  RealVector g(big_g.size());
  g.head(e) = big_g.head(e).real();
  g.segment(e, h) = 2.0 * big_g.segment(e, h).real();
  g.tail(h) = -2.0 * big_g.segment(e, h).imag();
  return g;
}

RealMatrix vstack(std::span<const RealMatrix> blocks) {
  Index rows = 0;
  const Index cols = blocks.empty() ? 0 : blocks.front().cols();
  for (const auto& b : blocks) {
    require(b.cols() == cols, ErrorCode::InvalidInput, "vstack: column mismatch");
    rows += b.rows();
  }
  RealMatrix out(rows, cols);
  Index r = 0;
  for (const auto& b : blocks) {
    out.middleRows(r, b.rows()) = b;
    r += b.rows();
  }
  return out;
}

}  // namespace fdc
