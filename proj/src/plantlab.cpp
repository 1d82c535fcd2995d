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

#include "fdc/plantlab.hpp"

#include "fdc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fdc {

StateSpaceModel::StateSpaceModel(RealMatrix a_, RealMatrix b_, RealMatrix c_, RealMatrix d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
  require(a.rows() == a.cols(), ErrorCode::InvalidInput, "state space: A must be square");
  require(b.rows() == a.rows(), ErrorCode::InvalidInput, "state space: B rows != n_x");
  require(c.cols() == a.rows(), ErrorCode::InvalidInput, "state space: C cols != n_x");
  require(d.rows() == c.rows() && d.cols() == b.cols(), ErrorCode::InvalidInput,
          "state space: D must be n_y x n_u");
  require(b.cols() > 0 && c.rows() > 0, ErrorCode::InvalidInput,
          "state space: need at least one input and one output");
  require_finite(a, "A");
  require_finite(b, "B");
  require_finite(c, "C");
  require_finite(d, "D");
}

namespace {

std::vector<double> trim_leading_zeros(std::vector<double> p) {
  std::size_t i = 0;
  while (i + 1 < p.size() && p[i] == 0.0) ++i;
  p.erase(p.begin(), p.begin() + static_cast<long>(i));
  return p;
}

Complex polyval(const std::vector<double>& p, Complex z) {
  Complex acc{0.0, 0.0};
  for (double c : p) acc = acc * z + c;
  return acc;
}

}  // namespace

TransferFunction::TransferFunction(std::vector<double> num, std::vector<double> den)
    : numerator(trim_leading_zeros(std::move(num))), denominator(std::move(den)) {
  require(!numerator.empty() && !denominator.empty(), ErrorCode::InvalidInput,
          "transfer function: empty polynomial");
  require(denominator.front() != 0.0, ErrorCode::InvalidInput,
          "transfer function: leading denominator coefficient is zero");
}

Complex TransferFunction::operator()(Complex z) const {
  return polyval(numerator, z) / polyval(denominator, z);
}

TransferMatrix::TransferMatrix(Index r, Index c, std::vector<TransferFunction> e)
    : rows(r), cols(c), entries(std::move(e)) {
  require(r > 0 && c > 0 && static_cast<Index>(entries.size()) == r * c, ErrorCode::InvalidInput,
          "transfer matrix: entry count must equal rows * cols");
}

ComplexMatrix TransferMatrix::operator()(Complex z) const {
  ComplexMatrix h(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) h(i, j) = at(i, j)(z);
  return h;
}

double Rng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

RealVector Rng::normal_vector(Index n) {
  RealVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal();
  return v;
}

RealMatrix Rng::uniform_matrix(Index rows, Index cols, double lo, double hi) {
  RealMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = uniform(lo, hi);
  return m;
}

SimulationRecord simulate(const StateSpaceModel& model, const RealVector& x0,
                          const Trajectory& inputs) {
  require(x0.size() == model.states(), ErrorCode::InvalidInput, "simulate: x0 has wrong size");
  require(inputs.channels() == model.inputs(), ErrorCode::InvalidInput,
          "simulate: input channel count mismatch");
  require_finite(x0, "simulate x0");
  const Index n = inputs.length();
  RealMatrix xs(std::max<Index>(model.states(), 1), n);
  RealMatrix ys(model.outputs(), n);
  RealVector x = x0;
  for (Index k = 0; k < n; ++k) {
    const auto u = inputs.sample(k);
    if (model.states() > 0) xs.col(k) = x;
    ys.col(k) = model.c * x + model.d * u;
    x = model.a * x + model.b * u;
  }
  SimulationRecord rec;
  if (model.states() > 0) {
    rec.states = Trajectory(std::move(xs), inputs.first_index());
  }
  rec.outputs = Trajectory(std::move(ys), inputs.first_index());
  rec.final_state = x;
  return rec;
}

ComplexMatrix transfer_eval(const StateSpaceModel& model, Complex z) {
  const Index n = model.states();
  if (n == 0) return model.d.cast<Complex>();
  ComplexMatrix m = -model.a.cast<Complex>();
  m.diagonal().array() += z;
  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  if (!(lu.rcond() > 1e-13)) {
    fail(ErrorCode::EigenvalueHit, "transfer_eval: z is (numerically) an eigenvalue of A");
  }
  return model.c.cast<Complex>() * lu.solve(model.b.cast<Complex>()) + model.d.cast<Complex>();
}

Experiment steady_state_spectrum(const StateSpaceModel& model, const FrequencyGrid& grid,
                                 const ComplexMatrix& input_directions) {
  require(input_directions.rows() == model.inputs() && input_directions.cols() == grid.size(),
          ErrorCode::InvalidInput, "steady_state_spectrum: directions must be n_u x M");
  const Index n = model.states();
  ComplexMatrix xs(std::max<Index>(n, 1), grid.size());
  xs.setZero();
  ComplexMatrix ys(model.outputs(), grid.size());
  for (Index k = 0; k < grid.size(); ++k) {
    const Complex z = grid.unit_power(k);
    const ComplexVector uk = input_directions.col(k);
    if (n > 0) {
      ComplexMatrix m = -model.a.cast<Complex>();
      m.diagonal().array() += z;
      Eigen::PartialPivLU<ComplexMatrix> lu(m);
      if (!(lu.rcond() > 1e-13)) {
        fail(ErrorCode::EigenvalueHit,
             "steady_state_spectrum: grid frequency " + std::to_string(k) + " hits an eigenvalue of A");
      }
      xs.col(k) = lu.solve(model.b.cast<Complex>() * uk);
      ys.col(k) = model.c.cast<Complex>() * xs.col(k) + model.d.cast<Complex>() * uk;
    } else {
      ys.col(k) = model.d.cast<Complex>() * uk;
    }
  }
  Experiment e;
  e.input = Spectrum(grid, input_directions);
  e.output = Spectrum(grid, ys);
  if (n > 0) e.state = Spectrum(grid, xs);
  return e;
}

StateSpaceModel tf_to_state_space(const TransferFunction& tf) {
  const auto& den = tf.denominator;
  const Index n = static_cast<Index>(den.size()) - 1;
  require(static_cast<Index>(tf.numerator.size()) - 1 <= n, ErrorCode::InvalidInput,
          "tf_to_state_space: improper transfer function");
  const double lead = den.front();
  std::vector<double> a(den.size());
  for (std::size_t i = 0; i < den.size(); ++i) a[i] = den[i] / lead;
  std::vector<double> b(den.size(), 0.0);
  const std::size_t offset = den.size() - tf.numerator.size();
  for (std::size_t i = 0; i < tf.numerator.size(); ++i) b[offset + i] = tf.numerator[i] / lead;

  const double d = b[0];
  RealMatrix am = RealMatrix::Zero(n, n);
  RealMatrix bm = RealMatrix::Zero(n, 1);
  RealMatrix cm = RealMatrix::Zero(1, n);
  if (n > 0) {
    for (Index j = 0; j < n; ++j) {
      am(0, j) = -a[static_cast<std::size_t>(j + 1)];
      cm(0, j) = b[static_cast<std::size_t>(j + 1)] - d * a[static_cast<std::size_t>(j + 1)];
    }
    for (Index i = 1; i < n; ++i) am(i, i - 1) = 1.0;
    bm(0, 0) = 1.0;
  }
  return StateSpaceModel(am, bm, cm, RealMatrix::Constant(1, 1, d));
}

StateSpaceModel realize(const TransferMatrix& tm) {
  std::vector<StateSpaceModel> parts;
  Index n = 0;
  for (const auto& e : tm.entries) {
    const bool zero = std::all_of(e.numerator.begin(), e.numerator.end(),
                                  [](double v) { return v == 0.0; });
    parts.push_back(zero ? tf_to_state_space(TransferFunction({0.0}, {1.0})) : tf_to_state_space(e));
    n += parts.back().states();
  }
  RealMatrix a = RealMatrix::Zero(n, n);
  RealMatrix b = RealMatrix::Zero(n, tm.cols);
  RealMatrix c = RealMatrix::Zero(tm.rows, n);
  RealMatrix d = RealMatrix::Zero(tm.rows, tm.cols);
  Index offset = 0;
  for (Index i = 0; i < tm.rows; ++i) {
    for (Index j = 0; j < tm.cols; ++j) {
      const auto& p = parts[static_cast<std::size_t>(i * tm.cols + j)];
      const Index ni = p.states();
      a.block(offset, offset, ni, ni) = p.a;
      b.block(offset, j, ni, 1) = p.b;
      c.block(i, offset, 1, ni) = p.c;
      d(i, j) = p.d(0, 0);
      offset += ni;
    }
  }
  return StateSpaceModel(a, b, c, d);
}

Trajectory multisine(double amplitude, const FrequencyGrid& grid, const RealVector& phases,
                     Index length) {
  require(length >= 1, ErrorCode::InvalidInput, "multisine: length must be >= 1");
  require(phases.size() == grid.size(), ErrorCode::InvalidInput, "multisine: need M phases");
  const long period = 2 * static_cast<long>(grid.size());
  RealMatrix d(1, length);
  for (Index k = 0; k < length; ++k) {
    double acc = 0.0;
    for (Index m = 0; m < grid.size(); ++m) {
      const long r = (static_cast<long>(m) * static_cast<long>(k)) % period;
      const double angle = std::numbers::pi * static_cast<double>(r) / static_cast<double>(grid.size());
      acc += std::cos(angle + phases(m));
    }
    d(0, k) = amplitude * acc;
  }
  return Trajectory(std::move(d));
}

std::vector<LoopRecord> closed_loop_collect(const ClosedLoopSetup& setup,
                                            const std::vector<Trajectory>& injections,
                                            const NoiseConfig& noise) {
  const StateSpaceModel& plant = setup.plant;
  require(setup.controller.rows == plant.inputs() && setup.controller.cols == plant.outputs(),
          ErrorCode::InvalidInput, "closed loop: controller must be n_u x n_y");
  require(setup.warmup_periods >= 0 && setup.recorded_periods >= 1, ErrorCode::InvalidInput,
          "closed loop: need at least one recorded period");
  require(noise.standard_deviation.size() == plant.outputs() &&
              (noise.standard_deviation.array() >= 0.0).all(),
          ErrorCode::InvalidInput, "closed loop: one nonnegative noise level per output");
  const StateSpaceModel ctrl = realize(setup.controller);

  // y = (I + D Dc)^{-1} (C x + D (d - Cc xc) + n)
  const RealMatrix loop_gain =
      RealMatrix::Identity(plant.outputs(), plant.outputs()) + plant.d * ctrl.d;
  Eigen::FullPivLU<RealMatrix> loop_lu(loop_gain);
  require(loop_lu.isInvertible() && loop_lu.rcond() > 1e-12, ErrorCode::IllPosedLoop,
          "closed loop: I + D_plant * D_controller is singular (algebraic loop)");

  Rng rng(noise.seed);
  std::vector<LoopRecord> out;
  for (const auto& inj : injections) {
    require(inj.channels() == plant.inputs(), ErrorCode::InvalidInput,
            "closed loop: injection must have n_u channels");
    const Index period = inj.length();
    const Index total = period * (setup.warmup_periods + setup.recorded_periods);
    const Index keep_from = period * setup.warmup_periods;
    const Index kept = total - keep_from;
    RealMatrix dm(plant.inputs(), kept), um(plant.inputs(), kept), ym(plant.outputs(), kept);
    RealVector x = RealVector::Zero(plant.states());
    RealVector xc = RealVector::Zero(ctrl.states());
    for (Index k = 0; k < total; ++k) {
      const RealVector d = inj.sample(k % period);
      RealVector n(plant.outputs());
      for (Index i = 0; i < plant.outputs(); ++i) n(i) = noise.standard_deviation(i) * rng.normal();
      const RealVector y =
          loop_lu.solve(plant.c * x + plant.d * (d - ctrl.c * xc) + n);
      const RealVector u = d - ctrl.c * xc - ctrl.d * y;
      if (!(y.allFinite()) || y.norm() > 1e9) {
        fail(ErrorCode::DivergedLoop, "closed loop diverged at sample " + std::to_string(k));
      }
      if (k >= keep_from) {
        dm.col(k - keep_from) = d;
        um.col(k - keep_from) = u;
        ym.col(k - keep_from) = y;
      }
      x = plant.a * x + plant.b * u;
      xc = ctrl.a * xc + ctrl.b * y;
    }
    out.push_back({Trajectory(std::move(dm)), Trajectory(std::move(um)), Trajectory(std::move(ym))});
  }
  return out;
}

std::vector<ComplexMatrix> per_period_dft(const Trajectory& signal, const FrequencyGrid& grid) {
  const Index m = grid.size();
  const Index period = 2 * m;
  require(signal.length() % period == 0, ErrorCode::InvalidInput,
          "per_period_dft: record length " + std::to_string(signal.length()) +
              " is not a multiple of 2M = " + std::to_string(period));
  const Index periods = signal.length() / period;
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(periods));
  // Twiddles e^{-j w_k n}, shared across periods.
  ComplexMatrix twiddle(period, m);
  for (Index n = 0; n < period; ++n)
    for (Index k = 0; k < m; ++k) twiddle(n, k) = grid.unit_power(k, -static_cast<long>(n));
  for (Index p = 0; p < periods; ++p) {
    const RealMatrix block = signal.samples().middleCols(p * period, period);
    ComplexMatrix spec = block.cast<Complex>() * twiddle;
    // Bin 0 is a real sum; drop any rounding in the imaginary part.
    spec.col(0) = spec.col(0).real().cast<Complex>();
    out.push_back(std::move(spec));
  }
  return out;
}

PeriodSpectra period_spectra(const LoopRecord& record, const FrequencyGrid& grid) {
  return {per_period_dft(record.d, grid), per_period_dft(record.u, grid),
          per_period_dft(record.y, grid)};
}

FrfEstimate estimate_frf(const std::vector<PeriodSpectra>& experiments, const FrequencyGrid& grid) {
  require(!experiments.empty(), ErrorCode::InvalidInput, "estimate_frf: no experiments");
  const Index e_count = static_cast<Index>(experiments.size());
  const Index p = static_cast<Index>(experiments.front().u.size());
  require(p >= 2, ErrorCode::InvalidInput, "estimate_frf: at least two periods are required");
  const Index nu = experiments.front().u.front().rows();
  const Index ny = experiments.front().y.front().rows();
  const Index nd = experiments.front().d.front().rows();
  require(e_count == nu && nd == nu, ErrorCode::InvalidInput,
          "estimate_frf: need one experiment per input channel");
  for (const auto& ex : experiments) {
    require(static_cast<Index>(ex.d.size()) == p && static_cast<Index>(ex.y.size()) == p,
            ErrorCode::InvalidInput, "estimate_frf: period counts differ");
  }

  FrfEstimate est;
  est.grid = grid;
  est.periods = p;
  for (Index k = 0; k < grid.size(); ++k) {
    std::vector<ComplexMatrix> per_period;
    per_period.reserve(static_cast<std::size_t>(p));
    for (Index r = 0; r < p; ++r) {
      ComplexMatrix dm(nd, e_count), um(nu, e_count), ym(ny, e_count);
      for (Index e = 0; e < e_count; ++e) {
        const auto& ex = experiments[static_cast<std::size_t>(e)];
        dm.col(e) = ex.d[static_cast<std::size_t>(r)].col(k);
        um.col(e) = ex.u[static_cast<std::size_t>(r)].col(k);
        ym.col(e) = ex.y[static_cast<std::size_t>(r)].col(k);
      }
      const ComplexMatrix denom = um * dm.adjoint();
      const ComplexMatrix numer = ym * dm.adjoint();
      Eigen::PartialPivLU<ComplexMatrix> lu(denom.transpose());
      const double scale = um.norm() * dm.norm();
      const bool singular = denom.norm() <= 1e-14 * scale || !(lu.rcond() > 1e-14);
      if (scale == 0.0 || singular) {
        fail(ErrorCode::DegenerateBin, "estimate_frf: degenerate bin k=" + std::to_string(k) +
                                           " in period " + std::to_string(r + 1));
      }
      // H = numer * denom^{-1}  <=>  denom^T H^T = numer^T
      per_period.push_back(lu.solve(numer.transpose()).transpose());
    }
    ComplexMatrix mean = ComplexMatrix::Zero(ny, nu);
    for (const auto& h : per_period) mean += h;
    mean /= static_cast<double>(p);
    RealMatrix var = RealMatrix::Zero(ny, nu);
    for (const auto& h : per_period) var += (h - mean).cwiseAbs2();
    var /= static_cast<double>(p * (p - 1));
    if (k == 0) mean = mean.real().cast<Complex>();
    est.mean.push_back(std::move(mean));
    est.variance.push_back(std::move(var));
  }
  return est;
}

Experiment average_spectra(const PeriodSpectra& spectra, const FrequencyGrid& grid) {
  require(!spectra.u.empty() && spectra.u.size() == spectra.y.size(), ErrorCode::InvalidInput,
          "average_spectra: no periods");
  ComplexMatrix u = ComplexMatrix::Zero(spectra.u.front().rows(), grid.size());
  ComplexMatrix y = ComplexMatrix::Zero(spectra.y.front().rows(), grid.size());
  for (std::size_t r = 0; r < spectra.u.size(); ++r) {
    u += spectra.u[r];
    y += spectra.y[r];
  }
  const double p = static_cast<double>(spectra.u.size());
  Experiment e;
  e.input = Spectrum(grid, u / p);
  e.output = Spectrum(grid, y / p);
  return e;
}

SpectraCollection frf_dataset(const FrfEstimate& frf) {
  const Index m = frf.grid.size();
  const Index ny = frf.mean.front().rows();
  const Index nu = frf.mean.front().cols();
  std::vector<Experiment> exps;
  for (Index i = 0; i < nu; ++i) {
    ComplexMatrix u = ComplexMatrix::Zero(nu, m);
    u.row(i).setOnes();
    ComplexMatrix y(ny, m);
    for (Index k = 0; k < m; ++k) y.col(k) = frf.mean[static_cast<std::size_t>(k)].col(i);
    Experiment e;
    e.input = Spectrum(frf.grid, u);
    e.output = Spectrum(frf.grid, y);
    exps.push_back(std::move(e));
  }
  return SpectraCollection(frf.grid, std::move(exps));
}

SpectraCollection unit_direction_dataset(const StateSpaceModel& model, const FrequencyGrid& grid,
                                         bool with_state) {
  std::vector<Experiment> exps;
  for (Index i = 0; i < model.inputs(); ++i) {
    ComplexMatrix dirs = ComplexMatrix::Zero(model.inputs(), grid.size());
    dirs.row(i).setOnes();
    Experiment e = steady_state_spectrum(model, grid, dirs);
    if (!with_state) e.state.reset();
    exps.push_back(std::move(e));
  }
  return SpectraCollection(grid, std::move(exps));
}

ClosedLoopDataset collect_closed_loop_dataset(const StateSpaceModel& plant,
                                              const TransferMatrix& controller,
                                              const ClosedLoopDatasetConfig& config) {
  require(config.grid_size >= 1 && config.periods >= 1 && config.warmup_periods >= 0,
          ErrorCode::InvalidInput, "dataset: invalid grid size or period counts");
  require(config.noise_standard_deviation >= 0.0, ErrorCode::InvalidInput,
          "dataset: noise level must be >= 0");
  const FrequencyGrid grid(config.grid_size);
  const Index nu = plant.inputs();
  const Index period = 2 * config.grid_size;
  Rng rng(config.seed);
  ClosedLoopDataset out;
  std::vector<Trajectory> injections;
  for (Index e = 0; e < nu; ++e) {
    RealVector phases(config.grid_size);
    for (Index m = 0; m < config.grid_size; ++m) phases(m) = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Trajectory d = multisine(config.amplitude, grid, phases, period);
    RealMatrix inj = RealMatrix::Zero(nu, period);
    inj.row(e) = d.samples().row(0);
    injections.emplace_back(std::move(inj));
    out.phases.push_back(std::move(phases));
  }
  NoiseConfig noise;
  noise.standard_deviation = RealVector::Constant(plant.outputs(), config.noise_standard_deviation);
  noise.seed = rng.next_seed();

  ClosedLoopSetup setup{plant, controller, config.warmup_periods, config.periods};
  out.records = closed_loop_collect(setup, injections, noise);
  std::vector<PeriodSpectra> spectra;
  for (const auto& r : out.records) spectra.push_back(period_spectra(r, grid));

  if (config.mode == DatasetMode::FrfRatio) {
    require(config.periods >= 2, ErrorCode::InvalidInput,
            "dataset: FRF estimation needs at least two periods");
    out.frf = estimate_frf(spectra, grid);
    out.data = frf_dataset(*out.frf);
  } else {
    std::vector<Experiment> exps;
    for (const auto& s : spectra) exps.push_back(average_spectra(s, grid));
    out.data = SpectraCollection(grid, std::move(exps));
  }
  return out;
}

RealMatrix observability_matrix(const StateSpaceModel& model, Index depth) {
  RealMatrix o(model.outputs() * depth, model.states());
  RealMatrix cak = model.c;
  for (Index i = 0; i < depth; ++i) {
    o.middleRows(i * model.outputs(), model.outputs()) = cak;
    cak = cak * model.a;
  }
  return o;
}

RealMatrix toeplitz_matrix(const StateSpaceModel& model, Index depth) {
  const Index ny = model.outputs();
  const Index nu = model.inputs();
  RealMatrix t = RealMatrix::Zero(ny * depth, nu * depth);
  // Markov parameters D, CB, CAB, ...
  std::vector<RealMatrix> markov;
  markov.push_back(model.d);
  RealMatrix ak_b = model.b;
  for (Index i = 1; i < depth; ++i) {
    markov.push_back(model.c * ak_b);
    ak_b = model.a * ak_b;
  }
  for (Index r = 0; r < depth; ++r)
    for (Index c = 0; c <= r; ++c)
      t.block(r * ny, c * nu, ny, nu) = markov[static_cast<std::size_t>(r - c)];
  return t;
}

}  // namespace fdc
